#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "qit/convex_roof.hpp"
#include "qit/entanglement.hpp"
#include "qit/random.hpp"

using namespace qit;
using fx::diag;

namespace {
const double kLog2 = std::log(2.0);
}

TEST_SUITE("entanglement") {

TEST_CASE("von Neumann and Shannon entropies") {
  CHECK(von_neumann_entropy(DensityMatrix::from_pure(fx::bell())) == doctest::Approx(0).epsilon(1e-14));
  CHECK(std::abs(von_neumann_entropy(DensityMatrix::maximally_mixed(Layout{{"S", 2}})) - kLog2) < 1e-14);
  const double h = -0.9 * std::log(0.9) - 0.1 * std::log(0.1);
  CHECK(std::abs(von_neumann_entropy(DensityMatrix(Layout{{"S", 2}}, diag({0.9, 0.1}))) - h) < 1e-14);

  CHECK(shannon_entropy({1, 0}) == 0);
  CHECK(std::abs(shannon_entropy({0.5, 0.5}) - kLog2) < 1e-15);
  CHECK(std::abs(shannon_entropy({0.25, 0.75}) - (-0.25 * std::log(0.25) - 0.75 * std::log(0.75))) < 1e-15);
  CHECK_THROWS_AS(shannon_entropy({0.5, 0.6}), Error);
}

TEST_CASE("entanglement entropy") {
  CHECK(std::abs(entanglement_entropy(fx::bell(), {"S"}) - kLog2) < 1e-14);
  const PureState prod = fx::ket(Layout{{"A", 2}, {"B", 2}}, {{0, 1}, {1, 1}});  // |0>|+>
  CHECK(entanglement_entropy(prod, {"A"}) < 1e-14);
  CHECK(entanglement_entropy(prod, {"B"}) < 1e-14);
  CHECK(std::abs(entanglement_entropy(fx::ghz(), {"P"}) - kLog2) < 1e-14);
  CHECK(std::abs(entanglement_entropy(fx::ghz(), {"S", "R1"}) - kLog2) < 1e-14);
}

TEST_CASE("relative entropy") {
  Rng rng(2);
  const DensityMatrix r = random_density(Layout{{"S", 3}}, 3, rng);
  CHECK(std::abs(relative_entropy(r, r)) < 1e-12);
  CHECK(std::isinf(relative_entropy(diag({1, 0}), diag({0, 1}))));
  for (double p : {0.1, 0.3, 0.5, 0.8}) {
    const double want = -kLog2 - 0.5 * std::log(p * (1 - p));
    CHECK(std::abs(relative_entropy(Matrix(Matrix::Identity(2, 2) / 2.0), diag({p, 1 - p})) - want) < 1e-13);
  }
}

TEST_CASE("property: relative entropy is non-negative and S(rho) <= log d") {
  Rng rng(21);
  for (int t = 0; t < 200; ++t) {
    const int d = 2 + t % 4;
    const DensityMatrix a = random_density(Layout{{"S", d}}, 1 + t % d, rng);
    const DensityMatrix b = random_density(Layout{{"S", d}}, d, rng);
    CHECK(relative_entropy(a, b) >= -1e-12);
    CHECK(von_neumann_entropy(a) <= std::log(static_cast<double>(d)) + 1e-12);
  }
}

TEST_CASE("concurrence and Wootters formula") {
  CHECK(std::abs(concurrence_2q(DensityMatrix::from_pure(fx::bell())) - 1) < 1e-14);
  Rng rng(3);
  const DensityMatrix prod = tensor(random_density(Layout{{"A", 2}}, 2, rng), random_density(Layout{{"B", 2}}, 2, rng));
  CHECK(concurrence_2q(prod) < 1e-12);

  const Matrix w_sr = reduced(fx::w_state(), {"S", "R1"}).matrix();
  CHECK(std::abs(concurrence_2q(w_sr) - 2.0 / 3.0) < 1e-12);

  CHECK(std::abs(eof_from_concurrence(1) - kLog2) < 1e-15);
  CHECK(eof_from_concurrence(0) == 0);
  const double x = (1 + std::sqrt(5.0) / 3) / 2;
  CHECK(std::abs(eof_2q(w_sr) - binary_entropy(x)) < 1e-12);
}

TEST_CASE("property: concurrence matches the Hermitian-similarity route") {
  // mu_i^2 = eigenvalues of sqrt(rho) (yy rho* yy) sqrt(rho).
  Matrix yy = Matrix::Zero(4, 4);
  yy(0, 3) = -1;
  yy(1, 2) = 1;
  yy(2, 1) = 1;
  yy(3, 0) = -1;
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    const Matrix rho = random_density_matrix(4, 1 + t % 4, rng);
    const Matrix sq = matrix_sqrt_psd(rho);
    const Matrix r = sq * yy * rho.conjugate() * yy * sq;
    const RealVector mu2 = psd_spectrum((r + r.adjoint()) / 2.0);
    const double c = std::max(0.0, std::sqrt(mu2(0)) - std::sqrt(mu2(1)) - std::sqrt(mu2(2)) - std::sqrt(mu2(3)));
    CHECK(std::abs(concurrence_2q(rho) - c) <= 1e-6);
  }
}

TEST_CASE("W-state entanglement of formation: convex roof agrees with the closed form") {
  const DensityMatrix w_sr(Layout{{"S", 2}, {"R1", 2}}, reduced(fx::w_state(), {"S", "R1"}).matrix());
  const RoofResult r = eof_convex_roof(w_sr, {"S"}, {4, 64, 9, 400, 1e-11});
  CHECK(std::abs(r.value - eof_2q(w_sr)) <= 1e-3);
  CHECK(max_abs_diff(r.witness.mixture(), w_sr.matrix()) < 1e-10);
}

TEST_CASE("convex roof: pure and separable inputs") {
  Rng rng(8);
  const PureState psi = haar_state(Layout{{"A", 2}, {"B", 3}}, rng);
  for (int m : {1, 3}) {
    const RoofResult r = eof_convex_roof(DensityMatrix::from_pure(psi), {"A"}, {m, 4, 1, 400, 1e-11});
    CHECK(std::abs(r.value - entanglement_entropy(psi, {"A"})) < 1e-12);
  }

  Matrix sep = Matrix::Zero(6, 6);
  const double w[3] = {0.5, 0.3, 0.2};
  for (int i = 0; i < 3; ++i) {
    const PureState a = haar_state(Layout{{"A", 2}}, rng);
    const PureState b = haar_state(Layout{{"B", 3}}, rng);
    const Vector ab = tensor(a, b).amplitudes();
    sep += w[i] * ab * ab.adjoint();
  }
  const RoofResult r = eof_convex_roof(DensityMatrix(Layout{{"A", 2}, {"B", 3}}, sep), {"A"}, {9, 32, 2, 400, 1e-11});
  CHECK(r.value <= 1e-6);
}

TEST_CASE("property: convex roof never undercuts Wootters on rank-2 states") {
  Rng rng(13);
  for (int t = 0; t < 10; ++t) {
    const DensityMatrix rho = random_density(Layout{{"A", 2}, {"B", 2}}, 2, rng);
    const RoofResult r = eof_convex_roof(rho, {"A"}, {4, 16, static_cast<std::uint64_t>(t), 400, 1e-11});
    CHECK(r.value >= eof_2q(rho) - 1e-9);
    CHECK(r.value <= eof_2q(rho) + 1e-3);
    // The eigen-ensemble (identity isometry) is one feasible point.
    CHECK(r.value <= roof_objective(rho, {"A"}, Matrix::Identity(4, 2)) + 1e-12);
  }
}

TEST_CASE("LU equivalence of two-qubit pure states") {
  Rng rng(4);
  const Layout l{{"A", 2}, {"B", 2}};
  const PureState psi = haar_state(l, rng);
  const UnitaryOp uv = tensor(UnitaryOp(Layout{{"A", 2}}, haar_unitary(2, rng)), UnitaryOp(Layout{{"B", 2}}, haar_unitary(2, rng)));
  CHECK(lu_equivalent_pure_2q(psi, apply_unitary(psi, uv)));
  CHECK_FALSE(lu_equivalent_pure_2q(fx::bell("A", "B"), PureState::basis(l, 0)));
  const PureState a = fx::ket(l, {{0, std::sqrt(0.9)}, {3, std::sqrt(0.1)}});
  const PureState b = fx::ket(l, {{0, std::sqrt(0.8)}, {3, std::sqrt(0.2)}});
  CHECK_FALSE(lu_equivalent_pure_2q(a, b));
}

}  // TEST_SUITE
