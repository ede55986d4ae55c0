#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "qit/qcore.hpp"
#include "qit/random.hpp"

using namespace qit;
using fx::diag;

TEST_SUITE("qcore") {

TEST_CASE("tensor of basis states and of maximally mixed states") {
  const PureState a = PureState::basis(Layout{{"A", 2}}, 0);
  const PureState b = PureState::basis(Layout{{"B", 2}}, 0);
  const PureState ab = tensor(a, b);
  CHECK(ab.layout() == Layout{{"A", 2}, {"B", 2}});
  CHECK(std::abs(ab.amplitudes()(0) - 1.0) < 1e-15);
  CHECK(ab.amplitudes().tail(3).norm() < 1e-15);

  const DensityMatrix m = tensor(DensityMatrix::maximally_mixed(Layout{{"A", 2}}),
                                 DensityMatrix::maximally_mixed(Layout{{"B", 2}}));
  CHECK(max_abs_diff(m.matrix(), Matrix::Identity(4, 4) / 4.0) < 1e-15);
}

TEST_CASE("Bell x |0> puts amplitude 1/sqrt2 at 000 and 110") {
  const PureState v = tensor(fx::bell("S", "R"), PureState::basis(Layout{{"P", 2}}, 0));
  CHECK(v.layout() == Layout{{"S", 2}, {"R", 2}, {"P", 2}});
  for (int i = 0; i < 8; ++i) {
    const double want = (i == 0 || i == 6) ? 1 / std::sqrt(2.0) : 0.0;
    CHECK(std::abs(v.amplitudes()(i) - want) < 1e-15);
  }
}

TEST_CASE("partial traces") {
  CHECK(max_abs_diff(reduced(fx::bell(), {"R"}).matrix(), Matrix::Identity(2, 2) / 2.0) < 1e-15);

  Rng rng(3);
  const DensityMatrix rs = random_density(Layout{{"S", 2}}, 2, rng);
  const DensityMatrix rb = random_density(Layout{{"B", 3}}, 2, rng);
  CHECK(max_abs_diff(partial_trace(tensor(rs, rb), {"S"}).matrix(), rs.matrix()) < 1e-14);
  CHECK(max_abs_diff(partial_trace(tensor(rs, rb), {"B"}).matrix(), rb.matrix()) < 1e-14);

  const Matrix sr = reduced(fx::ghz(), {"S", "R1"}).matrix();
  CHECK(max_abs_diff(sr, diag({0.5, 0, 0, 0.5})) < 1e-15);
}

TEST_CASE("partial trace respects the requested factor order") {
  Rng rng(4);
  const DensityMatrix a = random_density(Layout{{"A", 2}}, 2, rng);
  const DensityMatrix b = random_density(Layout{{"B", 3}}, 1, rng);
  const DensityMatrix c = random_density(Layout{{"C", 2}}, 2, rng);
  const DensityMatrix abc = tensor(tensor(a, b), c);
  const DensityMatrix ac = partial_trace(abc, {"C", "A"});
  CHECK(ac.layout() == Layout{{"A", 2}, {"C", 2}});
  CHECK(max_abs_diff(ac.matrix(), tensor(a, c).matrix()) < 1e-14);
}

TEST_CASE("eig_hermitian") {
  const auto d = eig_hermitian(diag({0.3, 0.7}));
  CHECK(std::abs(d.values(0) - 0.7) < 1e-15);
  CHECK(std::abs(d.values(1) - 0.3) < 1e-15);
  CHECK(std::abs(std::abs(d.vectors(1, 0)) - 1.0) < 1e-15);

  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1;
  const auto ex = eig_hermitian(x);
  CHECK(std::abs(ex.values(0) - 1) < 1e-15);
  CHECK(std::abs(ex.values(1) + 1) < 1e-15);
  CHECK(std::abs(std::abs(ex.vectors(0, 0)) - 1 / std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(ex.vectors(0, 0) - ex.vectors(1, 0)) < 1e-14);

  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = 1;
  CHECK_THROWS_AS(eig_hermitian(bad), Error);
}

TEST_CASE("property: eigen-decomposition reconstructs random Hermitian matrices") {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + t % 7;
    const Matrix h = random_hermitian(n, rng);
    const auto es = eig_hermitian(h);
    const Matrix back = es.vectors * es.values.cast<cplx>().asDiagonal() * es.vectors.adjoint();
    CHECK(max_abs_diff(back, h) <= 1e-10);
    for (int i = 1; i < n; ++i) CHECK(es.values(i - 1) >= es.values(i));
  }
}

TEST_CASE("matrix functions") {
  CHECK(max_abs_diff(matrix_sqrt_psd(diag({4, 9})), diag({2, 3})) < 1e-14);
  Vector v(2);
  v << 0.6, cplx(0, 0.8);
  const Matrix proj = v * v.adjoint();
  CHECK(max_abs_diff(matrix_sqrt_psd(proj), proj) < 1e-8);
  CHECK(max_abs_diff(matrix_log_support(diag({0.5, 0.5, 0})), diag({std::log(0.5), std::log(0.5), 0})) < 1e-15);
  CHECK_THROWS_AS(matrix_sqrt_psd(diag({1, -0.1})), Error);

  Matrix z = diag({1, -1});
  const Matrix u = matrix_exp_hermitian(z, cplx(0, -0.3));
  CHECK(std::abs(u(0, 0) - std::polar(1.0, -0.3)) < 1e-14);
  CHECK(std::abs(u(1, 1) - std::polar(1.0, 0.3)) < 1e-14);
}

TEST_CASE("purification") {
  const PureState p = purify(DensityMatrix::maximally_mixed(Layout{{"S", 2}}), "R");
  CHECK(p.layout().dim_of("R") == 2);
  CHECK(max_abs_diff(reduced(p, {"S"}).matrix(), Matrix::Identity(2, 2) / 2.0) < 1e-15);
  CHECK(max_abs_diff(reduced(p, {"R"}).matrix(), Matrix::Identity(2, 2) / 2.0) < 1e-15);

  const PureState zero = PureState::basis(Layout{{"S", 2}}, 1);
  const PureState pz = purify(DensityMatrix::from_pure(zero), "R");
  CHECK(pz.layout().dim_of("R") == 1);
  CHECK(fidelity_overlap(PureState(zero.layout(), pz.amplitudes()), zero) > 1 - 1e-15);

  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const DensityMatrix rho = random_density(Layout{{"S", 3}}, 3, rng);
    const PureState q = purify(rho, "R");
    CHECK(q.layout().dim_of("R") == 3);
    CHECK(max_abs_diff(reduced(q, {"S"}).matrix(), rho.matrix()) <= 1e-10);
  }
}

TEST_CASE("apply_unitary") {
  Rng rng(6);
  const PureState psi = haar_state(Layout{{"S", 2}, {"P", 2}}, rng);
  const PureState same = apply_unitary(psi, UnitaryOp::identity(psi.layout()));
  CHECK((same.amplitudes() - psi.amplitudes()).norm() < 1e-15);

  // CNOT with S as control, written on (S, P) and applied to a P, S layout.
  Matrix cnot = Matrix::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = 1;
  cnot(2, 3) = cnot(3, 2) = 1;
  const PureState in = PureState::basis(Layout{{"P", 2}, {"S", 2}}, 1);  // |0>_P |1>_S
  const PureState out = apply_unitary(in, UnitaryOp(Layout{{"S", 2}, {"P", 2}}, cnot));
  CHECK(std::abs(out.amplitudes()(3) - 1.0) < 1e-15);  // |1>_P |1>_S

  for (int t = 0; t < 100; ++t) {
    const PureState v = haar_state(Layout{{"A", 2}, {"B", 3}, {"C", 2}}, rng);
    const UnitaryOp u(Layout{{"C", 2}, {"A", 2}}, haar_unitary(4, rng));
    CHECK(std::abs(apply_unitary(v, u).amplitudes().norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(PureState(Layout{{"A", 2}}, Vector::Ones(2)), Error);
  CHECK_THROWS_AS(DensityMatrix(Layout{{"A", 2}}, diag({0.6, 0.6})), Error);
  CHECK_THROWS_AS(DensityMatrix(Layout{{"A", 2}}, diag({1.2, -0.2})), Error);
  CHECK_THROWS_AS(UnitaryOp(Layout{{"A", 2}}, diag({1, 0.5})), Error);
  CHECK_THROWS_AS((Layout{{"A", 2}, {"A", 3}}), Error);
}

}  // TEST_SUITE
