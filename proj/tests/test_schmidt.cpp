#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "qit/random.hpp"
#include "qit/schmidt.hpp"

using namespace qit;

namespace {

const Layout kPSR{{"P", 2}, {"S", 2}, {"R1", 2}};

double invariant_gap(const PureState& a, const PureState& b) {
  const PairConcurrences x = pair_concurrences(a), y = pair_concurrences(b);
  return std::max({std::abs(x.ps - y.ps), std::abs(x.pr1 - y.pr1), std::abs(x.sr1 - y.sr1),
                   std::abs(tangle_3q(a) - tangle_3q(b))});
}

}  // namespace

TEST_SUITE("schmidt") {

TEST_CASE("|000> is already canonical") {
  const GSDecomposition g = gsd(PureState::basis(kPSR, 0));
  CHECK(std::abs(g.lambdas[0] - 1) < 1e-14);
  for (int i = 1; i < 5; ++i) CHECK(g.lambdas[i] < 1e-14);
  CHECK(g.residual < 1e-14);
}

TEST_CASE("GHZ: l0 = l4 = 1/sqrt2 and phase 0") {
  const GSDecomposition g = gsd(fx::ghz());
  CHECK(std::abs(g.lambdas[0] - 1 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(g.lambdas[4] - 1 / std::sqrt(2.0)) < 1e-12);
  for (int i = 1; i < 4; ++i) CHECK(g.lambdas[i] < 1e-12);
  CHECK(g.phase == 0);
  CHECK(g.residual < 1e-12);
  CHECK(invariant_gap(fx::ghz(), PureState(kPSR, g.canonical())) < 1e-12);
}

TEST_CASE("tangle") {
  CHECK(std::abs(tangle_3q(fx::ghz()) - 1) < 1e-12);
  CHECK(std::abs(tangle_3q(fx::w_state())) < 1e-12);
  const PureState p_bell = tensor(PureState::basis(Layout{{"P", 2}}, 1), fx::bell("S", "R1"));
  CHECK(std::abs(tangle_3q(p_bell)) < 1e-12);
}

TEST_CASE("appendix parameters of GHZ and of a product state") {
  const AppendixParams a = appendix_params(gsd(fx::ghz()));
  CHECK(std::abs(a.j5) < 1e-12);
  CHECK(std::abs(a.k5 - 1) < 1e-12);
  CHECK(std::abs(a.tau - 1) < 1e-12);
  CHECK(std::abs(a.delta_j) < 1e-12);
  CHECK(a.q_e == 0);

  const AppendixParams p = appendix_params(gsd(PureState::basis(kPSR, 0)));
  CHECK(p.c_ps == 0);
  CHECK(p.c_pr1 == 0);
  CHECK(p.c_sr1 < 1e-14);
  CHECK(p.tau == 0);
  CHECK(std::abs(p.j5) < 1e-14);
}

TEST_CASE("property: decomposition of Haar-random states") {
  Rng rng(17);
  for (int t = 0; t < 300; ++t) {
    const PureState psi = haar_state(kPSR, rng);
    const GSDecomposition g = gsd(psi);
    CHECK(g.residual <= 1e-8);
    CHECK(g.phase >= 0);
    CHECK(g.phase <= std::numbers::pi);
    double norm = 0;
    for (double l : g.lambdas) {
      CHECK(l >= 0);
      norm += l * l;
    }
    CHECK(std::abs(norm - 1) < 1e-10);
    CHECK(invariant_gap(psi, PureState(kPSR, g.canonical())) <= 1e-8);

    const AppendixParams a = appendix_params(g);
    CHECK(std::abs(a.k_sr1 - a.tau - a.c_sr1 * a.c_sr1) <= 1e-10);
    const PairConcurrences pc = pair_concurrences(psi);
    CHECK(std::abs(pc.ps - a.c_ps) <= 1e-8);
    CHECK(std::abs(pc.pr1 - a.c_pr1) <= 1e-8);
    CHECK(std::abs(pc.sr1 - a.c_sr1) <= 1e-8);
  }
}

TEST_CASE("property: local unitaries leave the canonical form unchanged") {
  Rng rng(18);
  for (int t = 0; t < 50; ++t) {
    const PureState psi = haar_state(kPSR, rng);
    const UnitaryOp loc = tensor(tensor(UnitaryOp(Layout{{"P", 2}}, haar_unitary(2, rng)),
                                        UnitaryOp(Layout{{"S", 2}}, haar_unitary(2, rng))),
                                 UnitaryOp(Layout{{"R1", 2}}, haar_unitary(2, rng)));
    const GSDecomposition a = gsd(psi), b = gsd(apply_unitary(psi, loc));
    for (int i = 0; i < 5; ++i) CHECK(std::abs(a.lambdas[i] - b.lambdas[i]) <= 1e-8);
    CHECK(std::abs(a.phase - b.phase) <= 1e-7);
  }
}

}  // TEST_SUITE
