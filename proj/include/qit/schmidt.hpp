#pragma once

// Generalized Schmidt decomposition of three-qubit pure states:
//   l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>,  0 <= phi <= pi,
// reached by local unitaries, and the invariants built from it.
//
// Party order is the layout order of the input; the first factor plays the
// role of the probe P, then S, then R1.

#include <array>

#include "qit/qcore.hpp"

namespace qit {

struct GSDecomposition {
  std::array<double, 5> lambdas{};
  double phase = 0;
  Matrix u_p, u_s, u_r1;  // (u_p x u_s x u_r1)|psi> = canonical()
  // Two gauge branches reached the range [0, pi]; the larger l0 was kept.
  bool dual = false;
  double residual = 0;  // max-abs reconstruction error

  Vector canonical() const;
};

GSDecomposition gsd(const PureState& psi);

struct AppendixParams {
  double tau = 0;
  double c_ps = 0, c_pr1 = 0, c_sr1 = 0;
  double k_ps = 0, k_pr1 = 0, k_sr1 = 0;
  double j5 = 0, k5 = 0, delta_j = 0;
  double phi5 = 0;
  bool phi5_degenerate = false;
  int q_e = 0;
  // K5^2 - K_PS K_PR1 C_SR1^2, the radicand in the denominator of a.
  double radicand = 0;
};

AppendixParams appendix_params(const GSDecomposition& g);

// Concurrences of the three two-party reductions, computed from the state.
struct PairConcurrences {
  double ps = 0, pr1 = 0, sr1 = 0;
};
PairConcurrences pair_concurrences(const PureState& psi);

// CKW residual tangle 4 det(rho_P) - C_PS^2 - C_PR1^2; cross-checked against
// 4 l0^2 l4^2 from the decomposition (throws on disagreement beyond 1e-8).
double tangle_3q(const PureState& psi);

}  // namespace qit
