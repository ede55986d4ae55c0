#pragma once

// Numerical entanglement of formation by minimizing over pure-state ensembles.
//
// Every size-m ensemble of a rank-r state rho = sum_i l_i |e_i><e_i| is
//   w_j = sum_i V_ji sqrt(l_i) |e_i>,   q_j = |w_j|^2,
// for some m x r matrix V with orthonormal columns. The average entanglement
// is minimized over V on that (Stiefel) manifold by Riemannian gradient descent
// from several starting points.

#include <cstdint>
#include <vector>

#include "qit/qcore.hpp"

namespace qit {

struct EnsembleDecomposition {
  std::vector<double> weights;
  std::vector<PureState> members;

  Matrix mixture() const;
};

struct RoofOptions {
  int ensemble_size = 0;  // 0 means rank^2
  int restarts = 64;
  std::uint64_t seed = 1;
  int max_iterations = 400;
  double gradient_tol = 1e-11;
};

struct RoofResult {
  double value = 0;
  EnsembleDecomposition witness;
  std::vector<double> restart_values;  // local minimum reached by each restart
};

RoofResult eof_convex_roof(const DensityMatrix& rho, const Labels& cut,
                           const RoofOptions& options = {});

// Average entanglement of the ensemble generated by isometry `v`; exposed for
// tests.
double roof_objective(const DensityMatrix& rho, const Labels& cut, const Matrix& v);

}  // namespace qit
