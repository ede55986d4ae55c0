#pragma once

// Derivative-free minimization for small parameter vectors.

#include <functional>
#include <vector>

namespace qit {

struct MinimizeResult {
  std::vector<double> x;
  double value = 0;
  int evaluations = 0;
};

// Nelder-Mead simplex search started from x0 with initial edge `step`.
MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                           std::vector<double> x0, double step, int max_evaluations = 2000,
                           double ftol = 1e-14);

}  // namespace qit
