#pragma once

// Named states shared by the unit tests.

#include <cmath>

#include "qit/qcore.hpp"

namespace fx {

using namespace qit;

inline PureState ket(const Layout& l, std::initializer_list<std::pair<int, double>> terms) {
  Vector v = Vector::Zero(l.dim());
  for (const auto& [i, a] : terms) v(i) = a;
  return PureState::normalized(l, v);
}

inline PureState bell(const std::string& a = "S", const std::string& b = "R") {
  return ket(Layout{{a, 2}, {b, 2}}, {{0, 1}, {3, 1}});
}

inline PureState ghz() { return ket(Layout{{"P", 2}, {"S", 2}, {"R1", 2}}, {{0, 1}, {7, 1}}); }

inline PureState w_state() { return ket(Layout{{"P", 2}, {"S", 2}, {"R1", 2}}, {{1, 1}, {2, 1}, {4, 1}}); }

inline Matrix diag(std::initializer_list<double> d) {
  Matrix m = Matrix::Zero(d.size(), d.size());
  int i = 0;
  for (double x : d) m(i, i) = x, ++i;
  return m;
}

}  // namespace fx
