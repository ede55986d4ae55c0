#pragma once

// Entropies, relative entropy and two-qubit entanglement measures.

#include <limits>
#include <vector>

#include "qit/qcore.hpp"

namespace qit {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// -sum p log p over the entries of a spectrum; entries <= 0 contribute 0.
double spectrum_entropy(const RealVector& p);
double von_neumann_entropy(const DensityMatrix& rho);
// Entropy of a PSD matrix taken as is (no trace normalization).
double von_neumann_entropy(const Matrix& m);
double shannon_entropy(const std::vector<double>& p);
double binary_entropy(double x);

// Schmidt coefficients (descending, sum of squares 1) across `cut` vs the rest.
RealVector schmidt_coefficients(const PureState& psi, const Labels& cut);
double entanglement_entropy(const PureState& psi, const Labels& cut);

// tr[rho (log rho - log sigma)], or kInfinity when supp(rho) is not inside
// supp(sigma).
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);
double relative_entropy(const Matrix& rho, const Matrix& sigma);

// Wootters concurrence. The mu_i are the singular values of W^T (Y x Y) W
// with rho = W W^dagger, equal to the square roots of the eigenvalues of
// rho (Y x Y) rho* (Y x Y).
double concurrence_2q(const DensityMatrix& rho);
double concurrence_2q(const Matrix& rho);
double eof_from_concurrence(double c);
double eof_2q(const DensityMatrix& rho);
double eof_2q(const Matrix& rho);

inline constexpr double kSchmidtTol = 1e-8;
bool lu_equivalent_pure_2q(const PureState& a, const PureState& b);

}  // namespace qit
