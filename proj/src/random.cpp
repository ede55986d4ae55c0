#include "qit/random.hpp"

#include <cmath>

namespace qit {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {
Matrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = cplx(n(rng), n(rng));
  return g;
}
}  // namespace

Matrix haar_unitary(int n, Rng& rng) {
  // QR of a Ginibre matrix with the phases of R's diagonal divided out.
  Eigen::HouseholderQR<Matrix> qr(ginibre(n, n, rng));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const cplx d = r(i, i);
    const double a = std::abs(d);
    q.col(i) *= a > 0 ? d / a : cplx(1.0);
  }
  return q;
}

Vector haar_vector(int n, Rng& rng) {
  Vector v = ginibre(n, 1, rng).col(0);
  return v / v.norm();
}

PureState haar_state(const Layout& layout, Rng& rng) {
  return PureState(layout, haar_vector(layout.dim(), rng));
}

Matrix random_density_matrix(int n, int rank, Rng& rng) {
  const Matrix g = ginibre(n, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return hermitian_part(rho);
}

DensityMatrix random_density(const Layout& layout, int rank, Rng& rng) {
  return DensityMatrix(layout, random_density_matrix(layout.dim(), rank, rng));
}

Matrix random_hermitian(int n, Rng& rng) {
  return hermitian_part(ginibre(n, n, rng));
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace qit
