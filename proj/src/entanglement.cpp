#include "qit/entanglement.hpp"

#include <algorithm>
#include <cmath>

namespace qit {

namespace {

void require_two_qubits(const Layout& l, const char* what) {
  if (l.size() != 2 || l.factors()[0].dim != 2 || l.factors()[1].dim != 2)
    throw Error(std::string(what) + ": expected a two-qubit layout, got " + to_string(l));
}

void require_proper_cut(const Layout& l, const Labels& cut) {
  if (cut.empty() || cut.size() >= l.size()) throw Error("cut must be a proper nonempty subset");
  for (const auto& c : cut) l.index_of(c);
}

Matrix cut_matrix(const PureState& psi, const Labels& cut) {
  // Amplitudes reshaped to (cut) x (rest).
  const Layout& l = psi.layout();
  Labels order = l.subset(cut).labels();
  const Labels rest = l.complement(cut).labels();
  order.insert(order.end(), rest.begin(), rest.end());
  const Vector v = permute(psi.amplitudes(), l, order);
  const int dc = l.dim_of(cut);
  const int dr = l.dim() / dc;
  Matrix m(dc, dr);
  for (int i = 0; i < dc; ++i)
    for (int j = 0; j < dr; ++j) m(i, j) = v(i * dr + j);
  return m;
}

}  // namespace

double spectrum_entropy(const RealVector& p) {
  double s = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) > 0) s -= p(i) * std::log(p(i));
  return s;
}

double von_neumann_entropy(const Matrix& m) { return spectrum_entropy(psd_spectrum(m)); }

double von_neumann_entropy(const DensityMatrix& rho) { return von_neumann_entropy(rho.matrix()); }

double shannon_entropy(const std::vector<double>& p) {
  double total = 0, s = 0;
  for (double x : p) {
    if (x < -tol::trace) throw Error("shannon_entropy: negative probability");
    total += x;
    if (x > 0) s -= x * std::log(x);
  }
  if (std::abs(total - 1.0) > tol::trace) throw Error("shannon_entropy: probabilities do not sum to 1");
  return s;
}

double binary_entropy(double x) {
  double s = 0;
  if (x > 0) s -= x * std::log(x);
  if (x < 1) s -= (1 - x) * std::log(1 - x);
  return s;
}

RealVector schmidt_coefficients(const PureState& psi, const Labels& cut) {
  require_proper_cut(psi.layout(), cut);
  Eigen::JacobiSVD<Matrix> svd(cut_matrix(psi, cut));
  return svd.singularValues();
}

double entanglement_entropy(const PureState& psi, const Labels& cut) {
  const RealVector s = schmidt_coefficients(psi, cut);
  const double e = spectrum_entropy(s.cwiseAbs2());
  // Both reductions share a spectrum; a mismatch means broken index arithmetic.
  const double other =
      von_neumann_entropy(reduced_matrix(psi.amplitudes(), psi.layout(),
                                         psi.layout().complement(cut).labels()));
  if (std::abs(e - other) > 1e-8) throw Error("entanglement_entropy: cut asymmetry");
  return e;
}

double relative_entropy(const Matrix& rho, const Matrix& sigma) {
  const auto es = eig_hermitian(sigma);
  Matrix kernel_weight = es.vectors.adjoint() * rho * es.vectors;
  RealVector logs(es.values.size());
  for (Eigen::Index i = 0; i < logs.size(); ++i) {
    if (es.values(i) > tol::rank) {
      logs(i) = std::log(es.values(i));
    } else {
      if (kernel_weight(i, i).real() > 1e-12) return kInfinity;
      logs(i) = 0.0;
    }
  }
  double cross = 0;
  for (Eigen::Index i = 0; i < logs.size(); ++i) cross += kernel_weight(i, i).real() * logs(i);
  const double d = -von_neumann_entropy(rho) - cross;
  return std::max(d, 0.0);
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (!(rho.layout() == sigma.layout())) throw Error("relative_entropy: layouts differ");
  return relative_entropy(rho.matrix(), sigma.matrix());
}

double concurrence_2q(const Matrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) throw Error("concurrence_2q: expected a 4x4 matrix");
  const auto es = eig_hermitian(rho);
  int r = 0;
  while (r < 4 && es.values(r) > tol::rank) ++r;
  if (r == 0) return 0.0;
  Matrix w(4, r);
  for (int i = 0; i < r; ++i) w.col(i) = es.vectors.col(i) * std::sqrt(es.values(i));
  Matrix yy = Matrix::Zero(4, 4);
  yy(0, 3) = -1;
  yy(1, 2) = 1;
  yy(2, 1) = 1;
  yy(3, 0) = -1;
  const Matrix t = w.transpose() * yy * w;
  Eigen::JacobiSVD<Matrix> svd(t);
  RealVector mu = RealVector::Zero(4);
  mu.head(svd.singularValues().size()) = svd.singularValues();
  return std::clamp(mu(0) - mu(1) - mu(2) - mu(3), 0.0, 1.0);
}

double concurrence_2q(const DensityMatrix& rho) {
  require_two_qubits(rho.layout(), "concurrence_2q");
  return concurrence_2q(rho.matrix());
}

double eof_from_concurrence(double c) {
  c = std::clamp(c, 0.0, 1.0);
  return binary_entropy((1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))) / 2.0);
}

double eof_2q(const Matrix& rho) { return eof_from_concurrence(concurrence_2q(rho)); }

double eof_2q(const DensityMatrix& rho) {
  require_two_qubits(rho.layout(), "eof_2q");
  return eof_2q(rho.matrix());
}

bool lu_equivalent_pure_2q(const PureState& a, const PureState& b) {
  require_two_qubits(a.layout(), "lu_equivalent_pure_2q");
  require_two_qubits(b.layout(), "lu_equivalent_pure_2q");
  const RealVector sa = schmidt_coefficients(a, {a.layout().factors()[0].label});
  const RealVector sb = schmidt_coefficients(b, {b.layout().factors()[0].label});
  return (sa - sb).cwiseAbs().maxCoeff() <= kSchmidtTol;
}

}  // namespace qit
