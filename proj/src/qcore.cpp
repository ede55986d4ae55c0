#include "qit/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qit {

namespace {

std::vector<int> strides(const Layout& layout) {
  const auto& f = layout.factors();
  std::vector<int> s(f.size(), 1);
  for (int i = static_cast<int>(f.size()) - 2; i >= 0; --i) s[i] = s[i + 1] * f[i + 1].dim;
  return s;
}

// Offsets into `layout` of every multi-index over `labels`, enumerated
// row-major in the order of `labels`.
std::vector<int> offsets(const Layout& layout, const Labels& labels) {
  const auto st = strides(layout);
  std::vector<int> dims, str;
  for (const auto& l : labels) {
    const auto i = layout.index_of(l);
    dims.push_back(layout.factors()[i].dim);
    str.push_back(st[i]);
  }
  int total = 1;
  for (int d : dims) total *= d;
  std::vector<int> out(total, 0);
  std::vector<int> digit(dims.size(), 0);
  for (int n = 0; n < total; ++n) {
    int off = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) off += digit[k] * str[k];
    out[n] = off;
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
      if (++digit[k] < dims[k]) break;
      digit[k] = 0;
    }
  }
  return out;
}

void check_labels_match(const Layout& op_layout, const Layout& layout) {
  for (const auto& f : op_layout.factors()) {
    if (!layout.contains(f.label))
      throw Error("operator factor '" + f.label + "' not in layout " + to_string(layout));
    if (layout.dim_of(f.label) != f.dim)
      throw Error("dimension mismatch on factor '" + f.label + "'");
  }
}

}  // namespace

// --- Layout -------------------------------------------------------------------

Layout::Layout(std::initializer_list<Factor> factors)
    : Layout(std::vector<Factor>(factors)) {}

Layout::Layout(std::vector<Factor> factors) : factors_(std::move(factors)) {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].dim < 1) throw Error("factor '" + factors_[i].label + "' has dim < 1");
    if (factors_[i].label.empty()) throw Error("empty factor label");
    for (std::size_t j = 0; j < i; ++j)
      if (factors_[j].label == factors_[i].label)
        throw Error("duplicate factor label '" + factors_[i].label + "'");
  }
}

int Layout::dim() const {
  int d = 1;
  for (const auto& f : factors_) d *= f.dim;
  return d;
}

Labels Layout::labels() const {
  Labels out;
  for (const auto& f : factors_) out.push_back(f.label);
  return out;
}

bool Layout::contains(const std::string& label) const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [&](const Factor& f) { return f.label == label; });
}

std::size_t Layout::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].label == label) return i;
  throw Error("unknown factor label '" + label + "' in " + to_string(*this));
}

int Layout::dim_of(const std::string& label) const { return factors_[index_of(label)].dim; }

int Layout::dim_of(const Labels& labels) const {
  int d = 1;
  for (const auto& l : labels) d *= dim_of(l);
  return d;
}

Layout Layout::subset(const Labels& labels) const {
  for (const auto& l : labels) index_of(l);
  std::vector<Factor> out;
  for (const auto& f : factors_)
    if (std::find(labels.begin(), labels.end(), f.label) != labels.end()) out.push_back(f);
  return Layout(out);
}

Layout Layout::select(const Labels& labels) const {
  std::vector<Factor> out;
  for (const auto& l : labels) out.push_back(factors_[index_of(l)]);
  return Layout(out);
}

Layout Layout::complement(const Labels& labels) const {
  for (const auto& l : labels) index_of(l);
  std::vector<Factor> out;
  for (const auto& f : factors_)
    if (std::find(labels.begin(), labels.end(), f.label) == labels.end()) out.push_back(f);
  return Layout(out);
}

Layout Layout::concat(const Layout& other) const {
  std::vector<Factor> out = factors_;
  for (const auto& f : other.factors()) {
    if (contains(f.label)) throw Error("overlapping factor label '" + f.label + "'");
    out.push_back(f);
  }
  return Layout(out);
}

std::string to_string(const Layout& layout) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (i) os << ",";
    os << layout.factors()[i].label << ":" << layout.factors()[i].dim;
  }
  os << "]";
  return os.str();
}

// --- value types ----------------------------------------------------------------

PureState::PureState(Layout layout, Vector amplitudes)
    : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
  if (amps_.size() != layout_.dim()) throw Error("amplitude count does not match layout");
  if (std::abs(amps_.norm() - 1.0) > tol::norm) throw Error("state is not normalized");
}

PureState PureState::normalized(Layout layout, Vector amplitudes) {
  const double n = amplitudes.norm();
  if (n == 0.0) throw Error("cannot normalize the zero vector");
  return PureState(std::move(layout), amplitudes / n);
}

PureState PureState::basis(Layout layout, int index) {
  Vector v = Vector::Zero(layout.dim());
  if (index < 0 || index >= v.size()) throw Error("basis index out of range");
  v(index) = 1.0;
  return PureState(std::move(layout), std::move(v));
}

DensityMatrix::DensityMatrix(Layout layout, Matrix matrix) : layout_(std::move(layout)) {
  const int d = layout_.dim();
  if (matrix.rows() != d || matrix.cols() != d) throw Error("matrix does not match layout");
  if (!is_hermitian(matrix)) throw Error("density matrix is not Hermitian");
  m_ = hermitian_part(matrix);
  if (std::abs(m_.trace().real() - 1.0) > tol::trace) throw Error("density matrix trace != 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol::psd) throw Error("density matrix is not PSD");
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  const auto& a = psi.amplitudes();
  return DensityMatrix(psi.layout(), a * a.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Layout layout) {
  const int d = layout.dim();
  return DensityMatrix(std::move(layout), Matrix::Identity(d, d) / static_cast<double>(d));
}

UnitaryOp::UnitaryOp(Layout support, Matrix matrix)
    : support_(std::move(support)), m_(std::move(matrix)) {
  if (m_.rows() != support_.dim() || m_.cols() != support_.dim())
    throw Error("unitary does not match its support");
  if (!is_unitary(m_)) throw Error("operator is not unitary");
}

UnitaryOp UnitaryOp::identity(Layout support) {
  const int d = support.dim();
  return UnitaryOp(std::move(support), Matrix::Identity(d, d));
}

bool is_hermitian(const Matrix& m, double eps) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= eps * std::max(1.0, m.cwiseAbs().maxCoeff());
}

bool is_unitary(const Matrix& m, double eps) {
  if (m.rows() != m.cols()) return false;
  return (m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= eps;
}

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

// --- tensor products -----------------------------------------------------------

namespace {
Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}
}  // namespace

PureState tensor(const PureState& a, const PureState& b) {
  Layout l = a.layout().concat(b.layout());
  Vector v(a.dim() * b.dim());
  for (int i = 0; i < a.dim(); ++i)
    v.segment(i * b.dim(), b.dim()) = a.amplitudes()(i) * b.amplitudes();
  return PureState(std::move(l), std::move(v));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Layout l = a.layout().concat(b.layout());
  return DensityMatrix(std::move(l), kron(a.matrix(), b.matrix()));
}

UnitaryOp tensor(const UnitaryOp& a, const UnitaryOp& b) {
  Layout l = a.support().concat(b.support());
  return UnitaryOp(std::move(l), kron(a.matrix(), b.matrix()));
}

// --- reindexing ---------------------------------------------------------------------

Vector permute(const Vector& v, const Layout& layout, const Labels& order) {
  if (order.size() != layout.size()) throw Error("permutation must name every factor");
  const auto off = offsets(layout, order);
  Vector out(v.size());
  for (std::size_t n = 0; n < off.size(); ++n) out(n) = v(off[n]);
  return out;
}

Matrix permute(const Matrix& m, const Layout& layout, const Labels& order) {
  if (order.size() != layout.size()) throw Error("permutation must name every factor");
  const auto off = offsets(layout, order);
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < off.size(); ++i)
    for (std::size_t j = 0; j < off.size(); ++j) out(i, j) = m(off[i], off[j]);
  return out;
}

PureState permute(const PureState& psi, const Labels& order) {
  return PureState(psi.layout().select(order), permute(psi.amplitudes(), psi.layout(), order));
}

DensityMatrix permute(const DensityMatrix& rho, const Labels& order) {
  return DensityMatrix(rho.layout().select(order), permute(rho.matrix(), rho.layout(), order));
}

Vector apply_local(const Matrix& op, const Layout& op_layout, const Vector& v,
                   const Layout& layout) {
  check_labels_match(op_layout, layout);
  if (v.size() != layout.dim()) throw Error("vector does not match layout");
  const auto in = offsets(layout, op_layout.labels());
  const auto rest = offsets(layout, layout.complement(op_layout.labels()).labels());
  Vector out = Vector::Zero(v.size());
  const int d = static_cast<int>(in.size());
  for (int r : rest)
    for (int a = 0; a < d; ++a) {
      cplx acc = 0;
      for (int b = 0; b < d; ++b) acc += op(a, b) * v(in[b] + r);
      out(in[a] + r) = acc;
    }
  return out;
}

Matrix embed(const Matrix& op, const Layout& op_layout, const Layout& layout) {
  check_labels_match(op_layout, layout);
  const auto in = offsets(layout, op_layout.labels());
  const auto rest = offsets(layout, layout.complement(op_layout.labels()).labels());
  Matrix out = Matrix::Zero(layout.dim(), layout.dim());
  const int d = static_cast<int>(in.size());
  for (int r : rest)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) out(in[a] + r, in[b] + r) = op(a, b);
  return out;
}

Matrix conjugate_local(const Matrix& op, const Layout& op_layout, const Matrix& m,
                       const Layout& layout) {
  const Matrix e = embed(op, op_layout, layout);
  return e * m * e.adjoint();
}

// --- partial traces -------------------------------------------------------------

Matrix partial_trace(const Matrix& m, const Layout& layout, const Labels& keep) {
  const Layout kept = layout.subset(keep);
  const auto ok = offsets(layout, kept.labels());
  const auto ot = offsets(layout, layout.complement(keep).labels());
  const int dk = static_cast<int>(ok.size());
  Matrix out = Matrix::Zero(dk, dk);
  for (int i = 0; i < dk; ++i)
    for (int j = 0; j < dk; ++j) {
      cplx acc = 0;
      for (int t : ot) acc += m(ok[i] + t, ok[j] + t);
      out(i, j) = acc;
    }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const Labels& keep) {
  return DensityMatrix(rho.layout().subset(keep), partial_trace(rho.matrix(), rho.layout(), keep));
}

Matrix reduced_matrix(const Vector& v, const Layout& layout, const Labels& keep) {
  const Layout kept = layout.subset(keep);
  const auto ok = offsets(layout, kept.labels());
  const auto ot = offsets(layout, layout.complement(keep).labels());
  Matrix psi(ok.size(), ot.size());
  for (std::size_t i = 0; i < ok.size(); ++i)
    for (std::size_t t = 0; t < ot.size(); ++t) psi(i, t) = v(ok[i] + ot[t]);
  return psi * psi.adjoint();
}

DensityMatrix reduced(const PureState& psi, const Labels& keep) {
  return DensityMatrix(psi.layout().subset(keep),
                       reduced_matrix(psi.amplitudes(), psi.layout(), keep));
}

Vector contract(const Vector& phi, const Layout& phi_layout, const Vector& v,
                const Layout& layout) {
  check_labels_match(phi_layout, layout);
  const auto in = offsets(layout, phi_layout.labels());
  const auto rest = offsets(layout, layout.complement(phi_layout.labels()).labels());
  Vector out = Vector::Zero(static_cast<Eigen::Index>(rest.size()));
  for (std::size_t r = 0; r < rest.size(); ++r) {
    cplx acc = 0;
    for (std::size_t a = 0; a < in.size(); ++a) acc += std::conj(phi(a)) * v(in[a] + rest[r]);
    out(r) = acc;
  }
  return out;
}

// --- spectral functions ------------------------------------------------------------

EigenSystem eig_hermitian(const Matrix& m) {
  if (!is_hermitian(m)) throw Error("eig_hermitian: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
  if (es.info() != Eigen::Success) throw Error("eig_hermitian: solver failed");
  const int n = static_cast<int>(m.rows());
  EigenSystem out{RealVector(n), Matrix(n, n)};
  for (int i = 0; i < n; ++i) {
    out.values(i) = es.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

RealVector psd_spectrum(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  RealVector v = es.eigenvalues().reverse();
  if (v.size() && v(v.size() - 1) < -tol::psd) throw Error("matrix is not PSD");
  return v.cwiseMax(0.0);
}

Matrix matrix_sqrt_psd(const Matrix& m) {
  const auto es = eig_hermitian(m);
  if (es.values.size() && es.values.minCoeff() < -tol::psd)
    throw Error("matrix_sqrt_psd: negative eigenvalue");
  const RealVector s = es.values.cwiseMax(0.0).cwiseSqrt();
  return es.vectors * s.asDiagonal() * es.vectors.adjoint();
}

Matrix matrix_log_support(const Matrix& m) {
  const auto es = eig_hermitian(m);
  if (es.values.size() && es.values.minCoeff() < -tol::psd)
    throw Error("matrix_log_support: negative eigenvalue");
  RealVector l(es.values.size());
  for (Eigen::Index i = 0; i < l.size(); ++i)
    l(i) = es.values(i) > 0.0 ? std::log(es.values(i)) : 0.0;
  return es.vectors * l.asDiagonal() * es.vectors.adjoint();
}

Matrix matrix_exp_hermitian(const Matrix& h, cplx factor) {
  const auto es = eig_hermitian(h);
  Vector d(es.values.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = std::exp(factor * es.values(i));
  return es.vectors * d.asDiagonal() * es.vectors.adjoint();
}

// --- states and operators ----------------------------------------------------------

PureState purify(const DensityMatrix& rho, const std::string& reference_label) {
  const auto es = eig_hermitian(rho.matrix());
  int rank = 0;
  while (rank < es.values.size() && es.values(rank) > tol::rank) ++rank;
  if (rank == 0) throw Error("purify: zero matrix");
  const int d = rho.dim();
  Vector v = Vector::Zero(d * rank);
  for (int i = 0; i < rank; ++i) {
    const double w = std::sqrt(es.values(i));
    for (int a = 0; a < d; ++a) v(a * rank + i) = w * es.vectors(a, i);
  }
  Layout l = rho.layout().concat(Layout{{reference_label, rank}});
  return PureState::normalized(std::move(l), std::move(v));
}

PureState apply_unitary(const PureState& psi, const UnitaryOp& u) {
  return PureState::normalized(psi.layout(),
                               apply_local(u.matrix(), u.support(), psi.amplitudes(), psi.layout()));
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const UnitaryOp& u) {
  return DensityMatrix(rho.layout(),
                       conjugate_local(u.matrix(), u.support(), rho.matrix(), rho.layout()));
}

double fidelity_overlap(const PureState& a, const PureState& b) {
  if (!(a.layout() == b.layout())) throw Error("fidelity_overlap: layouts differ");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace qit
