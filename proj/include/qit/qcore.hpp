#pragma once

// Dense linear algebra over small labeled tensor-product Hilbert spaces.
//
// Every state and operator carries a Layout: an ordered list of named
// factors. Amplitude indices are row-major over the factors, so the first
// factor is the most significant digit and Kronecker products follow layout
// order.

#include <complex>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qit {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Labels = std::vector<std::string>;

namespace tol {
inline constexpr double norm = 1e-9;
inline constexpr double trace = 1e-9;
inline constexpr double herm = 1e-9;
inline constexpr double psd = 1e-9;
inline constexpr double eig = 1e-10;
inline constexpr double rec = 1e-10;
inline constexpr double unitary = 1e-9;
// Eigenvalues at or below this are treated as exact zeros when a rank is
// needed (purification, ensemble construction).
inline constexpr double rank = 1e-13;
}  // namespace tol

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Factor {
  std::string label;
  int dim = 1;
  bool operator==(const Factor&) const = default;
};

class Layout {
 public:
  Layout() = default;
  Layout(std::initializer_list<Factor> factors);
  explicit Layout(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t size() const { return factors_.size(); }
  int dim() const;
  Labels labels() const;

  bool contains(const std::string& label) const;
  std::size_t index_of(const std::string& label) const;
  int dim_of(const std::string& label) const;
  int dim_of(const Labels& labels) const;

  // Factors named in `labels`, kept in this layout's order.
  Layout subset(const Labels& labels) const;
  // Factors named in `labels`, in the order given.
  Layout select(const Labels& labels) const;
  Layout complement(const Labels& labels) const;
  Layout concat(const Layout& other) const;

  bool operator==(const Layout&) const = default;

 private:
  std::vector<Factor> factors_;
};

std::string to_string(const Layout& layout);

class PureState {
 public:
  // Throws unless the amplitudes have unit norm within tol::norm.
  PureState(Layout layout, Vector amplitudes);

  static PureState normalized(Layout layout, Vector amplitudes);
  static PureState basis(Layout layout, int index);

  const Layout& layout() const { return layout_; }
  const Vector& amplitudes() const { return amps_; }
  int dim() const { return layout_.dim(); }

 private:
  Layout layout_;
  Vector amps_;
};

class DensityMatrix {
 public:
  // Throws unless Hermitian, PSD and unit trace within tolerance.
  DensityMatrix(Layout layout, Matrix matrix);

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(Layout layout);

  const Layout& layout() const { return layout_; }
  const Matrix& matrix() const { return m_; }
  int dim() const { return layout_.dim(); }

 private:
  Layout layout_;
  Matrix m_;
};

// A unitary acting on the factors of `support`; identity elsewhere once
// embedded into a larger layout.
class UnitaryOp {
 public:
  UnitaryOp(Layout support, Matrix matrix);

  static UnitaryOp identity(Layout support);

  const Layout& support() const { return support_; }
  const Matrix& matrix() const { return m_; }
  UnitaryOp adjoint() const { return UnitaryOp(support_, m_.adjoint()); }

 private:
  Layout support_;
  Matrix m_;
};

// --- validation helpers -----------------------------------------------------

bool is_hermitian(const Matrix& m, double eps = tol::herm);
bool is_unitary(const Matrix& m, double eps = tol::unitary);
Matrix hermitian_part(const Matrix& m);

// --- tensor products --------------------------------------------------------

PureState tensor(const PureState& a, const PureState& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
UnitaryOp tensor(const UnitaryOp& a, const UnitaryOp& b);

// --- reindexing ---------------------------------------------------------------

// Reorders the factors of a vector to `order` (labels of `layout`).
Vector permute(const Vector& v, const Layout& layout, const Labels& order);
Matrix permute(const Matrix& m, const Layout& layout, const Labels& order);
PureState permute(const PureState& psi, const Labels& order);
DensityMatrix permute(const DensityMatrix& rho, const Labels& order);

// Applies `op` (acting on the factors of `op_layout`, in that order) to the
// factors of `layout` with the same labels.
Vector apply_local(const Matrix& op, const Layout& op_layout, const Vector& v,
                   const Layout& layout);
// op * m * op^dagger with op embedded as in apply_local.
Matrix conjugate_local(const Matrix& op, const Layout& op_layout, const Matrix& m,
                       const Layout& layout);
// Full matrix of op tensored with identity on the remaining factors.
Matrix embed(const Matrix& op, const Layout& op_layout, const Layout& layout);

// --- partial traces -----------------------------------------------------------

// Raw partial trace; works on any square matrix (no trace/PSD requirement).
Matrix partial_trace(const Matrix& m, const Layout& layout, const Labels& keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const Labels& keep);
DensityMatrix reduced(const PureState& psi, const Labels& keep);
// tr_{not keep} |v><v| for an unnormalized vector.
Matrix reduced_matrix(const Vector& v, const Layout& layout, const Labels& keep);

// Contracts <phi| on the factors of `phi_layout` against v; result lives on the
// remaining factors of `layout` (in layout order).
Vector contract(const Vector& phi, const Layout& phi_layout, const Vector& v,
                const Layout& layout);

// --- spectral functions ------------------------------------------------------

struct EigenSystem {
  RealVector values;  // descending
  Matrix vectors;     // columns
};

EigenSystem eig_hermitian(const Matrix& m);

// Eigenvalues only (descending); clamps [-tol::psd, 0) to zero.
RealVector psd_spectrum(const Matrix& m);

Matrix matrix_sqrt_psd(const Matrix& m);
// Natural log on the support; kernel directions contribute zero.
Matrix matrix_log_support(const Matrix& m);
Matrix matrix_exp_hermitian(const Matrix& h, cplx factor);

// --- states and operators ------------------------------------------------------

PureState purify(const DensityMatrix& rho, const std::string& reference_label);
PureState apply_unitary(const PureState& psi, const UnitaryOp& u);
DensityMatrix apply_unitary(const DensityMatrix& rho, const UnitaryOp& u);

double fidelity_overlap(const PureState& a, const PureState& b);  // |<a|b>|^2
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace qit
