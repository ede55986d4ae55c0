#include "qit/optmeas.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qit/entanglement.hpp"
#include "qit/optimize.hpp"

namespace qit {

namespace {

// Columns spanning the orthogonal complement of the orthonormal columns of v.
Matrix complement_columns(const Matrix& v) {
  const auto n = v.rows();
  if (v.cols() == n) return Matrix(n, 0);
  if (v.cols() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(v, Eigen::ComputeFullU);
  return svd.matrixU().rightCols(n - v.cols());
}

Matrix rank1(const Vector& v) { return v * v.adjoint(); }

}  // namespace

// --- MeasurementModel -------------------------------------------------------------

MeasurementModel::MeasurementModel(PureState probe_init, UnitaryOp interaction,
                                   std::vector<Matrix> probe_projectors)
    : probe_init_(std::move(probe_init)),
      interaction_(std::move(interaction)),
      projectors_(std::move(probe_projectors)) {
  if (probe_init_.layout().size() != 1) throw Error("probe state must live on a single factor");
  const Factor& p = probe_init_.layout().factors()[0];
  probe_label_ = p.label;
  if (!interaction_.support().contains(p.label) || interaction_.support().dim_of(p.label) != p.dim)
    throw Error("interaction support does not contain the probe factor");
  if (projectors_.empty()) throw Error("no probe projectors");
  Matrix sum = Matrix::Zero(p.dim, p.dim);
  for (std::size_t k = 0; k < projectors_.size(); ++k) {
    const Matrix& pk = projectors_[k];
    if (pk.rows() != p.dim || pk.cols() != p.dim) throw Error("probe projector has wrong size");
    if (!is_hermitian(pk)) throw Error("probe projector is not Hermitian");
    if (max_abs_diff(pk * pk, pk) > tol::unitary) throw Error("probe projector is not idempotent");
    for (std::size_t j = 0; j < k; ++j)
      if ((projectors_[j] * pk).cwiseAbs().maxCoeff() > tol::unitary)
        throw Error("probe projectors are not orthogonal");
    sum += pk;
  }
  if (max_abs_diff(sum, Matrix::Identity(p.dim, p.dim)) > tol::unitary)
    throw Error("probe projectors do not sum to identity");
}

MeasurementModel MeasurementModel::from_basis(PureState probe_init, UnitaryOp interaction,
                                              const Matrix& basis) {
  if (!is_unitary(basis)) throw Error("probe basis is not orthonormal");
  std::vector<Matrix> proj;
  for (Eigen::Index k = 0; k < basis.cols(); ++k) proj.push_back(rank1(basis.col(k)));
  return MeasurementModel(std::move(probe_init), std::move(interaction), std::move(proj));
}

double KrausFamily::completeness_residual() const {
  const int d = support.dim();
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& e : effects) sum += e;
  return max_abs_diff(sum, Matrix::Identity(d, d));
}

KrausFamily kraus_from_interaction(const MeasurementModel& m) {
  const Layout& sup = m.interaction().support();
  const Layout sys = m.system_support();
  const Layout probe = m.probe_init().layout();
  const Layout in_layout = sys.concat(probe);
  const int ds = sys.dim();

  // Columns: U (|s> x |0_P>) for each system basis vector s, in support order.
  std::vector<Vector> images;
  for (int s = 0; s < ds; ++s) {
    Vector in = Vector::Zero(ds);
    in(s) = 1.0;
    Vector full(ds * probe.dim());
    for (int i = 0; i < ds; ++i)
      full.segment(i * probe.dim(), probe.dim()) = in(i) * m.probe_init().amplitudes();
    images.push_back(m.interaction().matrix() * permute(full, in_layout, sup.labels()));
  }

  KrausFamily fam;
  fam.support = sys;
  for (const Matrix& pk : m.probe_projectors()) {
    const auto es = eig_hermitian(pk);
    std::vector<Matrix> ops;
    Matrix effect = Matrix::Zero(ds, ds);
    for (Eigen::Index i = 0; i < es.values.size(); ++i) {
      if (es.values(i) < 0.5) continue;
      Matrix op(ds, ds);
      for (int s = 0; s < ds; ++s) op.col(s) = contract(es.vectors.col(i), probe, images[s], sup);
      effect += op.adjoint() * op;
      ops.push_back(std::move(op));
    }
    fam.ops.push_back(std::move(ops));
    fam.effects.push_back(hermitian_part(effect));
  }
  return fam;
}

// --- appendix measurement -------------------------------------------------------------

OutcomeCheck check_probe_measurement(const PureState& psi, const Matrix& p0, const Matrix& p1) {
  const Layout& l = psi.layout();
  const Labels labels = l.labels();
  const Layout probe = l.select({labels[0]});
  OutcomeCheck c;
  c.completeness = max_abs_diff(p0 + p1, Matrix::Identity(2, 2));
  c.idempotency = std::max(max_abs_diff(p0 * p0, p0), max_abs_diff(p1 * p1, p1));
  const double target = eof_2q(reduced(psi, {labels[1], labels[2]}).matrix());
  std::vector<RealVector> spectra;
  for (const Matrix* p : {&p0, &p1}) {
    const Vector out = apply_local(*p, probe, psi.amplitudes(), l);
    const double prob = out.squaredNorm();
    c.probabilities.push_back(prob);
    if (prob <= 1e-12) continue;
    const PureState o(l, out / std::sqrt(prob));
    spectra.push_back(schmidt_coefficients(o, {labels[1]}));
    c.eof_mismatch = std::max(c.eof_mismatch, std::abs(entanglement_entropy(o, {labels[1]}) - target));
  }
  if (spectra.size() == 2) {
    // Only the first two coefficients can be nonzero once P is projected out.
    c.schmidt_mismatch = (spectra[0].head(2) - spectra[1].head(2)).cwiseAbs().maxCoeff();
  }
  return c;
}

OptimalMeasurement optimal_probe_measurement(const PureState& psi) {
  OptimalMeasurement om;
  om.gsd = gsd(psi);
  om.params = appendix_params(om.gsd);
  const auto& p = om.params;
  om.radicand_violation = p.radicand < -1e-9;
  const double den = 2 * p.k_sr1 * std::sqrt(std::max(p.radicand, 0.0));
  const Matrix id = Matrix::Identity(2, 2);

  auto from_a = [&](double a, double theta) {
    om.a = std::clamp(a, 0.0, 1.0);
    om.b = 1 - om.a;
    om.k = std::sqrt(om.a * om.b);
    om.theta = theta;
    Matrix m(2, 2);
    m << om.a, std::polar(om.k, -theta), std::polar(om.k, theta), om.b;
    // k = sqrt(ab) makes m a rank-one projector, so sqrt(m) = m exactly; taking
    // the square root numerically would turn round-off zeros into 1e-8 entries.
    om.p0_gsd = m;
    om.p1_gsd = id - m;
  };
  auto pull_back = [&]() {
    om.p0 = om.gsd.u_p.adjoint() * om.p0_gsd * om.gsd.u_p;
    om.p1 = om.gsd.u_p.adjoint() * om.p1_gsd * om.gsd.u_p;
  };

  if (den > 1e-12) {
    om.sign = p.q_e != 0 ? -p.q_e : -1;
    const double a = 0.5 - (p.k5 * p.tau + om.sign * std::sqrt(std::max(p.delta_j, 0.0)) * p.c_sr1 * p.c_sr1) / den;
    from_a(a, -p.phi5);
    pull_back();
    return om;
  }

  om.fallback = true;
  from_a(1.0, 0.0);
  pull_back();
  const auto ok = [&](const OutcomeCheck& c) { return c.eof_mismatch <= 1e-9 && c.schmidt_mismatch <= 1e-9; };
  if (ok(check_probe_measurement(psi, om.p0, om.p1))) return om;

  // Direct search over rank-1 projectors |n><n|, n = (cos t/2, e^{i f} sin t/2).
  auto projector = [](const std::vector<double>& x) {
    Vector n(2);
    n << std::cos(x[0] / 2), std::polar(std::sin(x[0] / 2), x[1]);
    return rank1(n);
  };
  auto objective = [&](const std::vector<double>& x) {
    const Matrix q0 = projector(x);
    const auto c = check_probe_measurement(psi, q0, id - q0);
    return c.eof_mismatch + c.schmidt_mismatch;
  };
  MinimizeResult best{{0.0, 0.0}, objective({0.0, 0.0}), 0};
  for (int i = 0; i <= 12; ++i)
    for (int j = 0; j < 12; ++j) {
      const std::vector<double> x{std::numbers::pi * i / 12, 2 * std::numbers::pi * j / 12};
      const double v = objective(x);
      if (v < best.value) best = {x, v, 0};
    }
  best = nelder_mead(objective, best.x, 0.05, 4000, 1e-16);
  om.p0 = projector(best.x);
  om.p1 = id - om.p0;
  om.p0_gsd = om.gsd.u_p * om.p0 * om.gsd.u_p.adjoint();
  om.p1_gsd = id - om.p0_gsd;
  om.a = om.p0_gsd(0, 0).real();
  om.b = 1 - om.a;
  om.k = std::abs(om.p0_gsd(0, 1));
  om.theta = std::arg(om.p0_gsd(1, 0));
  return om;
}

// --- probe basis for a given ensemble ----------------------------------------------

Matrix probe_basis_from_ensemble(const PureState& psi_total, const std::string& probe_label,
                                 const EnsembleDecomposition& witness) {
  const Layout& l = psi_total.layout();
  const Layout probe = l.select({probe_label});
  const Layout rest = l.complement({probe_label});
  const int dp = probe.dim();
  const int m = static_cast<int>(witness.members.size());
  if (m == 0) throw Error("empty ensemble");
  if (m > dp) throw Error("ensemble has more members than the probe has levels");
  for (const auto& mem : witness.members)
    if (!(mem.layout() == rest)) throw Error("ensemble members do not live on the probe's complement");

  const Matrix rho = reduced_matrix(psi_total.amplitudes(), l, rest.labels());
  if (max_abs_diff(witness.mixture(), rho) > 1e-8)
    throw Error("ensemble does not reproduce the reduced state");

  const auto es = eig_hermitian(rho);
  int r = 0;
  while (r < es.values.size() && es.values(r) > tol::rank) ++r;
  // A pure rest: every probe basis yields the same single member.
  if (r == 1) return Matrix::Identity(dp, dp);

  Matrix a(dp, r);
  for (int i = 0; i < r; ++i)
    a.col(i) = contract(es.vectors.col(i), rest, psi_total.amplitudes(), l) / std::sqrt(es.values(i));

  Matrix v(m, r);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < r; ++i)
      v(k, i) = std::sqrt(witness.weights[k]) * es.vectors.col(i).dot(witness.members[k].amplitudes()) /
                std::sqrt(es.values(i));
  if (max_abs_diff(v.adjoint() * v, Matrix::Identity(r, r)) > 1e-8)
    throw Error("ensemble Gram matrix mismatch");

  Matrix vfull(m, m);
  vfull << v, complement_columns(v);
  Matrix afull(dp, dp);
  afull << a, complement_columns(a);

  Matrix basis(dp, dp);
  basis << afull.leftCols(m) * vfull.adjoint(), afull.rightCols(dp - m);
  return basis;
}

}  // namespace qit
