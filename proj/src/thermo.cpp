#include "qit/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qit/entanglement.hpp"

namespace qit {

namespace {

constexpr double kDropProb = 1e-12;

double ground_tol(const RealVector& e) { return 1e-12 * std::max(1.0, e.cwiseAbs().maxCoeff()); }

}  // namespace

// --- canonical states ------------------------------------------------------------

Matrix canonical_matrix(const Matrix& h, double beta) {
  if (beta < 0) throw Error("canonical_matrix: negative inverse temperature");
  const auto es = eig_hermitian(h);
  const Eigen::Index n = es.values.size();
  const double emin = es.values(n - 1);
  RealVector w(n);
  if (std::isinf(beta)) {
    for (Eigen::Index i = 0; i < n; ++i) w(i) = es.values(i) - emin <= ground_tol(es.values) ? 1.0 : 0.0;
  } else {
    for (Eigen::Index i = 0; i < n; ++i) w(i) = std::exp(-beta * (es.values(i) - emin));
  }
  w /= w.sum();
  return hermitian_part(es.vectors * w.cast<cplx>().asDiagonal() * es.vectors.adjoint());
}

DensityMatrix canonical_state(const Matrix& h, double temperature, const Layout& layout) {
  if (!(temperature > 0)) throw Error("canonical_state: temperature must be positive");
  return DensityMatrix(layout, canonical_matrix(h, 1.0 / temperature));
}

double free_energy(const Matrix& h, double temperature) {
  if (!(temperature > 0)) throw Error("free_energy: temperature must be positive");
  const auto es = eig_hermitian(h);
  const double emin = es.values.minCoeff();
  double z = 0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) z += std::exp(-(es.values(i) - emin) / temperature);
  return emin - temperature * std::log(z);
}

double canonical_cross_entropy(const Matrix& rho, const Matrix& h, double beta) {
  const auto es = eig_hermitian(h);
  const Eigen::Index n = es.values.size();
  const double emin = es.values(n - 1);
  RealVector pop(n);
  for (Eigen::Index i = 0; i < n; ++i)
    pop(i) = (es.vectors.col(i).adjoint() * rho * es.vectors.col(i))(0, 0).real();
  if (std::isinf(beta)) {
    double outside = 0;
    int g = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (es.values(i) - emin <= ground_tol(es.values)) ++g;
      else outside += pop(i);
    }
    return outside > 1e-12 ? kInfinity : std::log(static_cast<double>(g));
  }
  double z = 0, e = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    z += std::exp(-beta * (es.values(i) - emin));
    e += pop(i) * (es.values(i) - emin);
  }
  return beta * e + std::log(z);
}

// --- scenario ----------------------------------------------------------------------

Layout ThermoScenario::layout() const {
  std::vector<Factor> f{{system_label, static_cast<int>(h_s.rows())}};
  for (const auto& b : baths) f.push_back({b.label, static_cast<int>(b.h.rows())});
  return Layout(f);
}

void ThermoScenario::validate() const {
  const Layout l = layout();
  if (!is_hermitian(h_s)) throw Error("system Hamiltonian is not Hermitian");
  if (!(temperature > 0)) throw Error("temperature must be positive");
  for (const auto& b : baths) {
    if (!is_hermitian(b.h)) throw Error("bath Hamiltonian of " + b.label + " is not Hermitian");
    if (!(b.temperature > 0)) throw Error("bath temperature must be positive");
  }
  if (final_temperature && !(*final_temperature > 0)) throw Error("final temperature must be positive");
  const int dsys = static_cast<int>(h_s.rows());
  auto check_steps = [&](const std::vector<Step>& steps) {
    for (const auto& s : steps) {
      if (const auto* q = std::get_if<Quench>(&s)) {
        if (q->h_s.rows() != dsys || q->h_s.cols() != dsys || !is_hermitian(q->h_s))
          throw Error("quench: bad system Hamiltonian");
        if (q->coupling.size() && (q->coupling.rows() != l.dim() || !is_hermitian(q->coupling)))
          throw Error("quench: bad coupling");
      } else if (const auto* d = std::get_if<Drive>(&s)) {
        for (const auto& f : d->u.support().factors())
          if (!l.contains(f.label) || l.dim_of(f.label) != f.dim)
            throw Error("drive: support outside S+B");
      }
    }
  };
  check_steps(init_steps);
  check_steps(final_steps);
  if (measurement) {
    const auto& p = measurement->probe_label();
    if (l.contains(p) || p == "R") throw Error("probe label clashes with the system layout");
    const Layout sys = measurement->system_support();
    for (const auto& f : sys.factors())
      if (!l.contains(f.label) || l.dim_of(f.label) != f.dim)
        throw Error("measurement interaction acts outside S+B+P");
    if (!feedback.empty() && feedback.size() != measurement->outcomes())
      throw Error("feedback list length differs from the number of outcomes");
  } else if (!feedback.empty()) {
    throw Error("feedback without a measurement");
  }
  for (const auto& u : feedback)
    for (const auto& f : u.support().factors())
      if (!l.contains(f.label) || l.dim_of(f.label) != f.dim) throw Error("feedback acts outside S+B");
  if (l.contains("R")) throw Error("label R is reserved for the reference system");
}

// --- information quantities -----------------------------------------------------------

IQCResult i_qc(const DensityMatrix& rho1, const KrausFamily& family) {
  if (family.completeness_residual() > tol::unitary) throw Error("i_qc: incomplete effects");
  const double s1 = von_neumann_entropy(rho1);
  IQCResult r;
  double h = 0, xlogx = 0, avg = 0;
  for (const auto& d : family.effects) {
    const Matrix sq = matrix_sqrt_psd(d);
    const Matrix x = conjugate_local(sq, family.support, rho1.matrix(), rho1.layout());
    const double p = x.trace().real();
    r.probabilities.push_back(p);
    if (p <= kDropProb) continue;
    h -= p * std::log(p);
    xlogx -= von_neumann_entropy(x);  // sum x log x over the spectrum of x
    avg += p * von_neumann_entropy(Matrix(x / p));
  }
  r.value = s1 + h + xlogx;
  r.two_form = s1 - avg;
  r.residual = std::abs(r.value - r.two_form);
  return r;
}

IEResult i_e(const PureState& psi_sbr, const Labels& reference, const std::string& system_label,
             const MeasurementModel& m, const RoofOptions& roof) {
  const Layout& full = psi_sbr.layout();
  const Layout sb = full.complement(reference);
  if (sb.size() == 0) throw Error("i_e: nothing left after removing the reference");
  const Matrix rho1 = reduced_matrix(psi_sbr.amplitudes(), full, sb.labels());

  IEResult r;
  r.s_rho1 = von_neumann_entropy(rho1);
  const PureState joint = tensor(m.probe_init(), psi_sbr);
  const Vector after = apply_local(m.interaction().matrix(), m.interaction().support(),
                                   joint.amplitudes(), joint.layout());
  r.sbr_layout = full;
  r.rho_sbr = reduced_matrix(after, joint.layout(), full.labels());

  const int ref_dim = full.dim_of(reference);
  const auto spec = psd_spectrum(rho1);
  const bool sys_qubit = sb.contains(system_label) && sb.dim_of(system_label) == 2;
  bool local_interaction = true;
  const Layout sys = m.system_support();
  for (const auto& f : sys.factors())
    if (f.label != system_label) local_interaction = false;

  if (spec(0) >= 1 - 1e-12) {
    r.method = "pure";
    r.ef_after = 0;
  } else if (sb.size() == 1 && sb.dim() == 2 && ref_dim == 2) {
    r.method = "two-qubit";
    r.ef_after = eof_2q(r.rho_sbr);
  } else if (sys_qubit && local_interaction &&
             max_abs_diff(rho1, [&] {
               const Labels rest = sb.complement({system_label}).labels();
               const Matrix rs = partial_trace(rho1, sb, {system_label});
               const Matrix rr = partial_trace(rho1, sb, rest);
               const Layout ordered = sb.select({system_label}).concat(sb.subset(rest));
               Matrix prod(rs.rows() * rr.rows(), rs.cols() * rr.cols());
               for (Eigen::Index i = 0; i < rs.rows(); ++i)
                 for (Eigen::Index j = 0; j < rs.cols(); ++j)
                   prod.block(i * rr.rows(), j * rr.cols(), rr.rows(), rr.cols()) = rs(i, j) * rr;
               return permute(prod, ordered, sb.labels());
             }()) <= 1e-10) {
    // rho_1 = rho_S x rho_rest and U_SP touches only S: the entanglement of
    // the rest with its own purification passes through unchanged.
    r.method = "product-split";
    const DensityMatrix rs(sb.select({system_label}), partial_trace(rho1, sb, {system_label}));
    const PureState psr = purify(rs, "R1");
    double e = 0;
    if (psr.layout().dim_of("R1") == 2) {
      const PureState j3 = tensor(m.probe_init(), psr);
      const Vector a3 = apply_local(m.interaction().matrix(), m.interaction().support(),
                                    j3.amplitudes(), j3.layout());
      e = eof_2q(reduced_matrix(a3, j3.layout(), psr.layout().labels()));
    }
    r.ef_after = e + (r.s_rho1 - von_neumann_entropy(rs));
  } else {
    r.method = "convex-roof";
    const DensityMatrix rho(full, hermitian_part(r.rho_sbr / r.rho_sbr.trace().real()));
    r.roof = eof_convex_roof(rho, sb.labels(), roof);
    r.ef_after = r.roof->value;
  }
  r.value = r.s_rho1 - r.ef_after;
  return r;
}

// --- process -------------------------------------------------------------------------

namespace {

struct Engine {
  const ThermoScenario& sc;
  Layout layout;
  Matrix h_s;
  Matrix coupling;

  Matrix total() const {
    Matrix h = embed(h_s, layout.select({sc.system_label}), layout);
    for (const auto& b : sc.baths) h += embed(b.h, layout.select({b.label}), layout);
    if (coupling.size()) h += coupling;
    return h;
  }
  double energy(const Matrix& rho) const { return (rho * total()).trace().real(); }

  // Applies the steps to rho in place and returns the extracted work.
  double run(const std::vector<Step>& steps, Matrix& rho) {
    double w = 0;
    for (const auto& s : steps) {
      if (const auto* q = std::get_if<Quench>(&s)) {
        const double before = energy(rho);
        h_s = q->h_s;
        coupling = q->coupling;
        w += before - energy(rho);
      } else if (const auto* e = std::get_if<Evolve>(&s)) {
        const double before = energy(rho);
        const Matrix u = matrix_exp_hermitian(total(), cplx(0, -e->time));
        rho = hermitian_part(u * rho * u.adjoint());
        w += before - energy(rho);
      } else if (const auto* d = std::get_if<Drive>(&s)) {
        const double before = energy(rho);
        rho = hermitian_part(conjugate_local(d->u.matrix(), d->u.support(), rho, layout));
        w += before - energy(rho);
      } else {
        const double before = energy(rho);
        const auto hs = eig_hermitian(total());  // descending energies
        const auto rs = eig_hermitian(rho);      // descending populations
        const Matrix u = hs.vectors.rowwise().reverse() * rs.vectors.adjoint();
        rho = hermitian_part(u * rho * u.adjoint());
        w += before - energy(rho);
      }
    }
    return w;
  }
};

double solve_beta(const Matrix& rho_s, const Matrix& h, double fallback_beta) {
  const auto eh = eig_hermitian(h);
  const double spread = eh.values(0) - eh.values(eh.values.size() - 1);
  if (spread <= 1e-12 * std::max(1.0, eh.values.cwiseAbs().maxCoeff())) return fallback_beta;
  if (h.rows() == 2) {
    const RealVector p = psd_spectrum(rho_s);
    if (p(1) <= 1e-15) return kInfinity;
    return std::log(p(0) / p(1)) / spread;
  }
  // Energy match, beta >= 0.
  const double target = (rho_s * h).trace().real();
  auto mean = [&](double b) { return (canonical_matrix(h, b) * h).trace().real(); };
  if (target >= mean(0.0)) return 0.0;
  double lo = 0, hi = 1;
  while (mean(hi) > target) {
    hi *= 2;
    if (hi > 1e12) return kInfinity;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mean(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ProcessLedger run_process(const ThermoScenario& sc) {
  sc.validate();
  ProcessLedger l;
  l.layout = sc.layout();
  l.temperature = sc.temperature;

  DensityMatrix rho_i = canonical_state(sc.h_s, sc.temperature, l.layout.select({sc.system_label}));
  for (const auto& b : sc.baths) {
    rho_i = tensor(rho_i, canonical_state(b.h, b.temperature, Layout{{b.label, static_cast<int>(b.h.rows())}}));
    l.bath_temperatures.push_back(b.temperature);
  }
  l.rho_i = rho_i.matrix();

  Engine eng{sc, l.layout, sc.h_s, Matrix()};
  Matrix rho = l.rho_i;
  l.w_init = eng.run(sc.init_steps, rho);
  l.rho_1 = rho;
  const DensityMatrix rho1(l.layout, l.rho_1);

  if (sc.measurement) {
    const auto& m = *sc.measurement;
    l.measured = true;
    const KrausFamily fam = kraus_from_interaction(m);
    Matrix rho3 = Matrix::Zero(l.layout.dim(), l.layout.dim());
    for (std::size_t k = 0; k < fam.ops.size(); ++k) {
      Matrix x = Matrix::Zero(l.layout.dim(), l.layout.dim());
      for (const auto& op : fam.ops[k]) x += conjugate_local(op, fam.support, l.rho_1, l.layout);
      const double p = x.trace().real();
      l.p.push_back(p);
      if (p <= kDropProb) {
        l.rho_2.emplace_back();
        continue;
      }
      Matrix r2 = hermitian_part(x / p);
      l.rho_2.push_back(r2);
      if (!sc.feedback.empty())
        r2 = conjugate_local(sc.feedback[k].matrix(), sc.feedback[k].support(), r2, l.layout);
      rho3 += p * r2;
    }
    l.rho_3 = hermitian_part(rho3);
    l.w_measure = eng.energy(l.rho_1) - eng.energy(l.rho_3);

    const auto iq = i_qc(rho1, fam);
    l.i_qc = iq.value;
    l.i_qc_residual = iq.residual;
    const PureState psi = purify(rho1, "R");
    const auto ie = i_e(psi, {"R"}, sc.system_label, m, sc.roof);
    l.i_e = ie.value;
    l.i_e_method = ie.method;
  } else {
    l.p = {1.0};
    l.rho_2 = {l.rho_1};
    l.rho_3 = l.rho_1;
  }

  rho = l.rho_3;
  l.w_final = eng.run(sc.final_steps, rho);
  l.rho_f = rho;
  if (eng.coupling.size() && eng.coupling.cwiseAbs().maxCoeff() > 1e-12)
    throw Error("schedule ends with a nonzero system-bath coupling");
  l.h_s_final = eng.h_s;
  l.w_ext = l.w_init + l.w_measure + l.w_final;

  // Validity of every recorded state.
  DensityMatrix(l.layout, l.rho_3);
  const DensityMatrix rho_f(l.layout, l.rho_f);

  const Labels s_only{sc.system_label};
  const Matrix rs_i = partial_trace(l.rho_i, l.layout, s_only);
  const Matrix rs_f = partial_trace(l.rho_f, l.layout, s_only);
  l.u_s = (rs_i * sc.h_s).trace().real();
  l.f_s = free_energy(sc.h_s, sc.temperature);
  l.u_s_final = (rs_f * l.h_s_final).trace().real();
  l.beta_final = sc.final_temperature ? 1.0 / *sc.final_temperature
                                      : solve_beta(rs_f, l.h_s_final, 1.0 / sc.temperature);
  l.final_term = canonical_cross_entropy(rs_f, l.h_s_final, l.beta_final);
  if (std::isinf(l.beta_final)) {
    l.f_s_final = eig_hermitian(l.h_s_final).values.minCoeff();
  } else if (l.beta_final == 0) {
    l.f_s_final = -kInfinity;
  } else {
    l.f_s_final = free_energy(l.h_s_final, 1.0 / l.beta_final);
  }
  l.canonical_distance = max_abs_diff(rs_f, canonical_matrix(l.h_s_final, l.beta_final));

  double heat = 0;
  for (const auto& b : sc.baths) {
    const Matrix bi = partial_trace(l.rho_i, l.layout, {b.label});
    const Matrix bf = partial_trace(l.rho_f, l.layout, {b.label});
    l.q.push_back((b.h * (bi - bf)).trace().real());
    heat += l.q.back();
  }
  l.energy_residual = std::abs(l.w_ext + (l.u_s_final - l.u_s) - heat);

  l.s_i = von_neumann_entropy(l.rho_i);
  l.s_1 = von_neumann_entropy(l.rho_1);
  l.s_2_avg = 0;
  for (std::size_t k = 0; k < l.p.size(); ++k)
    if (l.p[k] > kDropProb) l.s_2_avg += l.p[k] * von_neumann_entropy(l.rho_2[k]);
  l.s_3 = von_neumann_entropy(l.rho_3);
  l.s_f = von_neumann_entropy(l.rho_f);
  return l;
}

SlackReport check_inequalities(const ProcessLedger& l) {
  SlackReport r;
  r.lhs = (l.u_s - l.f_s) / l.temperature;
  for (std::size_t m = 0; m < l.q.size(); ++m) r.lhs += l.q[m] / l.bath_temperatures[m];
  r.conventional = l.final_term - r.lhs;
  r.new_law = r.conventional + l.i_e;
  r.old_law = r.conventional + l.i_qc;
  r.lemma1 = l.i_e - l.i_qc;
  if (l.q.size() == 1 && std::abs(l.bath_temperatures[0] - l.temperature) <= 1e-12 &&
      std::abs(l.beta_final * l.temperature - 1.0) <= 1e-12) {
    r.isothermal = -(l.f_s_final - l.f_s) + l.temperature * l.i_e - l.w_ext;
  }

  auto flag = [&](bool bad, const std::string& what, double v) {
    if (!bad) return;
    std::ostringstream os;
    os << what << " = " << v;
    r.violations.push_back(os.str());
  };
  flag(r.new_law < -kSlackTol, "new second law slack", r.new_law);
  flag(r.old_law < -kSlackTol, "old second law slack", r.old_law);
  flag(r.lemma1 < -kSlackTol, "I_E - I_QC", r.lemma1);
  if (r.isothermal) flag(*r.isothermal < -kSlackTol, "isothermal work slack", *r.isothermal);
  flag(l.energy_residual > 1e-9, "energy closure residual", l.energy_residual);
  flag(l.i_qc_residual > 1e-10, "I_QC two-form residual", l.i_qc_residual);
  double psum = 0;
  for (double p : l.p) psum += p;
  flag(std::abs(psum - 1) > tol::trace, "outcome probability sum", psum);
  return r;
}

}  // namespace qit
