#include "qit/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include "qit/config.hpp"
#include "qit/entanglement.hpp"
#include "qit/random.hpp"
#include "qit/scenarios.hpp"
#include "qit/schmidt.hpp"

namespace qit {

namespace {

constexpr double kEqualityHi = 1e-6;

struct Trial {
  TrialRecord rec;
  json replay;

  void metric(const std::string& name, double v) { rec.metrics[name] = v; }
  void flag(bool bad, const std::string& what, double v) {
    if (bad) rec.violations.push_back(what + " = " + std::to_string(v));
  }
  void add(const std::vector<std::string>& v) { rec.violations.insert(rec.violations.end(), v.begin(), v.end()); }
};

Bath random_bath(const std::string& label, int dim, Rng& rng) {
  return {label, random_hermitian(dim, rng), uniform(rng, 0.5, 2.0)};
}

MeasurementModel haar_measurement(const std::string& s, Rng& rng) {
  const Matrix u = haar_unitary(4, rng);
  const Matrix basis = haar_unitary(2, rng);
  return MeasurementModel::from_basis(probe_zero(), UnitaryOp(Layout{{s, 2}, {"P", 2}}, u), basis);
}

// S qubit, optional one-qubit bath, local initial drives: rho_1 = rho_S x rho_B,
// so I_E is exact (two-qubit formula or the product split).
ThermoScenario exact_base(Rng& rng, bool with_bath) {
  ThermoScenario sc;
  sc.h_s = random_hermitian(2, rng);
  sc.temperature = uniform(rng, 0.5, 2.0);
  sc.init_steps.push_back(Drive{UnitaryOp(qubit("S"), haar_unitary(2, rng))});
  if (with_bath) {
    sc.baths.push_back(random_bath("B1", 2, rng));
    sc.init_steps.push_back(Drive{UnitaryOp(qubit("B1"), haar_unitary(2, rng))});
  }
  return sc;
}

void record_slacks(Trial& t, const ProcessLedger& l, const SlackReport& s) {
  t.metric("new_slack", s.new_law);
  t.metric("old_slack", s.old_law);
  t.metric("conventional_slack", s.conventional);
  t.metric("ie_minus_iqc", s.lemma1);
  t.metric("i_e", l.i_e);
  t.metric("i_qc", l.i_qc);
  t.metric("energy_residual", l.energy_residual);
  t.metric("iqc_residual", l.i_qc_residual);
}

// --- lemma1 -------------------------------------------------------------------------

void lemma1(Trial& t, Rng& rng) {
  ThermoScenario sc = exact_base(rng, rng() & 1);
  sc.measurement.emplace(haar_measurement("S", rng));
  t.replay["scenario"] = to_json(sc);
  const ProcessLedger l = run_process(sc);
  const SlackReport s = check_inequalities(l);
  t.rec.kind = l.i_e_method;
  record_slacks(t, l, s);
  t.add(s.violations);
}

// --- full random processes --------------------------------------------------------------

ThermoScenario random_process(Rng& rng) {
  const int nb = static_cast<int>(rng() % 3);
  ThermoScenario sc = exact_base(rng, false);
  for (int m = 0; m < nb; ++m) {
    const std::string label = "B" + std::to_string(m + 1);
    sc.baths.push_back(random_bath(label, 2 + static_cast<int>(rng() % 2), rng));
    const int d = static_cast<int>(sc.baths.back().h.rows());
    sc.init_steps.push_back(Drive{UnitaryOp(Layout{{label, d}}, haar_unitary(d, rng))});
  }
  if (rng() & 1) sc.init_steps.push_back(Quench{random_hermitian(2, rng), Matrix()});

  sc.measurement.emplace(haar_measurement("S", rng));
  const Layout l = sc.layout();
  const Layout fb_support = nb > 0 && (rng() & 1) ? l.select({"S", "B1"}) : qubit("S");
  for (int k = 0; k < 2; ++k) sc.feedback.emplace_back(fb_support, haar_unitary(fb_support.dim(), rng));

  const int n = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < n; ++i) {
    switch (rng() % 4) {
      case 0: {
        Matrix c = 0.5 * random_hermitian(l.dim(), rng);
        sc.final_steps.push_back(Quench{random_hermitian(2, rng), nb > 0 ? c : Matrix()});
        break;
      }
      case 1:
        sc.final_steps.push_back(Evolve{uniform(rng, 0.0, 2.0)});
        break;
      case 2:
        sc.final_steps.push_back(Drive{UnitaryOp(l, haar_unitary(l.dim(), rng))});
        break;
      default:
        sc.final_steps.push_back(Passivate{});
    }
  }
  sc.final_steps.push_back(Quench{random_hermitian(2, rng), Matrix()});
  return sc;
}

void second_law(Trial& t, Rng& rng) {
  const ThermoScenario sc = random_process(rng);
  t.replay["scenario"] = to_json(sc);
  const ProcessLedger l = run_process(sc);
  const SlackReport s = check_inequalities(l);
  t.rec.kind = std::to_string(sc.baths.size()) + "-bath";
  record_slacks(t, l, s);
  t.metric("canonical_distance", l.canonical_distance);
  t.metric("w_ext", l.w_ext);
  t.add(s.violations);
}

// --- theorem3 ---------------------------------------------------------------------------

void theorem3(Trial& t, Rng& rng, bool exact) {
  ThermoScenario sc;
  if (exact) {
    sc = exact_base(rng, rng() & 1);
  } else {
    sc.h_s = random_hermitian(2, rng);
    sc.temperature = uniform(rng, 0.5, 2.0);
    sc.baths.push_back(random_bath("B1", 2, rng));
    sc.init_steps.push_back(Drive{UnitaryOp(sc.layout(), haar_unitary(4, rng))});
  }
  const Matrix u = haar_unitary(4, rng);
  const UnitaryOp u_sp(Layout{{"S", 2}, {"P", 2}}, u);
  t.replay["scenario"] = to_json(sc);
  t.replay["interaction"] = to_json(u_sp);

  const DensityMatrix rho1(sc.layout(), run_process(sc).rho_1);
  const PureState psi = purify(rho1, "R");
  const MeasurementModel plain = MeasurementModel::from_basis(probe_zero(), u_sp, computational_basis(2));
  RoofOptions full{4, 16, t.rec.seed, 400, 1e-11};
  const IEResult ie = i_e(psi, {"R"}, "S", plain, full);

  // Best ensemble that a two-level probe can realize.
  const PureState total = apply_unitary(tensor(probe_zero(), psi), u_sp);
  const DensityMatrix rho_sbr(ie.sbr_layout, hermitian_part(ie.rho_sbr / ie.rho_sbr.trace().real()));
  const Labels sb = ie.sbr_layout.complement({"R"}).labels();
  const RoofResult witness = eof_convex_roof(rho_sbr, sb, RoofOptions{2, 32, t.rec.seed ^ 0x5bd1e995u, 400, 1e-11});
  const Matrix basis = probe_basis_from_ensemble(total, "P", witness.witness);
  const auto fam = kraus_from_interaction(MeasurementModel::from_basis(probe_zero(), u_sp, basis));
  const IQCResult iq = i_qc(rho1, fam);

  const double gap = std::abs(iq.value - ie.value);
  t.rec.kind = exact ? "exact" : "roof";
  t.metric("i_e", ie.value);
  t.metric("i_qc", iq.value);
  t.metric(exact ? "gap_exact" : "gap_roof", gap);
  if (exact && ie.method == "convex-roof") t.rec.violations.push_back("exact trial fell back to the convex roof");
  t.flag(gap > (exact ? 1e-6 : 1e-4), exact ? "|I_QC - I_E| (exact)" : "|I_QC - I_E| (roof)", gap);
}

// --- theorem4 ---------------------------------------------------------------------------

void theorem4(Trial& t, Rng& rng) {
  const UnitaryOp u_sp(Layout{{"S", 2}, {"P", 2}}, haar_unitary(4, rng));
  t.replay["interaction"] = to_json(u_sp);
  const Theorem4Result r = theorem4_scenario(1.0, u_sp);
  t.replay["scenario"] = to_json(r.scenario);
  t.rec.kind = r.zero_entanglement_outcome ? "zero-entanglement" : "regular";
  t.metric("new_slack", r.slack.new_law);
  t.metric("old_slack", r.slack.old_law);
  t.metric("outcome_schmidt_mismatch", r.outcome_schmidt_mismatch);
  t.metric("canonical_distance", r.ledger.canonical_distance);
  t.add(r.slack.violations);
  t.flag(r.slack.new_law > kEqualityHi, "equality slack above 1e-6", r.slack.new_law);
}

// --- theorem5 ---------------------------------------------------------------------------

void theorem5(Trial& t, Rng& rng, bool deterministic) {
  MeasurementModel m = haar_measurement("S", rng);
  DensityMatrix rho1 = random_density(qubit("S"), 2, rng);
  if (deterministic) {
    // Appendix measurement: both outcomes leave LU-equivalent post-states.
    const PureState psr = purify(rho1, "R1");
    const UnitaryOp u_sp(Layout{{"S", 2}, {"P", 2}}, haar_unitary(4, rng));
    const OptimalMeasurement om = optimal_probe_measurement(apply_unitary(tensor(probe_zero(), psr), u_sp));
    m = MeasurementModel(probe_zero(), u_sp, {om.p0, om.p1});
  }
  json proj = json::array();
  for (const auto& p : m.probe_projectors()) proj.push_back(to_json(p));
  t.replay["rho1"] = to_json(rho1.matrix());
  t.replay["interaction"] = to_json(m.interaction());
  t.replay["projectors"] = proj;

  const Theorem5Certificate c = theorem5_witness(kraus_from_interaction(m), rho1);
  t.rec.kind = deterministic ? "appendix" : "random";
  t.metric("certified_gap", c.certified_gap);
  t.metric("optimizer_gap", c.optimizer_gap);
  t.metric("identity_residual", c.identity_residual);
  t.flag(c.identity_residual > 1e-10, "mixing identity residual", c.identity_residual);
  if (c.lu_equivalent) {
    t.flag(c.optimizer_gap > 1e-6, "LU-equivalent outcomes but optimizer gap", c.optimizer_gap);
  } else {
    t.flag(!(c.certified_gap > 0), "certified gap not positive", c.certified_gap);
    t.flag(c.optimizer_gap < c.certified_gap - 1e-9, "optimizer below the certified bound", c.optimizer_gap);
  }
  if (deterministic && !c.lu_equivalent) t.rec.violations.push_back("appendix outcomes not LU-equivalent");
}

// --- appendix ----------------------------------------------------------------------------

void appendix(Trial& t, Rng& rng) {
  const PureState psi = haar_state(Layout{{"P", 2}, {"S", 2}, {"R1", 2}}, rng);
  t.replay["state"] = to_json(psi.amplitudes());

  const GSDecomposition g = gsd(psi);
  const PureState canon(psi.layout(), g.canonical());
  const AppendixParams a = appendix_params(g);
  const PairConcurrences pc = pair_concurrences(psi);
  const PairConcurrences pk = pair_concurrences(canon);
  const double inv = std::max({std::abs(pc.ps - pk.ps), std::abs(pc.pr1 - pk.pr1), std::abs(pc.sr1 - pk.sr1),
                               std::abs(pc.ps - a.c_ps), std::abs(pc.pr1 - a.c_pr1), std::abs(pc.sr1 - a.c_sr1),
                               std::abs(tangle_3q(psi) - tangle_3q(canon)), std::abs(tangle_3q(psi) - a.tau)});
  const OptimalMeasurement om = optimal_probe_measurement(psi);
  const OutcomeCheck c = check_probe_measurement(psi, om.p0, om.p1);

  t.rec.kind = om.fallback ? "fallback" : (a.q_e == 0 ? "q_e=0" : "closed-form");
  t.metric("gsd_residual", g.residual);
  t.metric("invariant_mismatch", inv);
  t.metric("completeness", c.completeness);
  t.metric("idempotency", c.idempotency);
  t.metric("schmidt_mismatch", c.schmidt_mismatch);
  t.metric("eof_mismatch", c.eof_mismatch);
  t.flag(g.residual > 1e-8, "decomposition residual", g.residual);
  t.flag(inv > 1e-8, "LU-invariant mismatch", inv);
  t.flag(c.completeness > 1e-9, "completeness residual", c.completeness);
  t.flag(c.schmidt_mismatch > 1e-8, "outcome Schmidt mismatch", c.schmidt_mismatch);
  t.flag(c.eof_mismatch > 1e-7, "outcome entanglement mismatch", c.eof_mismatch);
}

// --- identities --------------------------------------------------------------------------

void identities(Trial& t, Rng& rng) {
  // I_QC two forms on a random measurement of a random state.
  const int ds = 2 + static_cast<int>(rng() % 2);
  const int dp = 2 + static_cast<int>(rng() % 2);
  const Layout sl{{"S", ds}};
  const DensityMatrix rho1 = random_density(sl, 1 + static_cast<int>(rng() % ds), rng);
  const MeasurementModel m = MeasurementModel::from_basis(
      probe_zero("P", dp), UnitaryOp(Layout{{"S", ds}, {"P", dp}}, haar_unitary(ds * dp, rng)), haar_unitary(dp, rng));
  const IQCResult iq = i_qc(rho1, kraus_from_interaction(m));
  double h = 0;
  for (double p : iq.probabilities)
    if (p > 1e-12) h -= p * std::log(p);
  const double upper = std::min(von_neumann_entropy(rho1), h);

  // Mixing identity: S(sum p_k r_k) - sum p_k S(r_k) = sum p_k D(r_k || sum p_k r_k).
  const int n = 2 + static_cast<int>(rng() % 3);
  std::vector<double> p(n);
  double tot = 0;
  for (double& x : p) tot += (x = uniform(rng, 0.05, 1.0));
  std::vector<Matrix> r;
  Matrix mix = Matrix::Zero(2, 2);
  double avg = 0;
  for (int k = 0; k < n; ++k) {
    p[k] /= tot;
    const Matrix u = haar_unitary(2, rng);
    r.push_back(hermitian_part(u * random_density_matrix(2, 1 + static_cast<int>(rng() % 2), rng) * u.adjoint()));
    mix += p[k] * r.back();
    avg += p[k] * von_neumann_entropy(r.back());
  }
  mix = hermitian_part(mix);
  double dsum = 0;
  for (int k = 0; k < n; ++k) dsum += p[k] * relative_entropy(r[k], mix);
  const double eq33 = std::abs(von_neumann_entropy(mix) - avg - dsum);

  // S(rho_1) = S(rho_i) under a unitary initial operation.
  ThermoScenario sc = exact_base(rng, true);
  sc.init_steps.push_back(Drive{UnitaryOp(sc.layout(), haar_unitary(4, rng))});
  const ProcessLedger l = run_process(sc);
  const double inv = std::abs(l.s_1 - l.s_i);

  t.replay["rho1"] = to_json(rho1.matrix());
  t.replay["interaction"] = to_json(m.interaction());
  t.replay["scenario"] = to_json(sc);
  t.rec.kind = std::to_string(ds) + "x" + std::to_string(dp);
  t.metric("iqc_residual", iq.residual);
  t.metric("eq33_residual", eq33);
  t.metric("entropy_invariance", inv);
  t.metric("i_qc", iq.value);
  t.flag(iq.residual > 1e-10, "I_QC two-form residual", iq.residual);
  t.flag(eq33 > 1e-10, "mixing identity residual", eq33);
  t.flag(inv > 1e-10, "S(rho_1) - S(rho_i)", inv);
  t.flag(iq.value < -1e-9 || iq.value > upper + 1e-9, "I_QC outside [0, min(S, H)]", iq.value);
}

}  // namespace

std::size_t SweepReport::violation_count() const {
  std::size_t n = 0;
  for (const auto& r : records) n += r.violations.size();
  return n;
}

const std::vector<std::string>& sweep_checks() {
  static const std::vector<std::string> names{"lemma1",   "new2ndlaw", "old2ndlaw", "theorem3",
                                              "theorem4", "theorem5",  "appendix",  "identities"};
  return names;
}

bool is_sweep_check(const std::string& name) {
  const auto& n = sweep_checks();
  return std::find(n.begin(), n.end(), name) != n.end();
}

int default_thread_count() {
  if (const char* env = std::getenv("QIT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

TrialRecord run_trial(const std::string& check, std::size_t index, int trials, std::uint64_t seed) {
  if (!is_sweep_check(check)) throw Error("unknown check: " + check);
  Trial t;
  t.rec.index = index;
  t.rec.seed = derive_seed(seed, index);
  Rng rng(t.rec.seed);
  try {
    if (check == "lemma1") lemma1(t, rng);
    else if (check == "new2ndlaw" || check == "old2ndlaw") second_law(t, rng);
    else if (check == "theorem3") theorem3(t, rng, index < static_cast<std::size_t>(trials - trials / 3));
    else if (check == "theorem4") theorem4(t, rng);
    else if (check == "theorem5") theorem5(t, rng, index % 3 == 0);
    else if (check == "appendix") appendix(t, rng);
    else identities(t, rng);
  } catch (const std::exception& e) {
    t.rec.violations.push_back(std::string("exception: ") + e.what());
  }
  if (!t.rec.violations.empty()) {
    t.replay["check"] = check;
    t.replay["seed"] = seed;
    t.replay["index"] = index;
    t.replay["trials"] = trials;
    t.rec.replay = std::move(t.replay);
  }
  return t.rec;
}

SweepReport run_sweep(const std::string& check, int trials, std::uint64_t seed, int threads) {
  if (!is_sweep_check(check)) throw Error("unknown check: " + check);
  if (trials < 1) throw Error("sweep needs at least one trial");
  SweepReport rep;
  rep.check = check;
  rep.trials = trials;
  rep.seed = seed;
  rep.records.resize(trials);

  const int nt = std::min(trials, threads > 0 ? threads : default_thread_count());
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < trials; i = next++) rep.records[i] = run_trial(check, i, trials, seed);
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < nt; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (const auto& r : rep.records)
    for (const auto& [name, v] : r.metrics) {
      auto& a = rep.aggregates.try_emplace(name, MetricRange{v, v, 0}).first->second;
      a.min = std::min(a.min, v);
      a.max = std::max(a.max, v);
      ++a.count;
    }
  return rep;
}

}  // namespace qit
