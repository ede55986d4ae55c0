#include "qit/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qit/optmeas.hpp"
#include "qit/random.hpp"
#include "qit/sweeps.hpp"

namespace qit {

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  if (!j.is_object()) throw ConfigError(what + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw ConfigError(what + ": unknown key \"" + k + "\"");
}

double get_number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError(what + ": expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ConfigError(what + ": expected an integer");
  return j.get<int>();
}

std::uint64_t get_seed(const json& j, const std::string& what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw ConfigError(what + ": expected a non-negative integer");
  return j.get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& what) {
  if (!j.is_string()) throw ConfigError(what + ": expected a string");
  return j.get<std::string>();
}

cplx entry(const json& e, const std::string& what) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  throw ConfigError(what + ": entries must be numbers or [re, im] pairs");
}

// --- steps ------------------------------------------------------------------------

Step parse_step(const json& j, const std::string& what) {
  if (!j.is_object() || !j.contains("type")) throw ConfigError(what + ": step needs a \"type\"");
  const std::string type = get_string(j["type"], what + ".type");
  if (type == "quench") {
    check_keys(j, {"type", "h_s", "coupling"}, what);
    if (!j.contains("h_s")) throw ConfigError(what + ": quench needs h_s");
    Quench q{matrix_from_json(j["h_s"], what + ".h_s"), Matrix()};
    if (j.contains("coupling")) q.coupling = matrix_from_json(j["coupling"], what + ".coupling");
    return q;
  }
  if (type == "evolve") {
    check_keys(j, {"type", "time"}, what);
    if (!j.contains("time")) throw ConfigError(what + ": evolve needs time");
    return Evolve{get_number(j["time"], what + ".time")};
  }
  if (type == "drive") {
    check_keys(j, {"type", "support", "matrix"}, what);
    if (!j.contains("support") || !j.contains("matrix")) throw ConfigError(what + ": drive needs support and matrix");
    return Drive{UnitaryOp(layout_from_json(j["support"], what + ".support"),
                           matrix_from_json(j["matrix"], what + ".matrix"))};
  }
  if (type == "passivate") {
    check_keys(j, {"type"}, what);
    return Passivate{};
  }
  throw ConfigError(what + ": unknown step type \"" + type + "\"");
}

std::vector<Step> parse_steps(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + ": expected an array of steps");
  std::vector<Step> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_step(j[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

json step_to_json(const Step& s) {
  if (const auto* q = std::get_if<Quench>(&s)) {
    json j{{"type", "quench"}, {"h_s", to_json(q->h_s)}};
    if (q->coupling.size()) j["coupling"] = to_json(q->coupling);
    return j;
  }
  if (const auto* e = std::get_if<Evolve>(&s)) return {{"type", "evolve"}, {"time", e->time}};
  if (const auto* d = std::get_if<Drive>(&s))
    return {{"type", "drive"}, {"support", to_json(d->u.support())}, {"matrix", to_json(d->u.matrix())}};
  return {{"type", "passivate"}};
}

// --- measurement ---------------------------------------------------------------------

// A two-qubit unitary on (S, P): "cnot", "identity", {"weak": eta},
// {"haar": seed} or an explicit 4x4 matrix.
Matrix parse_interaction(const json& j, const std::string& what) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "cnot") return cnot_sp();
    if (s == "identity") return Matrix::Identity(4, 4);
    throw ConfigError(what + ": unknown interaction \"" + s + "\"");
  }
  if (j.is_object()) {
    if (j.contains("weak")) {
      check_keys(j, {"weak"}, what);
      return weak_sp(get_number(j["weak"], what + ".weak"));
    }
    check_keys(j, {"haar"}, what);
    if (!j.contains("haar")) throw ConfigError(what + ": empty interaction");
    Rng rng(get_seed(j["haar"], what + ".haar"));
    return haar_unitary(4, rng);
  }
  const Matrix m = matrix_from_json(j, what);
  if (m.rows() != 4 || m.cols() != 4) throw ConfigError(what + ": interaction on (S, P) must be 4x4");
  return m;
}

// "computational", {"haar": seed} or an explicit matrix whose columns are the basis.
Matrix parse_basis(const json& j, int dim, const std::string& what) {
  if (j.is_string()) {
    if (j.get<std::string>() != "computational") throw ConfigError(what + ": unknown basis");
    return computational_basis(dim);
  }
  if (j.is_object()) {
    check_keys(j, {"haar"}, what);
    if (!j.contains("haar")) throw ConfigError(what + ": empty basis");
    Rng rng(get_seed(j["haar"], what + ".haar"));
    return haar_unitary(dim, rng);
  }
  return matrix_from_json(j, what);
}

// Probe measurement that meets the appendix conditions for the S marginal of
// rho_1 (reached by running the initial steps once).
MeasurementModel appendix_measurement(const ThermoScenario& base, const Matrix& u_sp) {
  ThermoScenario pre = base;
  pre.measurement.reset();
  pre.feedback.clear();
  pre.final_steps.clear();
  pre.final_temperature.reset();
  const ProcessLedger l = run_process(pre);
  const DensityMatrix rs(qubit(base.system_label),
                         partial_trace(l.rho_1, l.layout, {base.system_label}));
  const PureState psr = purify(rs, "R1");
  if (psr.layout().dim_of("R1") != 2) throw ConfigError("appendix-optimal: the system state at t_1 is pure");
  const UnitaryOp u(Layout{{base.system_label, 2}, {"P", 2}}, u_sp);
  const PureState psi = apply_unitary(tensor(probe_zero(), psr), u);
  const OptimalMeasurement om = optimal_probe_measurement(psi);
  return MeasurementModel(probe_zero(), u, {om.p0, om.p1});
}

MeasurementModel parse_measurement(const json& j, const ThermoScenario& base, std::uint64_t seed) {
  const std::string what = "measurement";
  if (!j.is_object() || !j.contains("preset")) throw ConfigError(what + ": needs a \"preset\"");
  const std::string preset = get_string(j["preset"], what + ".preset");
  const std::string& s = base.system_label;
  if (preset != "custom" && base.h_s.rows() != 2) throw ConfigError(what + ": presets need a qubit system");
  const Layout sp{{s, 2}, {"P", 2}};
  auto basis = [&]() {
    return j.contains("basis") ? parse_basis(j["basis"], 2, what + ".basis") : computational_basis(2);
  };
  if (preset == "cnot") {
    check_keys(j, {"preset", "basis"}, what);
    return MeasurementModel::from_basis(probe_zero(), UnitaryOp(sp, cnot_sp()), basis());
  }
  if (preset == "weak") {
    check_keys(j, {"preset", "eta", "basis"}, what);
    if (!j.contains("eta")) throw ConfigError(what + ": weak needs eta");
    return MeasurementModel::from_basis(probe_zero(), UnitaryOp(sp, weak_sp(get_number(j["eta"], "eta"))),
                                        basis());
  }
  if (preset == "haar") {
    check_keys(j, {"preset", "seed", "basis"}, what);
    Rng rng(j.contains("seed") ? get_seed(j["seed"], what + ".seed") : seed);
    return MeasurementModel::from_basis(probe_zero(), UnitaryOp(sp, haar_unitary(4, rng)), basis());
  }
  if (preset == "appendix-optimal") {
    check_keys(j, {"preset", "interaction"}, what);
    if (!j.contains("interaction")) throw ConfigError(what + ": appendix-optimal needs an interaction");
    return appendix_measurement(base, parse_interaction(j["interaction"], what + ".interaction"));
  }
  if (preset == "custom") {
    check_keys(j, {"preset", "probe", "probe_state", "interaction", "basis", "projectors"}, what);
    if (!j.contains("probe") || !j.contains("interaction")) throw ConfigError(what + ": custom needs probe and interaction");
    const json& p = j["probe"];
    check_keys(p, {"label", "dim"}, what + ".probe");
    if (!p.contains("label") || !p.contains("dim")) throw ConfigError(what + ".probe: needs label and dim");
    const Layout pl{{get_string(p["label"], "probe.label"), get_int(p["dim"], "probe.dim")}};
    const PureState init = j.contains("probe_state")
                               ? PureState(pl, vector_from_json(j["probe_state"], what + ".probe_state"))
                               : PureState::basis(pl, 0);
    const json& in = j["interaction"];
    check_keys(in, {"support", "matrix"}, what + ".interaction");
    if (!in.contains("support") || !in.contains("matrix")) throw ConfigError(what + ".interaction: needs support and matrix");
    const UnitaryOp u(layout_from_json(in["support"], "interaction.support"),
                      matrix_from_json(in["matrix"], "interaction.matrix"));
    if (j.contains("projectors") == j.contains("basis"))
      throw ConfigError(what + ": custom needs exactly one of basis and projectors");
    if (j.contains("basis")) return MeasurementModel::from_basis(init, u, parse_basis(j["basis"], pl.dim(), "basis"));
    if (!j["projectors"].is_array()) throw ConfigError(what + ".projectors: expected an array");
    std::vector<Matrix> proj;
    for (const auto& m : j["projectors"]) proj.push_back(matrix_from_json(m, what + ".projectors"));
    return MeasurementModel(init, u, std::move(proj));
  }
  throw ConfigError(what + ": unknown preset \"" + preset + "\"");
}

std::vector<UnitaryOp> parse_feedback(const json& j, const ThermoScenario& sc) {
  const Layout s = Layout{{sc.system_label, static_cast<int>(sc.h_s.rows())}};
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    const std::size_t n = sc.measurement ? sc.measurement->outcomes() : 0;
    if (name == "identity") return {};
    if (name == "flip") {
      if (n != 2 || s.dim() != 2) throw ConfigError("feedback flip needs a qubit system and two outcomes");
      return {UnitaryOp::identity(s), UnitaryOp(s, pauli_x())};
    }
    throw ConfigError("feedback: unknown preset \"" + name + "\"");
  }
  if (!j.is_array()) throw ConfigError("feedback: expected a preset name or an array");
  std::vector<UnitaryOp> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string what = "feedback[" + std::to_string(i) + "]";
    check_keys(j[i], {"support", "matrix"}, what);
    if (!j[i].contains("support") || !j[i].contains("matrix")) throw ConfigError(what + ": needs support and matrix");
    out.emplace_back(layout_from_json(j[i]["support"], what + ".support"),
                     matrix_from_json(j[i]["matrix"], what + ".matrix"));
  }
  return out;
}

RoofOptions parse_roof(const json& j, RoofOptions r) {
  check_keys(j, {"ensemble_size", "restarts", "seed", "max_iterations", "gradient_tol"}, "roof");
  if (j.contains("ensemble_size")) r.ensemble_size = get_int(j["ensemble_size"], "roof.ensemble_size");
  if (j.contains("restarts")) r.restarts = get_int(j["restarts"], "roof.restarts");
  if (j.contains("seed")) r.seed = get_seed(j["seed"], "roof.seed");
  if (j.contains("max_iterations")) r.max_iterations = get_int(j["max_iterations"], "roof.max_iterations");
  if (j.contains("gradient_tol")) r.gradient_tol = get_number(j["gradient_tol"], "roof.gradient_tol");
  if (r.restarts < 1 || r.ensemble_size < 0 || r.max_iterations < 1) throw ConfigError("roof: bad budget");
  return r;
}

ThermoScenario parse_preset(const json& j, const std::string& name, PresetInfo* info) {
  if (name == "null") {
    check_keys(j, {"preset"}, "scenario");
    return null_scenario();
  }
  if (name == "szilard") {
    check_keys(j, {"preset", "steps", "bath_levels", "bath_spacing", "top_gap", "temperature"}, "scenario");
    SzilardOptions o;
    if (j.contains("steps")) o.steps = get_int(j["steps"], "steps");
    if (j.contains("bath_levels")) o.bath_levels = get_int(j["bath_levels"], "bath_levels");
    if (j.contains("bath_spacing")) o.bath_spacing = get_number(j["bath_spacing"], "bath_spacing");
    if (j.contains("top_gap")) o.top_gap = get_number(j["top_gap"], "top_gap");
    if (j.contains("temperature")) o.temperature = get_number(j["temperature"], "temperature");
    if (!(o.temperature > 0)) throw ConfigError("szilard: temperature must be positive");
    return szilard_scenario(o);
  }
  if (name == "theorem4") {
    check_keys(j, {"preset", "temperature", "gap", "bath_gap", "interaction"}, "scenario");
    const double t = j.contains("temperature") ? get_number(j["temperature"], "temperature") : 1.0;
    const double gap = j.contains("gap") ? get_number(j["gap"], "gap") : 1.0;
    const double bgap = j.contains("bath_gap") ? get_number(j["bath_gap"], "bath_gap") : 1.0;
    if (!(t > 0)) throw ConfigError("theorem4: temperature must be positive");
    if (!j.contains("interaction")) throw ConfigError("theorem4: needs an interaction");
    const Matrix u = parse_interaction(j["interaction"], "interaction");
    const Theorem4Result r = theorem4_scenario(t, UnitaryOp(Layout{{"S", 2}, {"P", 2}}, u), gap, bgap);
    if (info) {
      info->expect_equality = true;
      info->zero_entanglement_outcome = r.zero_entanglement_outcome;
    }
    return r.scenario;
  }
  throw ConfigError("scenario: unknown preset \"" + name + "\"");
}

}  // namespace

// --- conversions ----------------------------------------------------------------------

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(row);
  }
  return rows;
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

json to_json(const Layout& l) {
  json out = json::array();
  for (const auto& f : l.factors()) out.push_back({{"label", f.label}, {"dim", f.dim}});
  return out;
}

json to_json(const UnitaryOp& u) { return {{"support", to_json(u.support())}, {"matrix", to_json(u.matrix())}}; }

json to_json(const ThermoScenario& sc) {
  json j;
  j["temperature"] = sc.temperature;
  j["system"] = {{"label", sc.system_label}, {"hamiltonian", to_json(sc.h_s)}};
  j["baths"] = json::array();
  for (const auto& b : sc.baths)
    j["baths"].push_back({{"label", b.label}, {"hamiltonian", to_json(b.h)}, {"temperature", b.temperature}});
  j["init_steps"] = json::array();
  for (const auto& s : sc.init_steps) j["init_steps"].push_back(step_to_json(s));
  j["final_steps"] = json::array();
  for (const auto& s : sc.final_steps) j["final_steps"].push_back(step_to_json(s));
  if (sc.measurement) {
    const auto& m = *sc.measurement;
    json proj = json::array();
    for (const auto& p : m.probe_projectors()) proj.push_back(to_json(p));
    j["measurement"] = {{"preset", "custom"},
                        {"probe", {{"label", m.probe_label()}, {"dim", m.probe_init().dim()}}},
                        {"probe_state", to_json(m.probe_init().amplitudes())},
                        {"interaction", to_json(m.interaction())},
                        {"projectors", proj}};
    json fb = json::array();
    for (const auto& u : sc.feedback) fb.push_back(to_json(u));
    j["feedback"] = fb;
  }
  if (sc.final_temperature) j["final_temperature"] = *sc.final_temperature;
  j["roof"] = {{"ensemble_size", sc.roof.ensemble_size}, {"restarts", sc.roof.restarts},
               {"seed", sc.roof.seed}, {"max_iterations", sc.roof.max_iterations},
               {"gradient_tol", sc.roof.gradient_tol}};
  return j;
}

Matrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ConfigError(what + ": expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw ConfigError(what + ": rows must be non-empty arrays");
  Matrix m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw ConfigError(what + ": ragged matrix");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = entry(j[i][k], what);
  }
  return m;
}

Vector vector_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ConfigError(what + ": expected a non-empty array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = entry(j[i], what);
  return v;
}

Layout layout_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ConfigError(what + ": expected an array of factors");
  std::vector<Factor> f;
  for (const auto& e : j) {
    check_keys(e, {"label", "dim"}, what);
    if (!e.contains("label") || !e.contains("dim")) throw ConfigError(what + ": factor needs label and dim");
    f.push_back({get_string(e["label"], what + ".label"), get_int(e["dim"], what + ".dim")});
  }
  return Layout(f);
}

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

// --- scenario --------------------------------------------------------------------------

ThermoScenario parse_scenario(const json& j, std::uint64_t seed, PresetInfo* info) {
  if (!j.is_object()) throw ConfigError("scenario: expected an object");
  if (j.contains("preset")) {
    const std::string name = get_string(j["preset"], "scenario.preset");
    if (info) info->name = name;
    ThermoScenario sc = parse_preset(j, name, info);
    sc.roof.seed = seed;
    return sc;
  }
  check_keys(j, {"temperature", "system", "baths", "init_steps", "measurement", "feedback", "final_steps",
                 "final_temperature", "roof"},
             "scenario");
  ThermoScenario sc;
  sc.roof.seed = seed;
  if (!j.contains("temperature") || !j.contains("system")) throw ConfigError("scenario: needs temperature and system");
  sc.temperature = get_number(j["temperature"], "temperature");
  const json& s = j["system"];
  check_keys(s, {"label", "hamiltonian"}, "system");
  if (!s.contains("hamiltonian")) throw ConfigError("system: needs a hamiltonian");
  if (s.contains("label")) sc.system_label = get_string(s["label"], "system.label");
  sc.h_s = matrix_from_json(s["hamiltonian"], "system.hamiltonian");
  if (j.contains("baths")) {
    if (!j["baths"].is_array()) throw ConfigError("baths: expected an array");
    for (const auto& b : j["baths"]) {
      check_keys(b, {"label", "hamiltonian", "temperature"}, "bath");
      if (!b.contains("label") || !b.contains("hamiltonian")) throw ConfigError("bath: needs label and hamiltonian");
      sc.baths.push_back({get_string(b["label"], "bath.label"), matrix_from_json(b["hamiltonian"], "bath.hamiltonian"),
                          b.contains("temperature") ? get_number(b["temperature"], "bath.temperature")
                                                    : sc.temperature});
    }
  }
  if (j.contains("init_steps")) sc.init_steps = parse_steps(j["init_steps"], "init_steps");
  if (j.contains("final_steps")) sc.final_steps = parse_steps(j["final_steps"], "final_steps");
  if (j.contains("final_temperature")) sc.final_temperature = get_number(j["final_temperature"], "final_temperature");
  if (j.contains("roof")) sc.roof = parse_roof(j["roof"], sc.roof);
  sc.validate();  // the measurement preset may need a valid base
  if (j.contains("measurement")) sc.measurement.emplace(parse_measurement(j["measurement"], sc, seed));
  if (j.contains("feedback")) sc.feedback = parse_feedback(j["feedback"], sc);
  return sc;
}

ScenarioConfig parse_config(const json& j) {
  check_keys(j, {"seed", "scenario", "sweep"}, "config");
  ScenarioConfig c;
  try {
    if (j.contains("seed")) c.seed = get_seed(j["seed"], "seed");
    if (j.contains("scenario")) {
      c.scenario = parse_scenario(j["scenario"], c.seed, &c.preset);
      c.scenario->validate();
    }
    if (j.contains("sweep")) {
      const json& s = j["sweep"];
      check_keys(s, {"checks", "trials", "seed"}, "sweep");
      SweepSpec spec;
      spec.seed = c.seed;
      if (!s.contains("checks") || !s["checks"].is_array() || s["checks"].empty())
        throw ConfigError("sweep: needs a non-empty \"checks\" array");
      for (const auto& name : s["checks"]) {
        const std::string n = get_string(name, "sweep.checks");
        if (!is_sweep_check(n)) throw ConfigError("sweep: unknown check \"" + n + "\"");
        spec.checks.push_back(n);
      }
      if (s.contains("trials")) spec.trials = get_int(s["trials"], "sweep.trials");
      if (spec.trials < 1) throw ConfigError("sweep: trials must be positive");
      if (s.contains("seed")) spec.seed = get_seed(s["seed"], "sweep.seed");
      c.sweep = spec;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    // Shape and validity problems found by the library (non-Hermitian
    // Hamiltonians, non-unitary drives, ...) are configuration errors too.
    throw ConfigError(e.what());
  }
  if (!c.scenario && !c.sweep) throw ConfigError("config: nothing to do (no scenario and no sweep)");
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace qit
