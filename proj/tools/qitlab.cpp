// qitlab: run scenario files and property sweeps, write JSON/CSV reports.
//
// Exit codes: 0 no violations, 1 violations found, 2 bad input.

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qit/config.hpp"
#include "qit/report.hpp"
#include "qit/sweeps.hpp"

namespace {

using qit::json;

int emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(out);
  if (!f) {
    std::cerr << "qitlab: cannot write " << out << "\n";
    return 2;
  }
  f << text;
  return 0;
}

qit::SweepReport timed_sweep(const std::string& check, int trials, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  qit::SweepReport r = qit::run_sweep(check, trials, seed);
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << check << ": " << trials << " trials, " << r.violation_count() << " violations, " << dt << " s\n";
  return r;
}

int run_command(const std::string& path, const std::string& out, const std::string& format) {
  qit::ScenarioConfig cfg;
  try {
    cfg = qit::load_config(path);
  } catch (const std::exception& e) {
    std::cerr << "qitlab: " << e.what() << "\n";
    return 2;
  }

  json report{{"tool", "qitlab"}, {"version", qit::kToolVersion}, {"seed", cfg.seed}};
  std::string csv;
  std::size_t violations = 0;

  if (cfg.scenario) {
    qit::ProcessLedger l;
    try {
      l = qit::run_process(*cfg.scenario);
    } catch (const std::exception& e) {
      std::cerr << "qitlab: invalid scenario: " << e.what() << "\n";
      return 2;
    }
    qit::SlackReport s = qit::check_inequalities(l);
    if (cfg.preset.expect_equality && s.new_law > 1e-6)
      s.violations.push_back("equality slack above 1e-6 = " + std::to_string(s.new_law));
    // A declared T' asserts that S ends in equilibrium at T'.
    if (cfg.scenario->final_temperature && l.canonical_distance > 1e-9)
      s.violations.push_back("final system state is not canonical at the declared T' (distance " +
                             std::to_string(l.canonical_distance) + ")");
    violations += s.violations.size();
    json run = qit::ledger_json(l, s);
    run["preset"] = cfg.preset.name;
    if (cfg.preset.name == "theorem4") run["zero_entanglement_outcome"] = cfg.preset.zero_entanglement_outcome;
    run["scenario"] = qit::to_json(*cfg.scenario);
    report["run"] = run;
    csv += qit::ledger_csv(l, s);
  }
  if (cfg.sweep) {
    report["sweeps"] = json::array();
    for (const auto& check : cfg.sweep->checks) {
      const qit::SweepReport r = timed_sweep(check, cfg.sweep->trials, cfg.sweep->seed);
      violations += r.violation_count();
      report["sweeps"].push_back(qit::sweep_json(r));
      if (!csv.empty()) csv += "\n";
      csv += qit::sweep_csv(r);
    }
  }
  report["violation_count"] = violations;

  if (emit(format == "csv" ? csv : report.dump(2) + "\n", out) != 0) return 2;
  return violations == 0 ? 0 : 1;
}

int sweep_command(const std::string& check, int trials, std::uint64_t seed, const std::string& out,
                  const std::string& format) {
  if (!qit::is_sweep_check(check)) {
    std::cerr << "qitlab: unknown check \"" << check << "\"\n";
    return 2;
  }
  if (trials < 1) {
    std::cerr << "qitlab: --trials must be positive\n";
    return 2;
  }
  const qit::SweepReport r = timed_sweep(check, trials, seed);
  json report{{"tool", "qitlab"}, {"version", qit::kToolVersion}, {"seed", seed}, {"sweeps", {qit::sweep_json(r)}},
              {"violation_count", r.violation_count()}};
  if (emit(format == "csv" ? qit::sweep_csv(r) : report.dump(2) + "\n", out) != 0) return 2;
  return r.violation_count() == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qitlab: information-thermodynamics verification"};
  app.require_subcommand(1);

  std::string config, out, format = "json";
  auto* run = app.add_subcommand("run", "run a scenario/sweep config file");
  run->add_option("config", config, "JSON config")->required();
  run->add_option("--out", out, "report path (default stdout)");
  run->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  std::string check;
  int trials = 100;
  std::uint64_t seed = 42;
  auto* sweep = app.add_subcommand("sweep", "run a named property sweep (threads: QIT_THREADS)");
  sweep->add_option("check", check, "lemma1|new2ndlaw|old2ndlaw|theorem3|theorem4|theorem5|appendix|identities")
      ->required();
  sweep->add_option("--trials", trials, "number of trials");
  sweep->add_option("--seed", seed, "base seed");
  sweep->add_option("--out", out, "report path (default stdout)");
  sweep->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return run_command(config, out, format);
    return sweep_command(check, trials, seed, out, format);
  } catch (const std::exception& e) {
    std::cerr << "qitlab: " << e.what() << "\n";
    return 2;
  }
}
