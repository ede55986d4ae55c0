#include <doctest.h>

#include <cmath>

#include "qit/config.hpp"
#include "qit/entanglement.hpp"
#include "qit/report.hpp"
#include "qit/sweeps.hpp"

using namespace qit;

TEST_SUITE("cli") {

TEST_CASE("matrices as [re, im] rows") {
  const Matrix m = matrix_from_json(json::parse("[[[1, 0], [0, -1]], [[0, 1], 2]]"), "m");
  CHECK(m(0, 1) == cplx(0, -1));
  CHECK(m(1, 0) == cplx(0, 1));
  CHECK(m(1, 1) == cplx(2, 0));
  CHECK(max_abs_diff(matrix_from_json(to_json(m), "m"), m) == 0);
  CHECK_THROWS_AS(matrix_from_json(json::parse("[[1, 2], [3]]"), "m"), ConfigError);
  CHECK_THROWS_AS(matrix_from_json(json::parse("[[[1, 2, 3]]]"), "m"), ConfigError);
}

TEST_CASE("infinities survive as strings") {
  CHECK(number(kInfinity) == "inf");
  CHECK(number(-kInfinity) == "-inf");
  CHECK(number(std::nan("")) == "nan");
  CHECK(number(0.25) == 0.25);
}

TEST_CASE("presets parse and unknown keys are rejected") {
  const ScenarioConfig c = parse_config(json::parse(R"({"seed": 3, "scenario": {"preset": "null"}})"));
  REQUIRE(c.scenario.has_value());
  CHECK(c.preset.name == "null");
  CHECK(c.seed == 3);

  CHECK_THROWS_AS(parse_config(json::parse(R"({"scenario": {"preset": "null", "extra": 1}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"scenarios": {}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"scenario": {"preset": "carnot"}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"seed": 1})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"sweep": {"checks": ["lemma2"]}})")), ConfigError);
  CHECK_THROWS_AS(
      parse_config(json::parse(R"({"scenario": {"temperature": 1, "system": {"hamiltonian": [[0, 1], [0, 0]]}}})")),
      ConfigError);
}

TEST_CASE("explicit scenario round-trips through JSON") {
  const json j = json::parse(R"({
    "seed": 9,
    "scenario": {
      "temperature": 1.3,
      "system": {"hamiltonian": [[0, [0.1, 0.2]], [[0.1, -0.2], 1]]},
      "baths": [{"label": "B1", "hamiltonian": [[0, 0, 0], [0, 0.5, 0], [0, 0, 1.1]], "temperature": 0.9}],
      "init_steps": [{"type": "quench", "h_s": [[0, 0], [0, 2]]}, {"type": "passivate"}],
      "measurement": {"preset": "haar", "seed": 4, "basis": {"haar": 5}},
      "feedback": "flip",
      "final_steps": [{"type": "evolve", "time": 0.4}, {"type": "quench", "h_s": [[0, 0], [0, 1]]}]
    }
  })");
  const ScenarioConfig c = parse_config(j);
  const ThermoScenario again = parse_scenario(to_json(*c.scenario), 9);
  const ProcessLedger a = run_process(*c.scenario);
  const ProcessLedger b = run_process(again);
  CHECK(a.w_ext == b.w_ext);
  CHECK(a.i_e == b.i_e);
  CHECK(a.i_qc == b.i_qc);
  CHECK(a.beta_final == b.beta_final);
}

TEST_CASE("appendix-optimal preset reaches the LU-equivalence conditions") {
  const ScenarioConfig c = parse_config(json::parse(R"({
    "scenario": {"temperature": 1, "system": {"hamiltonian": [[0, 0], [0, 1]]},
                 "measurement": {"preset": "appendix-optimal", "interaction": {"haar": 2}}}
  })"));
  const ProcessLedger l = run_process(*c.scenario);
  CHECK(std::abs(l.i_e - l.i_qc) < 1e-9);  // the optimal measurement closes the I_E >= I_QC gap
}

TEST_CASE("theorem4 preset records the equality expectation") {
  const ScenarioConfig c =
      parse_config(json::parse(R"({"scenario": {"preset": "theorem4", "interaction": "cnot", "temperature": 2}})"));
  CHECK(c.preset.expect_equality);
  CHECK(c.preset.zero_entanglement_outcome);
}

TEST_CASE("sweeps are independent of the thread count") {
  for (const auto& check : {"lemma1", "appendix", "new2ndlaw"}) {
    const SweepReport a = run_sweep(check, 12, 7, 1);
    const SweepReport b = run_sweep(check, 12, 7, 3);
    CHECK(sweep_json(a).dump() == sweep_json(b).dump());
    CHECK(sweep_csv(a) == sweep_csv(b));
    CHECK(a.violation_count() == 0);
  }
  CHECK_THROWS_AS(run_sweep("nope", 3, 1), Error);
}

TEST_CASE("single trials replay their sweep record") {
  const SweepReport r = run_sweep("theorem4", 5, 11, 2);
  const TrialRecord t = run_trial("theorem4", 3, 5, 11);
  CHECK(t.seed == r.records[3].seed);
  CHECK(t.metrics == r.records[3].metrics);
}

TEST_CASE("every sweep check runs") {
  for (const auto& check : sweep_checks()) {
    const SweepReport r = run_sweep(check, 3, 5, 1);
    CHECK_MESSAGE(r.violation_count() == 0, check);
    CHECK(r.records.size() == 3);
    CHECK_FALSE(r.aggregates.empty());
  }
}

TEST_CASE("ledger report keeps infinite inverse temperatures") {
  ThermoScenario sc = parse_scenario(json::parse(R"({
    "temperature": 1, "system": {"hamiltonian": [[0, 0], [0, 1]]},
    "measurement": {"preset": "cnot"}, "feedback": "flip", "final_steps": [{"type": "passivate"}]
  })"), 1);
  const ProcessLedger l = run_process(sc);
  const json j = ledger_json(l, check_inequalities(l));
  CHECK(j["ledger"]["beta_final"] == "inf");
  CHECK(j["violations"].empty());
}

}  // TEST_SUITE
