#pragma once

// JSON scenario files.
//
// Complex matrices are arrays of rows; each entry is [re, im] (a bare number
// is read as a real entry). Layouts are arrays of {"label", "dim"}. Unknown
// keys are rejected everywhere. A file holds an optional "scenario", an
// optional "sweep" and a top-level "seed"; see README.md for the full schema.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qit/scenarios.hpp"
#include "qit/thermo.hpp"

namespace qit {

using json = nlohmann::json;

class ConfigError : public Error {
 public:
  using Error::Error;
};

json to_json(const Matrix& m);
json to_json(const Vector& v);
json to_json(const Layout& l);
json to_json(const UnitaryOp& u);
// Full explicit form of a scenario; parse_scenario(to_json(sc)) rebuilds it.
json to_json(const ThermoScenario& sc);

Matrix matrix_from_json(const json& j, const std::string& what);
Vector vector_from_json(const json& j, const std::string& what);
Layout layout_from_json(const json& j, const std::string& what);

// Finite doubles stay numbers; +-inf and nan become strings.
json number(double x);

struct SweepSpec {
  std::vector<std::string> checks;
  int trials = 100;
  std::uint64_t seed = 42;
};

// Extra expectations attached by a preset.
struct PresetInfo {
  std::string name = "explicit";
  // theorem4: the new second-law slack must land in [-1e-7, 1e-6].
  bool expect_equality = false;
  bool zero_entanglement_outcome = false;
};

struct ScenarioConfig {
  std::uint64_t seed = 0;
  std::optional<ThermoScenario> scenario;
  PresetInfo preset;
  std::optional<SweepSpec> sweep;
};

ThermoScenario parse_scenario(const json& j, std::uint64_t seed, PresetInfo* info = nullptr);
ScenarioConfig parse_config(const json& j);
// Reads and parses a file; any syntax or schema problem raises ConfigError.
ScenarioConfig load_config(const std::string& path);

}  // namespace qit
