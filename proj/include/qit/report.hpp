#pragma once

// Machine-readable reports: one JSON document per run, plus flat CSV.

#include <string>

#include <json.hpp>

#include "qit/config.hpp"
#include "qit/sweeps.hpp"
#include "qit/thermo.hpp"

namespace qit {

inline constexpr const char* kToolVersion = "0.1.0";

nlohmann::json ledger_json(const ProcessLedger& l, const SlackReport& s);
nlohmann::json sweep_json(const SweepReport& r);

// One header line and one row of slacks and information terms.
std::string ledger_csv(const ProcessLedger& l, const SlackReport& s);
// One row per trial; columns are the union of the metric names.
std::string sweep_csv(const SweepReport& r);

}  // namespace qit
