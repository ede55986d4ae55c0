#pragma once

// Seeded property sweeps. Trial i of a sweep seeded with s draws everything
// from derive_seed(s, i), so a trial can be rerun alone and the report does not
// depend on how trials were spread over threads.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace qit {

struct TrialRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;  // derived per-trial seed
  std::string kind;        // sub-family of the check, e.g. "exact" / "roof"
  std::map<std::string, double> metrics;
  std::vector<std::string> violations;
  // Full inputs of the trial; kept only when it has violations.
  nlohmann::json replay;
};

struct MetricRange {
  double min = 0, max = 0;
  std::size_t count = 0;
};

struct SweepReport {
  std::string check;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<TrialRecord> records;  // by index
  std::map<std::string, MetricRange> aggregates;
  std::size_t violation_count() const;
};

// lemma1, new2ndlaw, old2ndlaw, theorem3, theorem4, theorem5, appendix, identities
const std::vector<std::string>& sweep_checks();
bool is_sweep_check(const std::string& name);

// QIT_THREADS if set to a positive integer, else the hardware concurrency.
int default_thread_count();

TrialRecord run_trial(const std::string& check, std::size_t index, int trials, std::uint64_t seed);
// threads <= 0 means default_thread_count().
SweepReport run_sweep(const std::string& check, int trials, std::uint64_t seed, int threads = 0);

}  // namespace qit
