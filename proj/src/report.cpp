#include "qit/report.hpp"

#include <iomanip>
#include <set>
#include <sstream>

namespace qit {

namespace {

json numbers(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

std::string csv_number(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

json ledger_json(const ProcessLedger& l, const SlackReport& s) {
  json led{{"layout", to_json(l.layout)},
           {"temperature", number(l.temperature)},
           {"bath_temperatures", numbers(l.bath_temperatures)},
           {"u_s", number(l.u_s)},
           {"f_s", number(l.f_s)},
           {"u_s_final", number(l.u_s_final)},
           {"f_s_final", number(l.f_s_final)},
           {"beta_final", number(l.beta_final)},
           {"final_term", number(l.final_term)},
           {"canonical_distance", number(l.canonical_distance)},
           {"heat", numbers(l.q)},
           {"w_ext", number(l.w_ext)},
           {"w_init", number(l.w_init)},
           {"w_measure", number(l.w_measure)},
           {"w_final", number(l.w_final)},
           {"energy_residual", number(l.energy_residual)},
           {"entropies", {{"s_i", number(l.s_i)}, {"s_1", number(l.s_1)}, {"s_2_avg", number(l.s_2_avg)},
                          {"s_3", number(l.s_3)}, {"s_f", number(l.s_f)}}},
           {"measured", l.measured},
           {"probabilities", numbers(l.p)},
           {"i_e", number(l.i_e)},
           {"i_e_method", l.i_e_method},
           {"i_qc", number(l.i_qc)},
           {"i_qc_residual", number(l.i_qc_residual)}};
  json slack{{"lhs", number(s.lhs)},
             {"new_law", number(s.new_law)},
             {"old_law", number(s.old_law)},
             {"conventional", number(s.conventional)},
             {"lemma1", number(s.lemma1)},
             {"isothermal", s.isothermal ? number(*s.isothermal) : json(nullptr)}};
  return {{"ledger", led}, {"slack", slack}, {"violations", s.violations}};
}

json sweep_json(const SweepReport& r) {
  json recs = json::array();
  json bad = json::array();
  for (const auto& t : r.records) {
    json m = json::object();
    for (const auto& [k, v] : t.metrics) m[k] = number(v);
    recs.push_back({{"index", t.index}, {"seed", t.seed}, {"kind", t.kind}, {"metrics", m},
                    {"violations", t.violations}});
    if (!t.violations.empty())
      bad.push_back({{"index", t.index}, {"violations", t.violations}, {"replay", t.replay}});
  }
  json agg = json::object();
  for (const auto& [k, a] : r.aggregates)
    agg[k] = {{"min", number(a.min)}, {"max", number(a.max)}, {"count", a.count}};
  return {{"check", r.check}, {"trials", r.trials},  {"seed", r.seed},     {"aggregates", agg},
          {"violations", bad}, {"violation_count", r.violation_count()}, {"records", recs}};
}

std::string ledger_csv(const ProcessLedger& l, const SlackReport& s) {
  std::ostringstream os;
  os << "new_slack,old_slack,conventional_slack,isothermal_slack,ie_minus_iqc,i_e,i_qc,w_ext,beta_final,"
        "energy_residual,violations\n";
  os << csv_number(s.new_law) << ',' << csv_number(s.old_law) << ',' << csv_number(s.conventional) << ','
     << (s.isothermal ? csv_number(*s.isothermal) : "") << ',' << csv_number(s.lemma1) << ','
     << csv_number(l.i_e) << ',' << csv_number(l.i_qc) << ',' << csv_number(l.w_ext) << ','
     << csv_number(l.beta_final) << ',' << csv_number(l.energy_residual) << ',' << s.violations.size() << '\n';
  return os.str();
}

std::string sweep_csv(const SweepReport& r) {
  std::set<std::string> names;
  for (const auto& t : r.records)
    for (const auto& [k, v] : t.metrics) names.insert(k);
  std::ostringstream os;
  os << "check,index,seed,kind";
  for (const auto& n : names) os << ',' << n;
  os << ",violations\n";
  for (const auto& t : r.records) {
    os << r.check << ',' << t.index << ',' << t.seed << ',' << t.kind;
    for (const auto& n : names) {
      os << ',';
      if (auto it = t.metrics.find(n); it != t.metrics.end()) os << csv_number(it->second);
    }
    os << ',' << t.violations.size() << '\n';
  }
  return os.str();
}

}  // namespace qit
