#include "resrand/report.hpp"

#include <ostream>

namespace resrand {

using nlohmann::json;

json decision_to_json(const Decision& d) {
    return json{{"decision", d.name()}, {"b", d.b}};
}

json outcome_to_json(const TestOutcome& o) {
    json j;
    j["t_obs"] = o.t_obs;
    j["pval_one"] = o.pval_one;
    j["pval_two"] = o.pval_two;
    j["decision"] = o.decision.name();
    j["b"] = o.decision.b;
    j["R_used"] = o.draw_values.size();
    j["mode"] = o.mode_used == Mode::Enumerated ? "enumerated" : "sampled";
    j["group_size_note"] = o.group_size_note;
    if (!o.warnings.empty()) j["warnings"] = o.warnings;
    return j;
}

json ci_to_json(const ConfidenceInterval& ci) {
    json j;
    j["lower"] = ci.lower;
    j["upper"] = ci.upper;
    j["level"] = ci.level;
    j["empty"] = ci.empty;
    j["non_monotone"] = ci.non_monotone;
    j["grid"] = ci.grid;
    j["pvals"] = ci.pvals;
    return j;
}

json mc_report_to_json(const sim::MonteCarloReport& r) {
    json j;
    j["scenario"] = r.scenario;
    j["paper_scale"] = r.paper_scale;
    j["run_scale"] = r.run_scale;
    j["replications"] = r.replications;
    j["seed"] = r.seed;
    j["wall_seconds"] = r.wall_seconds;
    j["methods"] = json::array();
    for (const auto& m : r.methods) {
        j["methods"].push_back(json{{"label", m.label},
                                    {"rejections", m.rejections},
                                    {"decided", m.decided},
                                    {"completed", m.completed},
                                    {"excluded", m.excluded},
                                    {"rejection_rate", m.rejection_rate},
                                    {"mc_standard_error", m.mc_standard_error},
                                    {"decided_fraction", m.decided_fraction}});
    }
    return j;
}

void write_mc_report_csv(const sim::MonteCarloReport& r, std::ostream& os) {
    os << "scenario,method,replications,completed,decided,excluded,rejections,"
          "rejection_rate,mc_standard_error,decided_fraction,wall_seconds\n";
    for (const auto& m : r.methods) {
        os << r.scenario << ',' << m.label << ',' << r.replications << ',' << m.completed << ','
           << m.decided << ',' << m.excluded << ',' << m.rejections << ',' << m.rejection_rate
           << ',' << m.mc_standard_error << ',' << m.decided_fraction << ',' << r.wall_seconds
           << '\n';
    }
}

}  // namespace resrand
