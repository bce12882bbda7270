#pragma once

#include <iosfwd>

#include <json.hpp>

#include "resrand/engine.hpp"
#include "resrand/simlab.hpp"

namespace resrand {

nlohmann::json decision_to_json(const Decision& d);

/// Report body for one test run; the caller merges in its config echo
/// (seed, primitive, hypothesis) so a report can be rerun bit-exactly.
nlohmann::json outcome_to_json(const TestOutcome& o);

nlohmann::json ci_to_json(const ConfidenceInterval& ci);

nlohmann::json mc_report_to_json(const sim::MonteCarloReport& r);

/// Flat table, one row per method.
void write_mc_report_csv(const sim::MonteCarloReport& r, std::ostream& os);

}  // namespace resrand
