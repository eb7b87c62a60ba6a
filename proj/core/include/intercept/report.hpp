#pragma once

#include <iosfwd>
#include <string>

#include "intercept/campaign.hpp"
#include "intercept/engagement.hpp"
#include "intercept/scenario.hpp"
#include "intercept/sweep.hpp"
#include "intercept/tuning.hpp"

namespace intercept::report {

// CSV output uses 17 significant digits. JSON numbers are written in their
// shortest round-trip form, which reads back bit-identical; NaN becomes null.
void write_trajectory_csv(std::ostream& os, const RunRecord& rec);
void write_run_json(std::ostream& os, const RunRecord& rec, const ScenarioConfig& cfg);
void write_campaign_json(std::ostream& os, const CampaignSummary& s, const ScenarioConfig& tmpl);
void write_switch_stats_csv(std::ostream& os, const CampaignSummary& s);
void write_cdf_csv(std::ostream& os, const CampaignSummary& s);
void write_tuning_csv(std::ostream& os, const TuningResult& r);
void write_tuning_json(std::ostream& os, const TuningResult& r);
void write_sweep_json(std::ostream& os, const SweepReport& r, const SweepSpec& spec);

// Opens path for writing or throws std::runtime_error.
void write_file(const std::string& path, const std::function<void(std::ostream&)>& body);

}  // namespace intercept::report
