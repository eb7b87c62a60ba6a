#include "intercept/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "intercept/delay_estimator.hpp"
#include "json.hpp"

namespace intercept::report {

using nlohmann::json;

namespace {

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json config_json(const ScenarioConfig& cfg) {
  std::ostringstream os;
  save_config(os, cfg);
  json j = json::object();
  std::istringstream in(os.str());
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) j[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return j;
}

struct CsvPrecision {
  explicit CsvPrecision(std::ostream& os) : os_(os), old_(os.precision(17)) {}
  ~CsvPrecision() { os_.precision(old_); }
  std::ostream& os_;
  std::streamsize old_;
};

}  // namespace

void write_trajectory_csv(std::ostream& os, const RunRecord& rec) {
  CsvPrecision guard(os);
  os << "t,rho,lambda,gamma_E,a_E,gamma_P,a_P,xi_dot,a_E_n,rho_hat,lambda_hat,xi_dot_hat,"
        "a_E_n_hat,t_go_hat,p_post_switch,theta_star,theta_source,delta1,delta2,z_bar,u,"
        "diverged\n";
  for (const auto& r : rec.trace) {
    os << r.t << ',' << r.rho << ',' << r.lambda << ',' << r.gamma_E << ',' << r.a_E << ','
       << r.gamma_P << ',' << r.a_P << ',' << r.xi_dot << ',' << r.a_E_n << ',' << r.rho_hat
       << ',' << r.lambda_hat << ',' << r.xi_dot_hat << ',' << r.a_E_n_hat << ',' << r.t_go_hat
       << ',' << r.p_post_switch << ',' << r.theta_star << ','
       << delay::to_string(static_cast<delay::ThetaSource>(r.theta_source)) << ',' << r.delta1
       << ',' << r.delta2 << ',' << r.z_bar << ',' << r.u << ',' << (r.diverged ? 1 : 0) << '\n';
  }
}

void write_run_json(std::ostream& os, const RunRecord& rec, const ScenarioConfig& cfg) {
  json j;
  j["law"] = to_string(rec.law);
  j["t_sw"] = rec.t_sw;
  j["seed"] = rec.seed;
  j["miss"] = rec.miss;
  j["t_cpa"] = rec.t_cpa;
  j["detection_time"] = num(rec.detection_time);
  j["diverged"] = rec.diverged;
  j["divergence_events"] = rec.divergence_events;
  j["steps"] = rec.steps;
  j["table_builds"] = rec.table_builds;
  j["max_abs_u"] = rec.max_abs_u;
  j["theta_star"] = rec.theta_trace;
  j["smoother_probe"] = {{"samples", rec.probe.samples},
                         {"smoothed_rmse", rec.probe.smoothed_rmse},
                         {"filtered_rmse", rec.probe.filtered_rmse}};
  j["wall_time_s"] = rec.wall_time_s;
  j["config"] = config_json(cfg);
  os << j.dump(2) << '\n';
}

void write_campaign_json(std::ostream& os, const CampaignSummary& s, const ScenarioConfig& tmpl) {
  json j;
  j["law"] = to_string(s.law);
  j["base_seed"] = s.base_seed;
  j["runs_per_point"] = s.runs_per_point;
  j["kill_probability"] = s.kill_probability;
  j["lethality_radius"] = s.lethality_radius;
  json per = json::array();
  for (const auto& p : s.per_switch) {
    per.push_back({{"t_sw", p.t_sw}, {"runs", p.runs}, {"mean_miss", p.mean_miss},
                   {"std_miss", p.std_miss}});
  }
  j["per_switch"] = per;
  json runs = json::array();
  for (const auto& r : s.runs) {
    runs.push_back({{"t_sw", r.t_sw}, {"seed", r.seed}, {"miss", r.miss},
                    {"detection_time", num(r.detection_time)}, {"diverged", r.diverged}});
  }
  j["runs"] = runs;
  j["config"] = config_json(tmpl);
  os << j.dump(2) << '\n';
}

void write_switch_stats_csv(std::ostream& os, const CampaignSummary& s) {
  CsvPrecision guard(os);
  os << "t_sw,mean_miss,std_miss\n";
  for (const auto& p : s.per_switch) os << p.t_sw << ',' << p.mean_miss << ',' << p.std_miss << '\n';
}

void write_cdf_csv(std::ostream& os, const CampaignSummary& s) {
  CsvPrecision guard(os);
  os << "miss,cum_prob\n";
  for (const auto& [m, p] : empirical_cdf(s.pooled_sorted)) os << m << ',' << p << '\n';
}

void write_tuning_csv(std::ostream& os, const TuningResult& r) {
  CsvPrecision guard(os);
  os << "C,t_sw,z_bar\n";
  for (std::size_t c = 0; c < r.C.size(); ++c) {
    for (std::size_t s = 0; s < r.t_sw.size(); ++s) {
      os << r.C[c] << ',' << r.t_sw[s] << ',' << r.surface[c * r.t_sw.size() + s] << '\n';
    }
  }
}

void write_tuning_json(std::ostream& os, const TuningResult& r) {
  json j;
  j["C"] = r.C;
  j["t_sw"] = r.t_sw;
  j["worst_z_bar"] = r.worst;
  j["best_C"] = r.best_C;
  j["best_worst_z_bar"] = r.best_worst;
  os << j.dump(2) << '\n';
}

void write_sweep_json(std::ostream& os, const SweepReport& r, const SweepSpec& spec) {
  json j;
  j["samples"] = spec.samples;
  j["seed"] = spec.seed;
  j["tau_max"] = spec.tau_max;
  j["grid"] = spec.grid;
  j["cases"] = r.cases;
  j["single_root"] = r.single_root;
  j["violations"] = r.violations;
  j["no_root_before_tau_max"] = r.no_root;
  json multi = json::array();
  for (const auto& c : r.multi_root) {
    multi.push_back({{"a", c.a}, {"b2", c.b2}, {"b1_fraction", c.b1_fraction},
                     {"omega", c.omega}, {"mu", c.mu}, {"epsilon", c.epsilon},
                     {"sign_changes", c.sign_changes}});
  }
  j["multi_root_cases"] = multi;
  os << j.dump(2) << '\n';
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  body(out);
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace intercept::report
