// Command-line front end: single engagements, Monte Carlo campaigns, the
// C-tuning study, the single-root sweep and the property suites.
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "intercept/campaign.hpp"
#include "intercept/engagement.hpp"
#include "intercept/error.hpp"
#include "intercept/report.hpp"
#include "intercept/scenario.hpp"
#include "intercept/sweep.hpp"
#include "intercept/tuning.hpp"
#include "intercept/verification.hpp"

namespace fs = std::filesystem;
using namespace intercept;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string law;
  std::vector<double> t_sw;
  int runs = 200;
  int jobs = 0;
  std::string out_dir = ".";
};

ScenarioConfig make_config(const Common& c) {
  ScenarioConfig cfg;
  if (!c.config.empty()) cfg = load_config_file(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (!c.law.empty()) cfg.law = parse_law(c.law);
  if (!c.t_sw.empty()) cfg.t_sw = c.t_sw.front();
  cfg.validate();
  return cfg;
}

std::string out_path(const Common& c, const std::string& name) {
  fs::create_directories(c.out_dir);
  return (fs::path(c.out_dir) / name).string();
}

void add_common(CLI::App* app, Common& c, bool campaign_flags) {
  app->add_option("--config", c.config, "Scenario file (key = value lines)");
  app->add_option("--seed", c.seed, "Base seed");
  app->add_option("--law", c.law, "Guidance law: dgl1, dglc or tv-dglcc");
  app->add_option("--t-sw", c.t_sw, "Evader switch time(s), seconds");
  app->add_option("--out-dir", c.out_dir, "Output directory");
  app->add_option("--jobs", c.jobs, "Worker threads (0 = all cores)");
  if (campaign_flags) app->add_option("--runs", c.runs, "Runs per switch time");
}

int cmd_simulate(const Common& c) {
  const ScenarioConfig cfg = make_config(c);
  RunOptions opt;
  opt.record_steps = true;
  const RunRecord rec = run_engagement(cfg, opt);
  report::write_file(out_path(c, "trajectory.csv"),
                     [&](std::ostream& os) { report::write_trajectory_csv(os, rec); });
  report::write_file(out_path(c, "run.json"),
                     [&](std::ostream& os) { report::write_run_json(os, rec, cfg); });
  std::cout << std::setprecision(6) << "law " << to_string(cfg.law) << ", t_sw " << cfg.t_sw
            << " s, seed " << cfg.seed << ": miss " << rec.miss << " m at t = " << rec.t_cpa
            << " s\n";
  return 0;
}

int cmd_campaign(const Common& c, double kill_p) {
  ScenarioConfig cfg = make_config(c);
  std::vector<double> grid = c.t_sw;
  if (grid.empty()) {
    for (int i = 1; i <= 30; ++i) grid.push_back(0.1 * i);
  }
  CampaignOptions opt;
  opt.runs = c.runs;
  opt.jobs = c.jobs;
  opt.kill_probability = kill_p;
  opt.progress = [](std::size_t done, std::size_t total) {
    if (done % 50 == 0 || done == total) std::cerr << "\r" << done << "/" << total << std::flush;
  };
  const auto s = run_campaign(cfg, grid, opt);
  std::cerr << "\n";
  const std::string law = to_string(cfg.law);
  report::write_file(out_path(c, "campaign_" + law + ".json"),
                     [&](std::ostream& os) { report::write_campaign_json(os, s, cfg); });
  report::write_file(out_path(c, "switch_stats_" + law + ".csv"),
                     [&](std::ostream& os) { report::write_switch_stats_csv(os, s); });
  report::write_file(out_path(c, "cdf_" + law + ".csv"),
                     [&](std::ostream& os) { report::write_cdf_csv(os, s); });
  std::cout << std::setprecision(6) << law << ": " << s.runs.size() << " runs, lethality radius "
            << s.lethality_radius << " m at p = " << kill_p << "\n";
  for (const auto& p : s.per_switch) {
    std::cout << "  t_sw " << p.t_sw << "  mean " << p.mean_miss << "  std " << p.std_miss << "\n";
  }
  return 0;
}

int cmd_tune(const Common& c, int s_c, int s_sw, double t_f) {
  const ScenarioConfig cfg = make_config(c);
  const auto res = tune_c(cfg, s_c, s_sw, t_f, c.jobs);
  report::write_file(out_path(c, "tuning.csv"),
                     [&](std::ostream& os) { report::write_tuning_csv(os, res); });
  report::write_file(out_path(c, "tuning.json"),
                     [&](std::ostream& os) { report::write_tuning_json(os, res); });
  std::cout << std::setprecision(6);
  for (std::size_t i = 0; i < res.C.size(); ++i) {
    std::cout << "  C " << res.C[i] << "  worst z_bar " << res.worst[i] << "\n";
  }
  std::cout << "C = " << res.best_C << " (worst-case normalized miss " << res.best_worst << ")\n";
  return 0;
}

int cmd_sweep(const Common& c, long samples) {
  SweepSpec spec;
  spec.samples = samples;
  spec.seed = c.seed.value_or(1);
  spec.jobs = c.jobs;
  const auto rep = sweep_single_root(spec);
  report::write_file(out_path(c, "sweep.json"),
                     [&](std::ostream& os) { report::write_sweep_json(os, rep, spec); });
  std::cout << rep.cases << " cases: " << rep.single_root << " single root, " << rep.violations
            << " multi-root, " << rep.no_root << " without a root before tau = " << spec.tau_max
            << "\n";
  return rep.violations == 0 ? 0 : 1;
}

int cmd_verify(const Common& c) {
  bool ok = true;
  for (const auto& r : verify::all(c.seed.value_or(1), c.jobs)) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": metric " << r.metric
              << " (threshold " << r.threshold << ", " << r.checks << " checks) " << r.detail
              << "\n";
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pursuit-evasion guidance simulator with delay-compensated differential games"};
  app.require_subcommand(1);

  Common sim_c, camp_c, tune_c_opts, sweep_c, verify_c;
  auto* sim = app.add_subcommand("simulate", "Run one engagement; writes trajectory.csv and run.json");
  add_common(sim, sim_c, false);

  double kill_p = 0.95;
  auto* camp = app.add_subcommand("campaign", "Monte Carlo campaign over switch times");
  add_common(camp, camp_c, true);
  camp->add_option("--kill-probability", kill_p, "Kill probability for the lethality radius");

  int s_c = 21, s_sw = 31;
  double t_f = 3.0;
  auto* tune = app.add_subcommand("tune-c", "Deterministic minimax study for C");
  add_common(tune, tune_c_opts, false);
  tune->add_option("--c-points", s_c, "Number of C values on [0, 1]");
  tune->add_option("--switch-points", s_sw, "Number of switch times on [0, t_f]");
  tune->add_option("--t-f", t_f, "Nominal engagement time, seconds");

  long samples = 10000;
  auto* sweep = app.add_subcommand("sweep-root", "Single-root sweep of R(tau) over the delay grid");
  add_common(sweep, sweep_c, false);
  sweep->add_option("--samples", samples, "Random cases to draw (0 = full grid)");

  auto* ver = app.add_subcommand("verify", "Run the analytic property suites");
  add_common(ver, verify_c, false);

  CLI11_PARSE(app, argc, argv);
  try {
    if (sim->parsed()) return cmd_simulate(sim_c);
    if (camp->parsed()) return cmd_campaign(camp_c, kill_p);
    if (tune->parsed()) return cmd_tune(tune_c_opts, s_c, s_sw, t_f);
    if (sweep->parsed()) return cmd_sweep(sweep_c, samples);
    if (ver->parsed()) return cmd_verify(verify_c);
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
