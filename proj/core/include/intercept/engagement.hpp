#pragma once

#include <cstdint>
#include <vector>

#include "intercept/dynamics.hpp"
#include "intercept/estimation.hpp"
#include "intercept/scenario.hpp"

namespace intercept {

// Truth propagation on a fine grid with the pursuer command held between
// guidance updates. The evader's single switch is hit exactly, and the run
// ends at closest approach.
class TruthSim {
 public:
  explicit TruthSim(const ScenarioConfig& cfg);

  // Advance one measurement period holding the normalized pursuer command u.
  // Returns false if closest approach occurred during the period.
  bool advance(double u);

  const dynamics::EngagementState& state() const { return history_.back(); }
  bool finished() const { return finished_; }
  dynamics::MissResult miss() const;
  // Every fine-grid sample since t = 0.
  const std::vector<dynamics::EngagementState>& history() const { return history_; }
  // Nearest fine-grid sample at or before t (clamped to t = 0).
  const dynamics::EngagementState& at(double t) const;
  // Pursuer own-state at the start, middle and end of the last period.
  const estimation::PursuerTrack& last_track() const { return track_; }
  // x3 samples spaced by truth_dt covering [t - span, t], oldest first,
  // projected on the normal of lambda_ref. Before launch a_P is zero.
  std::vector<double> x3_history(double lambda_ref, double span) const;
  double dt() const { return h_; }

 private:
  void substep(double u);

  dynamics::VehicleParams v_;
  double t_sw_;
  double cmd_before_;
  double cmd_after_;
  double h_;
  int per_period_;
  long n_ = 0;
  bool finished_ = false;
  dynamics::MissResult miss_;
  std::vector<dynamics::EngagementState> history_;
  estimation::PursuerTrack track_;
};

struct StepRecord {
  double t = 0.0;
  // Truth.
  double rho = 0.0;
  double lambda = 0.0;
  double gamma_E = 0.0;
  double a_E = 0.0;
  double gamma_P = 0.0;
  double a_P = 0.0;
  double xi_dot = 0.0;  // along the estimated LOS normal
  double a_E_n = 0.0;
  // Estimates fed to the guidance law.
  double rho_hat = 0.0;
  double lambda_hat = 0.0;
  double xi_dot_hat = 0.0;
  double a_E_n_hat = 0.0;
  double t_go_hat = 0.0;
  double p_post_switch = 0.0;
  double theta_star = 0.0;
  int theta_source = 0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double z_bar = 0.0;
  double u = 0.0;
  bool diverged = false;
};

// Filtered vs lag-Delta_1 smoothed xi_dot error inside the uncertainty
// interval, all in the fixed initial-LOS frame.
struct SmootherProbe {
  int samples = 0;
  double smoothed_rmse = 0.0;
  double filtered_rmse = 0.0;
};

struct RunRecord {
  Law law = Law::tv_dglcc;
  double t_sw = 0.0;
  std::uint64_t seed = 0;
  double miss = 0.0;
  double t_cpa = 0.0;
  double detection_time = 0.0;  // NaN if the switch was never detected
  bool diverged = false;
  int divergence_events = 0;
  int steps = 0;
  int table_builds = 0;
  double max_abs_u = 0.0;
  std::vector<double> theta_trace;  // theta* at every guidance step
  std::vector<StepRecord> trace;    // only with RunOptions::record_steps
  SmootherProbe probe;
  double wall_time_s = 0.0;  // excluded from reproducibility comparisons
};

struct RunOptions {
  bool record_steps = false;
  bool probe_smoother = false;
};

// Closed loop: truth, measurement, filter, uncertainty interval, smoother,
// ZEM and guidance. Throws ConfigError on an invalid config.
RunRecord run_engagement(const ScenarioConfig& cfg, const RunOptions& opt = {});

// Field-by-field equality, wall time excluded. Doubles compared bitwise.
bool same_outcome(const RunRecord& a, const RunRecord& b);

}  // namespace intercept
