#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>

#include "intercept/delay_estimator.hpp"
#include "intercept/dynamics.hpp"
#include "intercept/estimation.hpp"

namespace intercept {

enum class Law { dgl1, dglc, tv_dglcc };
enum class EstimatorKind { filter, truth };

const char* to_string(Law law);
const char* to_string(EstimatorKind e);
// Accepts dgl1, dglc, tv-dglcc (case-insensitive). Throws ConfigError.
Law parse_law(std::string_view s);
EstimatorKind parse_estimator(std::string_view s);

// Everything needed to reproduce one engagement. SI units, angles in radians.
struct ScenarioConfig {
  dynamics::VehicleParams vehicle;

  Law law = Law::tv_dglcc;
  EstimatorKind estimator = EstimatorKind::filter;
  double t_sw = 1.5;
  std::uint64_t seed = 1;

  // Initial geometry. The pursuer starts aimed at the evader.
  double rho0 = 15000.0;
  double lambda0 = std::numbers::pi / 2.0;
  double gamma_E0 = -std::numbers::pi / 2.0;
  double a_E0 = -20.0 * dynamics::kGravity;
  double evader_cmd_before = -1.0;
  double evader_cmd_after = 1.0;

  double sigma_lambda = 0.5e-3;
  estimation::LikelihoodKind noise = estimation::LikelihoodKind::gaussian;

  // Filter.
  int particles_per_mode = 2000;
  double p_switch = 0.001;
  double sigma_gamma_E = 3e-4;
  double sigma_a_E = 1.0;
  double theta0_lo = 2.9;
  double theta0_hi = 3.1;
  double theta1_lo = 0.0;
  double theta1_hi = 0.2;

  // Initializing radar, relative to the pursuer launch point.
  double radar_dx = 0.0;
  double radar_dy = 0.0;
  double radar_sigma_rho = 50.0;
  double radar_sigma_lambda = std::numbers::pi / 180.0;
  double radar_sigma_gamma = 3.0 * std::numbers::pi / 180.0;
  double radar_sigma_a = 10.0;

  // Uncertainty interval and guidance.
  double W_thres = 0.9;
  double p_thres = 0.99;
  bool greedy = false;
  bool causal_complement = true;
  double ema_alpha = 0.3;
  double stale_horizon = std::numeric_limits<double>::infinity();
  double k_xi = 2.0;
  double C = 0.75;
  double dglc_delta = 0.3;
  double k_chatter = 0.7;

  // Simulation.
  double truth_dt = 1e-3;
  double t_max = 6.0;
  int smoother_lag = 100;

  void validate() const;
  estimation::FilterConfig filter_config() const;
  delay::DelayEstimatorConfig delay_config() const;
  std::array<double, 16> radar_covariance() const;
  dynamics::EngagementState initial_state() const;
  double evader_command(double t) const { return t < t_sw ? evader_cmd_before : evader_cmd_after; }
};

// Flat "key = value" text, one entry per line, '#' starts a comment. Unknown
// keys are rejected. Values are written with 17 significant digits so a
// save/load cycle is lossless.
ScenarioConfig load_config(std::istream& in, ScenarioConfig base = {});
ScenarioConfig load_config_file(const std::string& path, ScenarioConfig base = {});
void save_config(std::ostream& out, const ScenarioConfig& cfg);
bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

}  // namespace intercept
