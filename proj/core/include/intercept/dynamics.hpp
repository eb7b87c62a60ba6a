#pragma once

#include <optional>
#include <random>
#include <span>
#include <vector>

#include "intercept/error.hpp"
#include "intercept/rng.hpp"

namespace intercept::dynamics {

inline constexpr double kGravity = 9.80665;

struct VehicleParams {
  double V_P = 2500.0;
  double V_E = 2500.0;
  double tau_P = 0.2;
  double tau_E = 0.2;
  double a_P_max = 45.0 * kGravity;
  double a_E_max = 20.0 * kGravity;
  double f = 100.0;  // measurement rate, Hz

  double mu() const { return a_P_max / a_E_max; }
  double epsilon() const { return tau_E / tau_P; }
  double dt_meas() const { return 1.0 / f; }
  // Throws ConfigError on non-positive entries or mu <= 1.
  void validate() const;
};

// Relative polar state plus pursuer own-state. theta is the time since the
// evader's last command switch.
struct EngagementState {
  double rho = 0.0;
  double lambda = 0.0;
  double gamma_E = 0.0;
  double a_E = 0.0;
  double theta = 0.0;
  double gamma_P = 0.0;
  double a_P = 0.0;
  double t = 0.0;
};

struct StateRates {
  double rho = 0.0;
  double lambda = 0.0;
  double gamma_E = 0.0;
  double a_E = 0.0;
  double gamma_P = 0.0;
  double a_P = 0.0;
};

struct PolarVelocity {
  double V_rho = 0.0;
  double V_lambda = 0.0;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Measurement {
  double z = 0.0;
  double t_k = 0.0;
};

PolarVelocity polar_velocity(double lambda, double gamma_E, double gamma_P,
                             const VehicleParams& p);
PolarVelocity polar_velocity(const EngagementState& s, const VehicleParams& p);

// u_cmd, v_cmd are normalized commands; a^c = a^max * cmd.
StateRates derivatives(const EngagementState& s, double u_cmd, double v_cmd,
                       const VehicleParams& p);

// One RK4 step. theta is left untouched (the caller owns the sojourn clock).
EngagementState step(const EngagementState& s, double u_cmd, double v_cmd,
                     const VehicleParams& p, double dt);

// -rho / V_rho, or nullopt when the geometry is no longer closing.
std::optional<double> time_to_go(const EngagementState& s, const VehicleParams& p);

// Evader position relative to the pursuer, inertial frame.
Vec2 relative_position(const EngagementState& s);
Vec2 relative_velocity(const EngagementState& s, const VehicleParams& p);
// Evader minus pursuer acceleration. The evader's inertial heading is
// pi - gamma_E, so its lateral acceleration points along (sin gamma_E, cos gamma_E).
Vec2 relative_acceleration(const EngagementState& s);

// Projections onto the normal of a reference line of sight.
double lateral_velocity(double V_rho, double V_lambda, double lambda,
                        double lambda_ref);
double evader_normal_accel(double a_E, double gamma_E, double lambda_ref);
double pursuer_normal_accel(double a_P, double gamma_P, double lambda_ref);

struct TimedPosition {
  double t = 0.0;
  Vec2 r;
};

struct MissResult {
  double miss = 0.0;
  double t_cpa = 0.0;
};

// Closest approach from sampled relative positions. Fits a quadratic through
// the three samples bracketing the smallest sampled range and minimizes its
// norm. Never exceeds the smallest sampled range.
MissResult closest_approach(std::span<const TimedPosition> samples);

// Same, from a polar trajectory. The engagement is cut at the first sample
// with V_rho >= 0 (or the last sample). Throws std::invalid_argument if empty.
MissResult terminate_and_miss(std::span<const EngagementState> trajectory,
                              const VehicleParams& p);

class NoiseLaw {
 public:
  virtual ~NoiseLaw() = default;
  virtual double sample(Rng& rng) const = 0;
  virtual double log_density(double nu) const = 0;
  virtual double sigma() const = 0;
};

class GaussianNoise final : public NoiseLaw {
 public:
  explicit GaussianNoise(double sigma);
  double sample(Rng& rng) const override;
  double log_density(double nu) const override;
  double sigma() const override { return sigma_; }

 private:
  double sigma_;
};

// Same standard deviation as the Gaussian, heavier tails.
class LaplaceNoise final : public NoiseLaw {
 public:
  explicit LaplaceNoise(double sigma);
  double sample(Rng& rng) const override;
  double log_density(double nu) const override;
  double sigma() const override { return sigma_; }

 private:
  double sigma_;
  double scale_;
};

Measurement measure(const EngagementState& s, const NoiseLaw& noise, Rng& rng);
Measurement measure(const EngagementState& s, double sigma_lambda, Rng& rng);

}  // namespace intercept::dynamics
