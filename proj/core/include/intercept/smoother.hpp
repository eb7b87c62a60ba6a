#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "intercept/dynamics.hpp"
#include "intercept/estimation.hpp"

namespace intercept::smoother {

// Pursuer own-state at the time a slot was recorded. Lateral quantities of
// past particles depend on it.
struct PursuerSnapshot {
  double gamma_P = 0.0;
  double a_P = 0.0;
  double t = 0.0;
};

using Selector = std::function<double(const estimation::ParticleState&, const PursuerSnapshot&)>;

struct Smoothed {
  double value = 0.0;
  double dispersion = 0.0;  // weighted standard deviation
  int lag_used = 0;
  bool clamped = false;
  double t = 0.0;  // time of the slot that was read
};

// Fixed-lag smoother over a particle genealogy. Each slot stores the particle
// states after prediction and the ancestor index of every particle into the
// previous slot; past states are reached by walking the ancestor chain.
class FixedLagSmoother {
 public:
  explicit FixedLagSmoother(int max_lag = 100);

  // ancestors may be empty for the very first record (identity).
  void record(std::span<const estimation::ParticleState> states, std::span<const int> ancestors,
              const PursuerSnapshot& pursuer);

  int max_lag() const { return max_lag_; }
  // Largest lag that can be answered without clamping.
  int available_lag() const { return count_ == 0 ? -1 : static_cast<int>(count_) - 1; }
  std::size_t stored_snapshots() const { return states_.size(); }

  // Weighted mean over lag-aligned ancestors using the current weights.
  Smoothed smoothed(int lag_steps, std::span<const double> weights, const Selector& sel) const;
  estimation::ParticleState smoothed_state(int lag_steps, std::span<const double> weights,
                                           bool* clamped = nullptr) const;
  // Indices, into the slot at the given lag, of every current particle's ancestor.
  std::vector<int> lineage(int lag_steps) const;
  PursuerSnapshot pursuer_at(int lag_steps) const;

 private:
  std::size_t slot(int lag) const;
  int clamp_lag(int lag, bool* clamped) const;

  int max_lag_;
  std::size_t n_ = 0;
  std::size_t head_ = 0;   // slot of the newest record
  std::size_t count_ = 0;  // number of valid slots
  std::vector<estimation::ParticleState> states_;
  std::vector<int> ancestors_;
  std::vector<PursuerSnapshot> pursuer_;
};

// Lateral relative velocity normal to a reference line of sight.
Selector lateral_velocity(const dynamics::VehicleParams& v, double lambda_ref);
// Evader acceleration normal to a reference line of sight.
Selector evader_normal_accel(double lambda_ref);

}  // namespace intercept::smoother
