#include "intercept/smoother.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace intercept::smoother {

FixedLagSmoother::FixedLagSmoother(int max_lag) : max_lag_(max_lag) {
  if (max_lag < 0) throw std::invalid_argument("FixedLagSmoother: negative max_lag");
}

std::size_t FixedLagSmoother::slot(int lag) const {
  const std::size_t cap = static_cast<std::size_t>(max_lag_) + 1;
  return (head_ + cap - static_cast<std::size_t>(lag)) % cap;
}

int FixedLagSmoother::clamp_lag(int lag, bool* clamped) const {
  if (count_ == 0) throw std::logic_error("FixedLagSmoother: nothing recorded");
  if (lag < 0) throw std::invalid_argument("FixedLagSmoother: negative lag");
  const int avail = available_lag();
  const bool c = lag > avail;
  if (clamped) *clamped = c;
  return c ? avail : lag;
}

void FixedLagSmoother::record(std::span<const estimation::ParticleState> states,
                              std::span<const int> ancestors, const PursuerSnapshot& pursuer) {
  const std::size_t cap = static_cast<std::size_t>(max_lag_) + 1;
  if (count_ == 0) {
    n_ = states.size();
    states_.assign(cap * n_, {});
    ancestors_.assign(cap * n_, 0);
    pursuer_.assign(cap, {});
    head_ = cap - 1;
  } else if (states.size() != n_) {
    throw std::invalid_argument("FixedLagSmoother: particle count changed");
  }
  if (!ancestors.empty() && ancestors.size() != n_) {
    throw std::invalid_argument("FixedLagSmoother: ancestor count mismatch");
  }
  head_ = (head_ + 1) % cap;
  std::copy(states.begin(), states.end(), states_.begin() + head_ * n_);
  int* anc = ancestors_.data() + head_ * n_;
  for (std::size_t i = 0; i < n_; ++i) {
    anc[i] = ancestors.empty() ? static_cast<int>(i) : ancestors[i];
  }
  pursuer_[head_] = pursuer;
  count_ = std::min(count_ + 1, cap);
}

std::vector<int> FixedLagSmoother::lineage(int lag_steps) const {
  const int lag = clamp_lag(lag_steps, nullptr);
  std::vector<int> idx(n_);
  for (std::size_t i = 0; i < n_; ++i) idx[i] = static_cast<int>(i);
  for (int l = 0; l < lag; ++l) {
    const int* anc = ancestors_.data() + slot(l) * n_;
    for (auto& k : idx) k = anc[k];
  }
  return idx;
}

PursuerSnapshot FixedLagSmoother::pursuer_at(int lag_steps) const {
  return pursuer_[slot(clamp_lag(lag_steps, nullptr))];
}

Smoothed FixedLagSmoother::smoothed(int lag_steps, std::span<const double> weights,
                                    const Selector& sel) const {
  Smoothed out;
  const int lag = clamp_lag(lag_steps, &out.clamped);
  if (weights.size() != n_) throw std::invalid_argument("FixedLagSmoother: weight count mismatch");
  out.lag_used = lag;
  const std::size_t s = slot(lag);
  const PursuerSnapshot& ps = pursuer_[s];
  out.t = ps.t;
  const estimation::ParticleState* base = states_.data() + s * n_;

  std::vector<estimation::ParticleState> aligned;
  std::span<const estimation::ParticleState> x(base, n_);
  if (lag > 0) {
    const auto idx = lineage(lag);
    aligned.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) aligned[i] = base[idx[i]];
    x = aligned;
  }
  out.value = estimation::weighted_mean(
      x, weights, [&](const estimation::ParticleState& p, std::size_t) { return sel(p, ps); });

  double wsum = 0.0;
  double var = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const double d = sel(x[i], ps) - out.value;
    var += weights[i] * d * d;
    wsum += weights[i];
  }
  out.dispersion = wsum > 0.0 ? std::sqrt(var / wsum) : 0.0;
  return out;
}

estimation::ParticleState FixedLagSmoother::smoothed_state(int lag_steps,
                                                           std::span<const double> weights,
                                                           bool* clamped) const {
  const int lag = clamp_lag(lag_steps, clamped);
  if (weights.size() != n_) throw std::invalid_argument("FixedLagSmoother: weight count mismatch");
  const estimation::ParticleState* base = states_.data() + slot(lag) * n_;
  if (lag == 0) return estimation::weighted_average({base, n_}, weights);
  const auto idx = lineage(lag);
  std::vector<estimation::ParticleState> aligned(n_);
  for (std::size_t i = 0; i < n_; ++i) aligned[i] = base[idx[i]];
  return estimation::weighted_average(aligned, weights);
}

Selector lateral_velocity(const dynamics::VehicleParams& v, double lambda_ref) {
  return [v, lambda_ref](const estimation::ParticleState& x, const PursuerSnapshot& p) {
    const auto pv = dynamics::polar_velocity(x.lambda, x.gamma_E, p.gamma_P, v);
    return dynamics::lateral_velocity(pv.V_rho, pv.V_lambda, x.lambda, lambda_ref);
  };
}

Selector evader_normal_accel(double lambda_ref) {
  return [lambda_ref](const estimation::ParticleState& x, const PursuerSnapshot&) {
    return dynamics::evader_normal_accel(x.a_E, x.gamma_E, lambda_ref);
  };
}

}  // namespace intercept::smoother
