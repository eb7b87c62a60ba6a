#include "intercept/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/tools/minima.hpp>

namespace intercept::dynamics {

void VehicleParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string(name) + " must be positive and finite");
    }
  };
  positive(V_P, "V_P");
  positive(V_E, "V_E");
  positive(tau_P, "tau_P");
  positive(tau_E, "tau_E");
  positive(a_P_max, "a_P_max");
  positive(a_E_max, "a_E_max");
  positive(f, "f");
  if (!(mu() > 1.0)) throw ConfigError("pursuer must out-maneuver the evader (mu > 1)");
}

PolarVelocity polar_velocity(double lambda, double gamma_E, double gamma_P,
                             const VehicleParams& p) {
  const double delta_P = gamma_P - lambda;
  const double delta_E = gamma_E + lambda;
  return {-(p.V_P * std::cos(delta_P) + p.V_E * std::cos(delta_E)),
          -p.V_P * std::sin(delta_P) + p.V_E * std::sin(delta_E)};
}

PolarVelocity polar_velocity(const EngagementState& s, const VehicleParams& p) {
  return polar_velocity(s.lambda, s.gamma_E, s.gamma_P, p);
}

StateRates derivatives(const EngagementState& s, double u_cmd, double v_cmd,
                       const VehicleParams& p) {
  if (!(s.rho > 0.0)) throw SingularGeometryError("range must stay positive");
  const PolarVelocity pv = polar_velocity(s, p);
  StateRates r;
  r.rho = pv.V_rho;
  r.lambda = pv.V_lambda / s.rho;
  r.gamma_E = s.a_E / p.V_E;
  r.a_E = (p.a_E_max * v_cmd - s.a_E) / p.tau_E;
  r.gamma_P = s.a_P / p.V_P;
  r.a_P = (p.a_P_max * u_cmd - s.a_P) / p.tau_P;
  return r;
}

namespace {

EngagementState advance(const EngagementState& s, const StateRates& k, double h) {
  EngagementState out = s;
  out.rho += h * k.rho;
  out.lambda += h * k.lambda;
  out.gamma_E += h * k.gamma_E;
  out.a_E += h * k.a_E;
  out.gamma_P += h * k.gamma_P;
  out.a_P += h * k.a_P;
  return out;
}

}  // namespace

EngagementState step(const EngagementState& s, double u_cmd, double v_cmd,
                     const VehicleParams& p, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step size must be positive");
  const StateRates k1 = derivatives(s, u_cmd, v_cmd, p);
  const StateRates k2 = derivatives(advance(s, k1, 0.5 * dt), u_cmd, v_cmd, p);
  const StateRates k3 = derivatives(advance(s, k2, 0.5 * dt), u_cmd, v_cmd, p);
  const StateRates k4 = derivatives(advance(s, k3, dt), u_cmd, v_cmd, p);
  auto comb = [dt](double a, double b, double c, double d) {
    return dt / 6.0 * (a + 2.0 * b + 2.0 * c + d);
  };
  EngagementState out = s;
  out.rho += comb(k1.rho, k2.rho, k3.rho, k4.rho);
  out.lambda += comb(k1.lambda, k2.lambda, k3.lambda, k4.lambda);
  out.gamma_E += comb(k1.gamma_E, k2.gamma_E, k3.gamma_E, k4.gamma_E);
  out.a_E += comb(k1.a_E, k2.a_E, k3.a_E, k4.a_E);
  out.gamma_P += comb(k1.gamma_P, k2.gamma_P, k3.gamma_P, k4.gamma_P);
  out.a_P += comb(k1.a_P, k2.a_P, k3.a_P, k4.a_P);
  out.t = s.t + dt;
  return out;
}

std::optional<double> time_to_go(const EngagementState& s, const VehicleParams& p) {
  const double V_rho = polar_velocity(s, p).V_rho;
  if (!(V_rho < 0.0)) return std::nullopt;
  return -s.rho / V_rho;
}

Vec2 relative_position(const EngagementState& s) {
  return {s.rho * std::cos(s.lambda), s.rho * std::sin(s.lambda)};
}

Vec2 relative_velocity(const EngagementState& s, const VehicleParams& p) {
  const Vec2 vE{-p.V_E * std::cos(s.gamma_E), p.V_E * std::sin(s.gamma_E)};
  const Vec2 vP{p.V_P * std::cos(s.gamma_P), p.V_P * std::sin(s.gamma_P)};
  return {vE.x - vP.x, vE.y - vP.y};
}

Vec2 relative_acceleration(const EngagementState& s) {
  const Vec2 aE{s.a_E * std::sin(s.gamma_E), s.a_E * std::cos(s.gamma_E)};
  const Vec2 aP{-s.a_P * std::sin(s.gamma_P), s.a_P * std::cos(s.gamma_P)};
  return {aE.x - aP.x, aE.y - aP.y};
}

double lateral_velocity(double V_rho, double V_lambda, double lambda, double lambda_ref) {
  const double d = lambda - lambda_ref;
  return V_rho * std::sin(d) + V_lambda * std::cos(d);
}

double evader_normal_accel(double a_E, double gamma_E, double lambda_ref) {
  return a_E * std::cos(gamma_E + lambda_ref);
}

double pursuer_normal_accel(double a_P, double gamma_P, double lambda_ref) {
  return a_P * std::cos(gamma_P - lambda_ref);
}

namespace {

double norm(const Vec2& v) { return std::hypot(v.x, v.y); }

}  // namespace

MissResult closest_approach(std::span<const TimedPosition> samples) {
  if (samples.empty()) throw std::invalid_argument("closest_approach: no samples");
  std::size_t k = 0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (norm(samples[i].r) < norm(samples[k].r)) k = i;
  }
  MissResult best{norm(samples[k].r), samples[k].t};
  if (samples.size() == 1) return best;

  if (samples.size() == 2) {
    // Straight segment between the two points.
    const Vec2 a = samples[0].r;
    const Vec2 d{samples[1].r.x - a.x, samples[1].r.y - a.y};
    const double dd = d.x * d.x + d.y * d.y;
    double s = dd > 0.0 ? -(a.x * d.x + a.y * d.y) / dd : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    const double m = std::hypot(a.x + s * d.x, a.y + s * d.y);
    if (m < best.miss) {
      best = {m, samples[0].t + s * (samples[1].t - samples[0].t)};
    }
    return best;
  }

  std::size_t i0 = k == 0 ? 0 : k - 1;
  if (i0 + 2 >= samples.size()) i0 = samples.size() - 3;
  const TimedPosition& p0 = samples[i0];
  const TimedPosition& p1 = samples[i0 + 1];
  const TimedPosition& p2 = samples[i0 + 2];

  // Lagrange quadratic through the three samples, per component.
  auto at = [&](double t) {
    const double l0 = (t - p1.t) * (t - p2.t) / ((p0.t - p1.t) * (p0.t - p2.t));
    const double l1 = (t - p0.t) * (t - p2.t) / ((p1.t - p0.t) * (p1.t - p2.t));
    const double l2 = (t - p0.t) * (t - p1.t) / ((p2.t - p0.t) * (p2.t - p1.t));
    return Vec2{l0 * p0.r.x + l1 * p1.r.x + l2 * p2.r.x,
                l0 * p0.r.y + l1 * p1.r.y + l2 * p2.r.y};
  };
  auto range = [&](double t) { return norm(at(t)); };

  // The fitted range may have two local minima over the window; scan first.
  constexpr int kScan = 64;
  const double lo = p0.t;
  const double hi = p2.t;
  const double h = (hi - lo) / kScan;
  int jbest = 0;
  double rbest = range(lo);
  for (int j = 1; j <= kScan; ++j) {
    const double r = range(lo + j * h);
    if (r < rbest) {
      rbest = r;
      jbest = j;
    }
  }
  const double a = std::max(lo, lo + (jbest - 1) * h);
  const double b = std::min(hi, lo + (jbest + 1) * h);
  const auto [t_min, r_min] =
      boost::math::tools::brent_find_minima(range, a, b, std::numeric_limits<double>::digits / 2);
  if (r_min < best.miss) best = {r_min, t_min};
  return best;
}

MissResult terminate_and_miss(std::span<const EngagementState> trajectory,
                              const VehicleParams& p) {
  if (trajectory.empty()) throw std::invalid_argument("terminate_and_miss: empty trajectory");
  std::size_t end = trajectory.size();
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    if (polar_velocity(trajectory[i], p).V_rho >= 0.0) {
      end = i + 1;
      break;
    }
  }
  std::vector<TimedPosition> samples;
  samples.reserve(end);
  for (std::size_t i = 0; i < end; ++i) {
    samples.push_back({trajectory[i].t, relative_position(trajectory[i])});
  }
  return closest_approach(samples);
}

GaussianNoise::GaussianNoise(double sigma) : sigma_(sigma) {
  if (!(sigma >= 0.0)) throw ConfigError("noise sigma must be non-negative");
}

double GaussianNoise::sample(Rng& rng) const {
  if (sigma_ == 0.0) return 0.0;
  return std::normal_distribution<double>(0.0, sigma_)(rng);
}

double GaussianNoise::log_density(double nu) const {
  const double r = nu / sigma_;
  return -0.5 * r * r - std::log(sigma_) - 0.5 * std::log(2.0 * std::numbers::pi);
}

LaplaceNoise::LaplaceNoise(double sigma) : sigma_(sigma), scale_(sigma / std::numbers::sqrt2) {
  if (!(sigma >= 0.0)) throw ConfigError("noise sigma must be non-negative");
}

double LaplaceNoise::sample(Rng& rng) const {
  if (sigma_ == 0.0) return 0.0;
  const double e = std::exponential_distribution<double>(1.0)(rng);
  const bool neg = std::bernoulli_distribution(0.5)(rng);
  return (neg ? -e : e) * scale_;
}

double LaplaceNoise::log_density(double nu) const {
  return -std::abs(nu) / scale_ - std::log(2.0 * scale_);
}

Measurement measure(const EngagementState& s, const NoiseLaw& noise, Rng& rng) {
  return {s.gamma_P - s.lambda + noise.sample(rng), s.t};
}

Measurement measure(const EngagementState& s, double sigma_lambda, Rng& rng) {
  return measure(s, GaussianNoise(sigma_lambda), rng);
}

}  // namespace intercept::dynamics
