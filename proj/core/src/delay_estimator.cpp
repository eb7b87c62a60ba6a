#include "intercept/delay_estimator.hpp"

#include "intercept/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace intercept::delay {

const char* to_string(ThetaSource s) {
  switch (s) {
    case ThetaSource::quantile: return "quantile";
    case ThetaSource::analytic_init: return "analytic-init";
    case ThetaSource::propagated: return "propagated";
  }
  return "unknown";
}

double weighted_quantile(std::span<const double> values, std::span<const double> weights,
                         double p) {
  if (values.size() != weights.size() || values.empty()) {
    throw std::invalid_argument("weighted_quantile: size mismatch or empty input");
  }
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("weighted_quantile: p outside (0, 1]");
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b] || (values[a] == values[b] && a < b);
  });
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("weighted_quantile: zero total weight");
  // Small slack so a CDF that reaches p only up to rounding still counts.
  const double target = p * total * (1.0 - 1e-12);
  double cum = 0.0;
  for (std::size_t i : idx) {
    cum += weights[i];
    if (cum >= target && weights[i] > 0.0) return values[i];
  }
  return values[idx.back()];
}

ThetaStarResult estimate_theta_star(const estimation::ParticleEnsemble& e, double W_thres,
                                    double p_thres, bool causal) {
  ThetaStarResult out;
  const auto modal = estimation::modal_probabilities(e);
  for (std::size_t r = 0; r < modal.size(); ++r) {
    if (modal[r] > W_thres) {
      out.dominant_mode = static_cast<int>(r);
      break;
    }
  }
  if (out.dominant_mode < 0) return out;

  // A complement particle older than the dominant mode's own sojourn claims
  // the evader never left that mode at all, which the dominant posterior
  // already rejects. It says nothing about a maneuver since.
  double bound = std::numeric_limits<double>::infinity();
  if (causal) {
    double sw = 0.0;
    double st = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e.mode[i] == out.dominant_mode) {
        sw += e.w[i];
        st += e.w[i] * e.x[i].theta;
      }
    }
    if (sw > 0.0) bound = st / sw;
  }

  std::vector<double> theta;
  std::vector<double> w;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e.mode[i] != out.dominant_mode && e.w[i] > 0.0 && e.x[i].theta <= bound) {
      theta.push_back(e.x[i].theta);
      w.push_back(e.w[i]);
    }
  }
  if (theta.empty()) {
    out.status = QuantileStatus::empty_complement;
    return out;
  }
  out.status = QuantileStatus::ok;
  out.soft = weighted_quantile(theta, w, p_thres);
  out.greedy = *std::max_element(theta.begin(), theta.end());
  return out;
}

double analytic_b(const AnalyticDelayParams& p, double V_rho) {
  return std::cbrt(-6.0 * p.tau_E * p.k_xi * V_rho * p.sigma_lambda / p.delta_a);
}

double analytic_theta(double t_go, const AnalyticDelayParams& p, double V_rho) {
  return 1.0 / p.f + analytic_b(p, V_rho) * std::cbrt(std::max(t_go, 0.0));
}

double fit_b(double theta_star, double t_go, double f) {
  if (!(t_go > 0.0)) throw std::invalid_argument("fit_b: t_go must be positive");
  return std::max(theta_star - 1.0 / f, 0.0) / std::cbrt(t_go);
}

double propagate_model(double b, double t_go, double f) {
  return 1.0 / f + b * std::cbrt(std::max(t_go, 0.0));
}

ResolvedDelays resolve_delays(double theta_star, double C, double b, double t_go, double tau_P) {
  if (!(C >= 0.0 && C <= 1.0)) throw std::invalid_argument("resolve_delays: C outside [0, 1]");
  (void)tau_P;  // d(Delta/tau_P)/d(t_go/tau_P) = dDelta/dt_go
  ResolvedDelays d;
  d.delta2 = theta_star;
  d.delta1 = C * theta_star;
  const double slope = t_go > 0.0 ? b / (3.0 * std::cbrt(t_go * t_go)) : 0.0;
  d.gamma2 = slope;
  d.gamma1 = C * slope;
  d.degenerate = C == 0.0;
  return d;
}

DelayEstimator::DelayEstimator(DelayEstimatorConfig cfg) : cfg_(cfg) {
  if (!(cfg_.ema_alpha > 0.0 && cfg_.ema_alpha <= 1.0)) {
    throw ConfigError("ema_alpha must lie in (0, 1]");
  }
}

DelayEstimate DelayEstimator::update(const estimation::ParticleEnsemble& e, double t_k,
                                     double t_go, double V_rho) {
  const double f = cfg_.analytic.f;
  const double floor = 1.0 / f;
  const ThetaStarResult q = estimate_theta_star(e, cfg_.W_thres, cfg_.p_thres, cfg_.causal_complement);

  DelayEstimate out;
  out.t_k = t_k;
  out.dominant_mode = q.dominant_mode;

  if (q.status == QuantileStatus::ok) {
    out.raw = std::max(cfg_.greedy ? q.greedy : q.soft, floor);
    out.source = ThetaSource::quantile;
    init_ = false;
    ema_ = has_ema_ ? cfg_.ema_alpha * out.raw + (1.0 - cfg_.ema_alpha) * ema_ : out.raw;
    has_ema_ = true;
    if (t_go > 1e-3) b_ = fit_b(ema_, t_go, f);
    t_fit_ = t_k;
  } else {
    out.empty_complement = q.status == QuantileStatus::empty_complement;
    if (!init_ && t_k - t_fit_ > cfg_.stale_horizon) {
      init_ = true;
      has_ema_ = false;
    }
    if (init_) {
      b_ = analytic_b(cfg_.analytic, V_rho);
      out.raw = analytic_theta(t_go, cfg_.analytic, V_rho);
      out.source = ThetaSource::analytic_init;
    } else {
      out.raw = propagate_model(b_, t_go, f);
      out.source = ThetaSource::propagated;
    }
    // Model outputs are smooth already; only quantile estimates are averaged.
    ema_ = out.raw;
    has_ema_ = true;
  }
  out.theta_star = std::max(ema_, floor);
  out.b = b_;
  last_ = out;
  return out;
}

}  // namespace intercept::delay
