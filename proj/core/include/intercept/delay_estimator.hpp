#pragma once

#include <limits>
#include <optional>
#include <span>

#include "intercept/dynamics.hpp"
#include "intercept/estimation.hpp"

namespace intercept::delay {

enum class ThetaSource { quantile, analytic_init, propagated };

const char* to_string(ThetaSource s);

struct UncertaintyEstimate {
  double theta_star = 0.0;
  ThetaSource source = ThetaSource::analytic_init;
  double t_k = 0.0;
};

struct AnalyticDelayParams {
  double k_xi = 2.0;
  double sigma_lambda = 0.5e-3;
  double tau_E = 0.2;
  double delta_a = 40.0 * dynamics::kGravity;  // command jump of a full bang-bang switch
  double f = 100.0;
};

enum class QuantileStatus { ok, no_dominant_mode, empty_complement };

struct ThetaStarResult {
  QuantileStatus status = QuantileStatus::no_dominant_mode;
  int dominant_mode = -1;
  double soft = 0.0;    // weighted p-quantile of complement sojourn times
  double greedy = 0.0;  // largest complement sojourn time
};

// Smallest value whose weighted CDF reaches p. Weights need not be normalized.
double weighted_quantile(std::span<const double> values, std::span<const double> weights,
                         double p);

// With causal set, complement particles whose sojourn exceeds the dominant
// mode's mean sojourn are left out.
ThetaStarResult estimate_theta_star(const estimation::ParticleEnsemble& e, double W_thres,
                                    double p_thres, bool causal = true);

// b such that the detection-delay model reads 1/f + b t_go^(1/3).
double analytic_b(const AnalyticDelayParams& p, double V_rho);
double analytic_theta(double t_go, const AnalyticDelayParams& p, double V_rho);
// One-point fit of b with the base pinned to 1/f.
double fit_b(double theta_star, double t_go, double f);
double propagate_model(double b, double t_go, double f);

struct ResolvedDelays {
  double delta1 = 0.0;  // s
  double delta2 = 0.0;  // s
  double gamma1 = 0.0;  // dDelta1/dtau, normalized
  double gamma2 = 0.0;
  bool degenerate = false;  // C = 0 collapses Delta_1 to zero
};

// Delta_2 = theta*, Delta_1 = C theta*; slopes from the fitted model at t_go.
ResolvedDelays resolve_delays(double theta_star, double C, double b, double t_go, double tau_P);

struct DelayEstimatorConfig {
  double W_thres = 0.9;
  double p_thres = 0.99;
  double ema_alpha = 0.3;
  bool greedy = false;
  bool causal_complement = true;
  // Seconds since the last quantile fit after which the propagated model is
  // abandoned and the estimator starts over from the analytic model.
  double stale_horizon = std::numeric_limits<double>::infinity();
  AnalyticDelayParams analytic;
};

struct DelayEstimate {
  double theta_star = 0.0;  // smoothed, used downstream
  double raw = 0.0;
  ThetaSource source = ThetaSource::analytic_init;
  int dominant_mode = -1;
  double b = 0.0;  // current model coefficient, seconds^(2/3)
  double t_k = 0.0;
  bool empty_complement = false;
};

// Uncertainty-interval estimator state machine (one cycle per filter step).
class DelayEstimator {
 public:
  explicit DelayEstimator(DelayEstimatorConfig cfg = {});

  DelayEstimate update(const estimation::ParticleEnsemble& e, double t_k, double t_go,
                       double V_rho);
  bool initializing() const { return init_; }
  const std::optional<DelayEstimate>& last() const { return last_; }

 private:
  DelayEstimatorConfig cfg_;
  bool init_ = true;
  double b_ = 0.0;
  double t_fit_ = 0.0;
  double ema_ = 0.0;
  bool has_ema_ = false;
  std::optional<DelayEstimate> last_;
};

}  // namespace intercept::delay
