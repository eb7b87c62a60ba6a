#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "intercept/delay_estimator.hpp"
#include "oracle_values.hpp"
#include "theta_histogram.hpp"

using namespace intercept;
using namespace intercept::delay;

TEST(WeightedQuantile, Basics) {
  const std::vector<double> v{3.0, 1.0, 2.0};
  const std::vector<double> w{1.0, 1.0, 2.0};
  EXPECT_EQ(weighted_quantile(v, w, 0.25), 1.0);
  EXPECT_EQ(weighted_quantile(v, w, 0.5), 2.0);
  EXPECT_EQ(weighted_quantile(v, w, 0.75), 2.0);
  EXPECT_EQ(weighted_quantile(v, w, 1.0), 3.0);
  EXPECT_THROW(weighted_quantile(v, w, 0.0), std::invalid_argument);
  EXPECT_THROW(weighted_quantile(std::vector<double>{}, std::vector<double>{}, 0.5),
               std::invalid_argument);
}

TEST(ThetaStar, HistogramSoftAndGreedy) {
  const auto e = fixtures::theta_histogram_ensemble();
  const auto r = estimate_theta_star(e, 0.9, 0.99);
  ASSERT_EQ(r.status, QuantileStatus::ok);
  EXPECT_EQ(r.dominant_mode, 0);
  EXPECT_NEAR(r.soft, 0.26, 1e-12);
  EXPECT_NEAR(r.greedy, 0.28, 1e-12);
}

TEST(ThetaStar, PointMassComplement) {
  auto e = fixtures::theta_histogram_ensemble();
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e.mode[i] == 1) e.x[i].theta = 0.17;
  }
  for (double p : {0.01, 0.5, 0.99, 1.0}) {
    EXPECT_EQ(estimate_theta_star(e, 0.9, p).soft, 0.17);
  }
}

TEST(ThetaStar, NoDominantMode) {
  auto e = fixtures::theta_histogram_ensemble();
  EXPECT_EQ(estimate_theta_star(e, 0.99, 0.99).status, QuantileStatus::no_dominant_mode);
}

TEST(ThetaStar, EmptyComplement) {
  auto e = fixtures::theta_histogram_ensemble();
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e.mode[i] == 1) e.w[i] = 0.0;
  }
  EXPECT_EQ(estimate_theta_star(e, 0.9, 0.99).status, QuantileStatus::empty_complement);
}

TEST(ThetaStar, StaleComplementParticlesAreIgnored) {
  auto e = fixtures::theta_histogram_ensemble();
  // Swap roles: mode 1 dominates with a recent switch, mode 0 keeps its
  // launch-time sojourn.
  for (std::size_t i = 0; i < e.size(); ++i) e.w[i] = e.mode[i] == 1 ? 0.97 / 29 : 0.03 / 29;
  const auto causal = estimate_theta_star(e, 0.9, 0.99, true);
  EXPECT_EQ(causal.status, QuantileStatus::empty_complement);
  const auto raw = estimate_theta_star(e, 0.9, 0.99, false);
  ASSERT_EQ(raw.status, QuantileStatus::ok);
  EXPECT_GT(raw.soft, 3.0);
}

TEST(ThetaStar, SoftNeverExceedsGreedy) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    estimation::ParticleEnsemble e;
    e.modes = 2;
    e.per_mode = 50;
    for (int j = 0; j < 2; ++j) {
      for (int s = 0; s < 50; ++s) {
        e.x.push_back({1000.0, 1.0, 0.0, 0.0, j == 0 ? 5.0 + u(rng) : u(rng)});
        e.mode.push_back(j);
        e.w.push_back(j == 0 ? 0.95 / 50 : 0.05 * u(rng) / 25);
      }
    }
    for (double p : {0.5, 0.9, 0.99, 1.0}) {
      const auto r = estimate_theta_star(e, 0.9, p);
      if (r.status == QuantileStatus::ok) EXPECT_LE(r.soft, r.greedy);
    }
  }
}

TEST(AnalyticModel, ScenarioValue) {
  AnalyticDelayParams p;
  EXPECT_NEAR(analytic_b(p, -5000.0), oracle::kAnalyticB, 1e-14);
  EXPECT_NEAR(analytic_theta(3.0, p, -5000.0), oracle::kAnalyticTheta3, 1e-14);
  EXPECT_DOUBLE_EQ(analytic_theta(0.0, p, -5000.0), 0.01);
  // The part above the floor scales with t_go^(1/3).
  const double r = (analytic_theta(2.4, p, -5000.0) - 0.01) / (analytic_theta(0.3, p, -5000.0) - 0.01);
  EXPECT_NEAR(r, 2.0, 1e-12);
}

TEST(PropagatedModel, FitAndQuery) {
  const double b = fit_b(0.26, 1.0, 100.0);
  EXPECT_NEAR(b, 0.25, 1e-15);
  EXPECT_NEAR(propagate_model(b, 1.0, 100.0), 0.26, 1e-15);
  EXPECT_NEAR(propagate_model(b, 0.5, 100.0), oracle::kPropagatedHalf, 1e-15);
  EXPECT_DOUBLE_EQ(propagate_model(b, 0.0, 100.0), 0.01);
  EXPECT_THROW(fit_b(0.26, 0.0, 100.0), std::invalid_argument);
}

TEST(ResolveDelays, Ratio) {
  auto d = resolve_delays(0.2, 0.75, 0.25, 1.0, 0.2);
  EXPECT_NEAR(d.delta1, 0.15, 1e-15);
  EXPECT_EQ(d.delta2, 0.2);
  EXPECT_FALSE(d.degenerate);
  d = resolve_delays(0.2, 1.0, 0.25, 1.0, 0.2);
  EXPECT_EQ(d.delta1, d.delta2);
  EXPECT_EQ(d.gamma1, d.gamma2);
  d = resolve_delays(0.2, 0.0, 0.25, 1.0, 0.2);
  EXPECT_EQ(d.delta1, 0.0);
  EXPECT_TRUE(d.degenerate);
}

TEST(DelayEstimator, AlgorithmStates) {
  DelayEstimatorConfig cfg;
  cfg.ema_alpha = 1.0;
  DelayEstimator est(cfg);
  auto e = fixtures::theta_histogram_ensemble();

  // No dominant mode at the start: analytic model.
  auto flat = e;
  for (auto& w : flat.w) w = 1.0 / flat.size();
  auto r = est.update(flat, 0.0, 3.0, -5000.0);
  EXPECT_EQ(r.source, ThetaSource::analytic_init);
  EXPECT_NEAR(r.theta_star, oracle::kAnalyticTheta3, 1e-12);
  EXPECT_TRUE(est.initializing());

  // Dominant mode: quantile, and initialization ends.
  r = est.update(e, 0.01, 1.0, -5000.0);
  EXPECT_EQ(r.source, ThetaSource::quantile);
  EXPECT_NEAR(r.theta_star, 0.26, 1e-12);
  EXPECT_FALSE(est.initializing());

  // Dominance lost again: propagate the fitted model.
  r = est.update(flat, 0.02, 0.5, -5000.0);
  EXPECT_EQ(r.source, ThetaSource::propagated);
  EXPECT_NEAR(r.theta_star, oracle::kPropagatedHalf, 1e-12);
}

TEST(DelayEstimator, FloorIsOneSample) {
  DelayEstimator est;
  auto e = fixtures::theta_histogram_ensemble();
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e.mode[i] == 1) e.x[i].theta = 0.0;
  }
  EXPECT_GE(est.update(e, 0.0, 1.0, -5000.0).theta_star, 0.01);
}

TEST(DelayEstimator, StaleFitFallsBackToAnalytic) {
  DelayEstimatorConfig cfg;
  cfg.ema_alpha = 1.0;
  cfg.stale_horizon = 0.5;
  DelayEstimator est(cfg);
  auto e = fixtures::theta_histogram_ensemble();
  auto flat = e;
  for (auto& w : flat.w) w = 1.0 / flat.size();
  est.update(e, 0.0, 2.0, -5000.0);
  auto r = est.update(flat, 0.3, 1.7, -5000.0);
  EXPECT_EQ(r.source, ThetaSource::propagated);
  r = est.update(flat, 0.8, 1.2, -5000.0);
  EXPECT_EQ(r.source, ThetaSource::analytic_init);
}
