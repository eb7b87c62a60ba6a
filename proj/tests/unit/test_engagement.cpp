#include <cmath>

#include <gtest/gtest.h>

#include "intercept/engagement.hpp"

using namespace intercept;

namespace {

ScenarioConfig perfect(Law law, double t_sw) {
  ScenarioConfig cfg;
  cfg.law = law;
  cfg.estimator = EstimatorKind::truth;
  cfg.sigma_lambda = 0.0;
  cfg.t_sw = t_sw;
  return cfg;
}

ScenarioConfig small_filter(Law law, double t_sw, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.law = law;
  cfg.t_sw = t_sw;
  cfg.seed = seed;
  cfg.particles_per_mode = 300;
  return cfg;
}

}  // namespace

TEST(Engagement, PerfectInformationDgl1HitsDirectly) {
  for (double t_sw : {0.0, 0.7, 1.9, 2.6}) {
    const auto rec = run_engagement(perfect(Law::dgl1, t_sw));
    EXPECT_LT(rec.miss, 0.1) << "t_sw " << t_sw;
    EXPECT_GT(rec.t_cpa, 2.5);
    EXPECT_LT(rec.t_cpa, 3.5);
  }
}

TEST(Engagement, CommandsStayNormalized) {
  for (Law law : {Law::dgl1, Law::dglc, Law::tv_dglcc}) {
    RunOptions opt;
    opt.record_steps = true;
    const auto rec = run_engagement(small_filter(law, 0.5, 3), opt);
    EXPECT_LE(rec.max_abs_u, 1.0);
    ASSERT_FALSE(rec.trace.empty());
    for (const auto& s : rec.trace) {
      EXPECT_LE(std::abs(s.u), 1.0);
      EXPECT_GE(s.theta_star, 0.01 - 1e-15);
    }
    EXPECT_EQ(rec.trace.size(), rec.theta_trace.size());
  }
}

TEST(Engagement, DelaysFollowTheRatio) {
  RunOptions opt;
  opt.record_steps = true;
  auto cfg = small_filter(Law::tv_dglcc, 1.5, 4);
  const auto rec = run_engagement(cfg, opt);
  for (const auto& s : rec.trace) {
    // Delays are whole filter steps and never reach past the stored history.
    EXPECT_LE(s.delta1, s.delta2 + 1e-12);
    EXPECT_LE(s.delta2, s.theta_star + 0.005 + 1e-12);
    EXPECT_NEAR(s.delta2 * 100.0, std::round(s.delta2 * 100.0), 1e-9);
  }
}

TEST(Engagement, SameSeedSameOutcome) {
  RunOptions opt;
  opt.record_steps = true;
  const auto cfg = small_filter(Law::tv_dglcc, 2.0, 11);
  const auto a = run_engagement(cfg, opt);
  const auto b = run_engagement(cfg, opt);
  EXPECT_TRUE(same_outcome(a, b));
  EXPECT_EQ(a.miss, b.miss);
  auto other = cfg;
  other.seed = 12;
  EXPECT_NE(run_engagement(other, opt).miss, a.miss);
}

TEST(Engagement, FilterDetectsTheSwitch) {
  const auto rec = run_engagement(small_filter(Law::dgl1, 1.0, 5));
  ASSERT_FALSE(std::isnan(rec.detection_time));
  EXPECT_GT(rec.detection_time, 1.0);
  EXPECT_LT(rec.detection_time, 2.0);
  EXPECT_LT(rec.miss, 50.0);
}

TEST(Engagement, InvalidConfigThrows) {
  auto cfg = small_filter(Law::dgl1, 1.0, 1);
  cfg.sigma_lambda = 0.0;
  EXPECT_THROW(run_engagement(cfg), ConfigError);
}
