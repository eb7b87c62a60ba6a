#include <algorithm>

#include <gtest/gtest.h>

#include "intercept/sweep.hpp"
#include "intercept/tuning.hpp"
#include "intercept/verification.hpp"

using namespace intercept;

TEST(Sweep, GridSizeAndCorners) {
  EXPECT_EQ(sweep_grid_size(), 1197900);
  const auto first = sweep_grid_case(0);
  EXPECT_DOUBLE_EQ(first.a, 0.01);
  EXPECT_DOUBLE_EQ(first.b2, 0.06);
  EXPECT_EQ(first.b1_fraction, 0.0);
  EXPECT_DOUBLE_EQ(first.omega, 1.0 / 12.0);
  EXPECT_DOUBLE_EQ(first.mu, 1.1);
  EXPECT_DOUBLE_EQ(first.epsilon, 0.2);
  const auto last = sweep_grid_case(sweep_grid_size() - 1);
  EXPECT_DOUBLE_EQ(last.a, 0.1);
  EXPECT_DOUBLE_EQ(last.b2, 0.6);
  EXPECT_DOUBLE_EQ(last.b1_fraction, 1.0);
  EXPECT_DOUBLE_EQ(last.omega, 11.0 / 12.0);
  EXPECT_NEAR(last.mu, 3.0, 1e-12);
  EXPECT_NEAR(last.epsilon, 2.0, 1e-12);
  EXPECT_THROW(sweep_grid_case(sweep_grid_size()), std::out_of_range);
}

TEST(Sweep, SmallSampleAccountsForEveryCase) {
  SweepSpec spec;
  spec.samples = 200;
  spec.seed = 3;
  spec.grid = 2000;
  const auto r = sweep_single_root(spec);
  EXPECT_EQ(r.cases, 200);
  EXPECT_EQ(r.single_root + r.violations + r.no_root, r.cases);
  EXPECT_EQ(static_cast<long>(r.multi_root.size()), r.violations);
  const auto again = sweep_single_root(spec);
  EXPECT_EQ(again.single_root, r.single_root);
}

TEST(Tuning, SmallGridShape) {
  ScenarioConfig base;
  const auto r = tune_c(base, 3, 4);
  ASSERT_EQ(r.C.size(), 3u);
  ASSERT_EQ(r.t_sw.size(), 4u);
  ASSERT_EQ(r.surface.size(), 12u);
  EXPECT_EQ(r.C.front(), 0.0);
  EXPECT_EQ(r.C.back(), 1.0);
  EXPECT_EQ(r.t_sw.back(), 3.0);
  for (std::size_t c = 0; c < 3; ++c) {
    const auto row = r.surface.begin() + static_cast<long>(c * 4);
    EXPECT_EQ(r.worst[c], *std::max_element(row, row + 4));
  }
  EXPECT_EQ(r.best_worst, *std::min_element(r.worst.begin(), r.worst.end()));
  EXPECT_GT(tuning_b(base), 0.0);
}

TEST(Verification, SuitesPassOnSmallSamples) {
  EXPECT_TRUE(verify::reductions(5, 50).pass);
  EXPECT_TRUE(verify::derivative(5, 2).pass);
  EXPECT_TRUE(verify::functional_bound(5, 50).pass);
}

TEST(Verification, PiecewiseTrajectoryIsContinuous) {
  game::GameParams p;
  const verify::PiecewiseTrajectory tr({1.0, -2.0, 0.5, 0.3, 0.0},
                                       {{0.0, 1.0, -1.0}, {0.7, -0.4, 0.5}}, 2.0, p);
  const auto a = tr.at(0.7 - 1e-9);
  const auto b = tr.at(0.7);
  EXPECT_NEAR(a.x1, b.x1, 1e-7);
  EXPECT_NEAR(a.x3, b.x3, 1e-7);
  EXPECT_EQ(tr.u_at(0.5), 1.0);
  EXPECT_EQ(tr.v_at(1.0), 0.5);
  EXPECT_NEAR(tr.int_v(0.0, 2.0), -0.7 + 0.5 * 1.3, 1e-12);
}
