#include <vector>

#include <gtest/gtest.h>

#include "intercept/smoother.hpp"

using namespace intercept;
using namespace intercept::smoother;

namespace {

std::vector<estimation::ParticleState> slot_states(int n, double t) {
  std::vector<estimation::ParticleState> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = {1000.0 + i, 1.0, 0.1 * i, 10.0 * i + t, t};
  return x;
}

double rho_of(const estimation::ParticleState& x, const PursuerSnapshot&) { return x.rho; }

}  // namespace

TEST(Smoother, LagZeroIsWeightedMean) {
  FixedLagSmoother s(10);
  const auto x = slot_states(4, 0.0);
  s.record(x, {}, {0.0, 0.0, 0.0});
  const std::vector<double> w{0.1, 0.2, 0.3, 0.4};
  const auto out = s.smoothed(0, w, rho_of);
  double expect = 0.0;
  for (int i = 0; i < 4; ++i) expect += w[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)].rho;
  EXPECT_DOUBLE_EQ(out.value, expect);
  EXPECT_EQ(out.lag_used, 0);
  EXPECT_FALSE(out.clamped);
}

TEST(Smoother, IdentityAncestorsReadOldSlot) {
  FixedLagSmoother s(10);
  const std::vector<int> id{0, 1, 2, 3};
  for (int k = 0; k < 5; ++k) s.record(slot_states(4, k), id, {0.0, 0.0, 0.01 * k});
  const std::vector<double> w(4, 0.25);
  const auto st = s.smoothed_state(3, w);
  EXPECT_DOUBLE_EQ(st.theta, 1.0);
  EXPECT_DOUBLE_EQ(s.pursuer_at(3).t, 0.01);
}

TEST(Smoother, DegenerateGenealogyCollapsesToOneAncestor) {
  FixedLagSmoother s(10);
  s.record(slot_states(10, 0.0), {}, {});
  const std::vector<int> all7(10, 7);
  s.record(slot_states(10, 1.0), all7, {});
  const std::vector<double> w(10, 0.1);
  const auto out = s.smoothed(1, w, rho_of);
  EXPECT_DOUBLE_EQ(out.value, 1007.0);
  EXPECT_NEAR(out.dispersion, 0.0, 1e-9);
  for (int i : s.lineage(1)) EXPECT_EQ(i, 7);
}

TEST(Smoother, LagBeyondHistoryIsClamped) {
  FixedLagSmoother s(3);
  for (int k = 0; k < 2; ++k) s.record(slot_states(2, k), {}, {});
  const std::vector<double> w{0.5, 0.5};
  auto out = s.smoothed(5, w, rho_of);
  EXPECT_TRUE(out.clamped);
  EXPECT_EQ(out.lag_used, 1);
  // The ring buffer holds max_lag + 1 slots.
  for (int k = 2; k < 10; ++k) s.record(slot_states(2, k), {}, {});
  out = s.smoothed(5, w, rho_of);
  EXPECT_EQ(out.lag_used, 3);
  EXPECT_DOUBLE_EQ(s.smoothed_state(3, w).theta, 6.0);
}

TEST(Smoother, RejectsMismatchedInput) {
  FixedLagSmoother s(3);
  EXPECT_THROW(s.lineage(0), std::logic_error);
  s.record(slot_states(2, 0.0), {}, {});
  EXPECT_THROW(s.record(slot_states(3, 1.0), {}, {}), std::invalid_argument);
  const std::vector<double> w{1.0};
  EXPECT_THROW(s.smoothed(0, w, rho_of), std::invalid_argument);
}
