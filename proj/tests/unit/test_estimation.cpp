#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "intercept/engagement.hpp"
#include "intercept/estimation.hpp"
#include "intercept/scenario.hpp"
#include "theta_histogram.hpp"

using namespace intercept;
using namespace intercept::estimation;

namespace {

dynamics::EngagementState start() { return ScenarioConfig{}.initial_state(); }

}  // namespace

TEST(Radar, CoLocatedIsIdentity) {
  const auto [rho, lambda] = radar_to_pursuer(12345.0, 1.2, 0.0, 0.0);
  EXPECT_DOUBLE_EQ(rho, 12345.0);
  EXPECT_DOUBLE_EQ(lambda, 1.2);
}

TEST(Radar, OffsetRoundTrip) {
  auto s = start();
  const auto r = RadarEstimate::from_truth(s, 800.0, -300.0, RadarEstimate::default_covariance());
  const auto [rho, lambda] = radar_to_pursuer(r.mean[0], r.mean[1], r.dX, r.dY);
  EXPECT_NEAR(rho, s.rho, 1e-8);
  EXPECT_NEAR(lambda, s.lambda, 1e-12);
}

TEST(Initialize, SpreadMatchesRadarCovariance) {
  FilterConfig cfg;
  cfg.particles_per_mode = 5000;
  const auto s = start();
  const auto radar = RadarEstimate::from_truth(s, 0.0, 0.0, RadarEstimate::default_covariance());
  Rng rng(8);
  const auto e = initialize(radar, cfg, rng);
  ASSERT_EQ(e.size(), 10000u);
  auto sd = [&](auto get) {
    double m = 0.0;
    for (const auto& x : e.x) m += get(x);
    m /= e.size();
    double v = 0.0;
    for (const auto& x : e.x) v += (get(x) - m) * (get(x) - m);
    return std::sqrt(v / (e.size() - 1));
  };
  const double deg = std::numbers::pi / 180.0;
  EXPECT_NEAR(sd([](const ParticleState& x) { return x.rho; }), 50.0, 2.5);
  EXPECT_NEAR(sd([](const ParticleState& x) { return x.lambda; }), 1.0 * deg, 0.05 * deg);
  EXPECT_NEAR(sd([](const ParticleState& x) { return x.gamma_E; }), 3.0 * deg, 0.15 * deg);
  EXPECT_NEAR(sd([](const ParticleState& x) { return x.a_E; }), 10.0, 0.5);
  const auto p = modal_probabilities(e);
  EXPECT_NEAR(p[0], 0.5, 1e-12);
  EXPECT_NEAR(p[1], 0.5, 1e-12);
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e.mode[i] == 0) {
      EXPECT_GE(e.x[i].theta, 2.9);
      EXPECT_LE(e.x[i].theta, 3.1);
    } else {
      EXPECT_GE(e.x[i].theta, 0.0);
      EXPECT_LE(e.x[i].theta, 0.2);
    }
  }
}

TEST(Initialize, RejectsIndefiniteCovariance) {
  auto cov = RadarEstimate::default_covariance();
  cov[0] = -1.0;
  const auto radar = RadarEstimate::from_truth(start(), 0.0, 0.0, cov);
  Rng rng(1);
  EXPECT_THROW(initialize(radar, FilterConfig{}, rng), ConfigError);
}

TEST(ModalProbabilities, Trivial) {
  ParticleEnsemble e;
  e.modes = 2;
  e.per_mode = 2;
  e.x.resize(4);
  e.mode = {0, 0, 1, 1};
  e.w = {0.25, 0.25, 0.25, 0.25};
  auto p = modal_probabilities(e);
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
  e.w = {0.5, 0.5, 0.0, 0.0};
  p = modal_probabilities(e);
  EXPECT_DOUBLE_EQ(p[0], 1.0);
  EXPECT_DOUBLE_EQ(p[1], 0.0);
}

TEST(ModalProbabilities, HistogramExample) {
  const auto p = modal_probabilities(fixtures::theta_histogram_ensemble());
  EXPECT_NEAR(p[0], 0.985, 1e-12);
}

TEST(Resample, SystematicCounts) {
  const std::vector<double> w{0.1, 0.2, 0.3, 0.4};
  const auto idx = systematic_resample(w, 10, 0.5);
  std::vector<int> count(4, 0);
  for (int i : idx) ++count[static_cast<std::size_t>(i)];
  EXPECT_EQ(count, (std::vector<int>{1, 2, 3, 4}));
  EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
}

TEST(Resample, UnnormalizedAndZeroWeights) {
  const std::vector<double> w{0.0, 3.0, 0.0, 1.0};
  const auto idx = systematic_resample(w, 8, 0.25);
  for (int i : idx) EXPECT_TRUE(i == 1 || i == 3);
  EXPECT_THROW(systematic_resample(std::vector<double>{0.0, 0.0}, 2, 0.5), std::invalid_argument);
}

TEST(Transition, RowsAreStochastic) {
  const auto t = TransitionModel::constant(3, 0.01);
  for (int i = 0; i < 3; ++i) {
    double s = 0.0;
    for (int j = 0; j < 3; ++j) s += t.prob(i, j, 0.5);
    EXPECT_NEAR(s, 1.0, 1e-15);
  }
  EXPECT_DOUBLE_EQ(t.prob(0, 0, 0.0), 0.99);
}

TEST(Transition, SojournDependent) {
  const auto t = TransitionModel::sojourn_dependent(2, [](int from, int to, double theta) {
    const double p = theta > 1.0 ? 0.1 : 0.0;
    return from == to ? 1.0 - p : p;
  });
  EXPECT_TRUE(t.depends_on_theta());
  EXPECT_EQ(t.prob(0, 1, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(t.prob(0, 1, 2.0), 0.1);
}

namespace {

// Degenerate set-up: one mode, no noise anywhere, exact initial state.
struct Degenerate {
  ScenarioConfig cfg;
  FilterConfig fc;
  Degenerate() {
    cfg.t_sw = 100.0;
    fc.particles_per_mode = 20;
    fc.mode_commands = {-1.0};
    fc.theta_init = {{3.0, 3.0}};
    fc.sigma_gamma_E = 0.0;
    fc.sigma_a_E = 0.0;
    fc.sigma_lambda = 0.5e-3;
  }
};

}  // namespace

TEST(Immpf, NoiseFreeFilterTracksTruth) {
  Degenerate d;
  TruthSim sim(d.cfg);
  Immpf f(d.fc, TransitionModel::constant(1, 0.0), d.cfg.vehicle, 4);
  std::array<double, 16> zero{};
  f.initialize(RadarEstimate::from_truth(sim.state(), 0.0, 0.0, zero));
  Rng rng(9);
  for (int k = 0; k < 150; ++k) {
    sim.advance(0.3);
    const auto z = dynamics::measure(sim.state(), 0.0, rng);
    const auto out = f.step({z.z, sim.state().t}, sim.last_track());
    EXPECT_NEAR(out.mean.rho, sim.state().rho, 1e-3);
    EXPECT_NEAR(out.mean.lambda, sim.state().lambda, 1e-9);
    EXPECT_NEAR(out.mean.a_E, sim.state().a_E, 1e-6);
  }
}

TEST(Immpf, SojournResetsOnModeChange) {
  ScenarioConfig cfg;
  cfg.particles_per_mode = 200;
  cfg.p_switch = 0.3;
  TruthSim sim(cfg);
  Immpf f(cfg.filter_config(), TransitionModel::constant(2, cfg.p_switch), cfg.vehicle, 5);
  f.initialize(RadarEstimate::from_truth(sim.state(), 0.0, 0.0, cfg.radar_covariance()));
  Rng rng(6);
  for (int k = 0; k < 20; ++k) {
    const auto before = f.ensemble();
    sim.advance(0.0);
    f.step(dynamics::measure(sim.state(), cfg.sigma_lambda, rng), sim.last_track());
    const auto& e = f.ensemble();
    const auto anc = f.ancestors();
    for (std::size_t i = 0; i < e.size(); ++i) {
      const auto a = static_cast<std::size_t>(anc[i]);
      if (before.mode[a] != e.mode[i]) {
        EXPECT_EQ(e.x[i].theta, 0.01);
      } else {
        EXPECT_NEAR(e.x[i].theta, before.x[a].theta + 0.01, 1e-12);
      }
    }
    EXPECT_NEAR(std::accumulate(e.w.begin(), e.w.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(Immpf, SameSeedSameEnsemble) {
  ScenarioConfig cfg;
  cfg.particles_per_mode = 100;
  auto run = [&] {
    TruthSim sim(cfg);
    Immpf f(cfg.filter_config(), TransitionModel::constant(2, cfg.p_switch), cfg.vehicle, 77);
    f.initialize(RadarEstimate::from_truth(sim.state(), 0.0, 0.0, cfg.radar_covariance()));
    Rng rng(3);
    FilterOutput out;
    for (int k = 0; k < 30; ++k) {
      sim.advance(0.0);
      out = f.step(dynamics::measure(sim.state(), cfg.sigma_lambda, rng), sim.last_track());
    }
    return out.mean;
  };
  const auto a = run();
  const auto b = run();
  EXPECT_EQ(a.rho, b.rho);
  EXPECT_EQ(a.lambda, b.lambda);
  EXPECT_EQ(a.a_E, b.a_E);
}

TEST(Immpf, MeasurementMustAdvance) {
  ScenarioConfig cfg;
  cfg.particles_per_mode = 10;
  Immpf f(cfg.filter_config(), TransitionModel::constant(2, cfg.p_switch), cfg.vehicle, 1);
  f.initialize(RadarEstimate::from_truth(cfg.initial_state(), 0.0, 0.0, cfg.radar_covariance()));
  EXPECT_THROW(f.step({0.0, 0.0}, PursuerTrack{}), std::invalid_argument);
}
