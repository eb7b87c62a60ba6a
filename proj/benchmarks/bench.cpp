#include <benchmark/benchmark.h>

#include "intercept/engagement.hpp"
#include "intercept/estimation.hpp"
#include "intercept/game.hpp"

using namespace intercept;

namespace {

const game::DelayModel kDelays = game::DelayModel::analytic(0.05, 0.15, 0.3, 1.0 / 3.0);

void BM_AFunc(benchmark::State& st) {
  const game::GameParams p;
  double tau = 0.0;
  for (auto _ : st) {
    tau = tau > 15.0 ? 0.0 : tau + 0.013;
    benchmark::DoNotOptimize(game::a_func(tau, kDelays, p));
  }
}
BENCHMARK(BM_AFunc);

void BM_RFunc(benchmark::State& st) {
  const game::GameParams p;
  double tau = 0.0;
  for (auto _ : st) {
    tau = tau > 15.0 ? 0.0 : tau + 0.013;
    benchmark::DoNotOptimize(game::r_func(tau, kDelays, p));
  }
}
BENCHMARK(BM_RFunc);

void BM_BoundaryTable(benchmark::State& st) {
  const game::GameParams p;
  for (auto _ : st) {
    game::BoundaryTable table(kDelays, p);
    benchmark::DoNotOptimize(table.boundary(3.0));
  }
}
BENCHMARK(BM_BoundaryTable)->Unit(benchmark::kMillisecond);

void BM_FilterStep(benchmark::State& st) {
  ScenarioConfig cfg;
  cfg.particles_per_mode = static_cast<int>(st.range(0));
  TruthSim sim(cfg);
  estimation::Immpf f(cfg.filter_config(), estimation::TransitionModel::constant(2, cfg.p_switch),
                      cfg.vehicle, 1);
  f.initialize(estimation::RadarEstimate::from_truth(sim.state(), 0.0, 0.0,
                                                     cfg.radar_covariance()));
  Rng rng(2);
  for (auto _ : st) {
    st.PauseTiming();
    if (sim.state().t > 2.5) {
      sim = TruthSim(cfg);
      f.initialize(estimation::RadarEstimate::from_truth(sim.state(), 0.0, 0.0,
                                                         cfg.radar_covariance()));
    }
    sim.advance(0.0);
    const auto z = dynamics::measure(sim.state(), cfg.sigma_lambda, rng);
    st.ResumeTiming();
    benchmark::DoNotOptimize(f.step(z, sim.last_track()));
  }
}
BENCHMARK(BM_FilterStep)->Arg(500)->Arg(2000)->Unit(benchmark::kMicrosecond);

void BM_Engagement(benchmark::State& st) {
  ScenarioConfig cfg;
  cfg.law = static_cast<Law>(st.range(0));
  cfg.t_sw = 2.0;
  for (auto _ : st) benchmark::DoNotOptimize(run_engagement(cfg).miss);
}
BENCHMARK(BM_Engagement)->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
