#include "intercept/tuning.hpp"

#include <algorithm>
#include <cmath>

#include "intercept/campaign.hpp"
#include "intercept/delay_estimator.hpp"
#include "intercept/engagement.hpp"

namespace intercept {

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace

double tuning_b(const ScenarioConfig& base) {
  const double V_rho = -(base.vehicle.V_P + base.vehicle.V_E);
  return delay::analytic_b(base.delay_config().analytic, V_rho);
}

TuningCase tuning_case(const ScenarioConfig& base, double C, double t_sw, double b,
                       const game::BoundaryTable& table) {
  ScenarioConfig cfg = base;
  cfg.t_sw = t_sw;
  cfg.C = C;
  cfg.estimator = EstimatorKind::truth;
  cfg.law = Law::tv_dglcc;
  cfg.validate();
  const auto& veh = cfg.vehicle;
  const game::GameParams gp = game::GameParams::from_vehicle(veh, cfg.k_chatter);
  const double f = veh.f;
  const double jump = (cfg.evader_cmd_after - cfg.evader_cmd_before) * veh.a_E_max;

  TruthSim sim(cfg);
  TuningCase out;
  double u = 0.0;
  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) / f;
    if (k > 0 && !sim.advance(u)) break;
    const auto& s = sim.state();
    const auto pv = dynamics::polar_velocity(s, veh);
    const double t_go = pv.V_rho < 0.0 ? -s.rho / pv.V_rho : 0.0;
    const double lref = s.lambda;

    const double d2 = delay::propagate_model(b, t_go, f);
    const double d1 = C * d2;
    const auto& p1 = sim.at(t - d1);
    const auto& p2 = sim.at(t - d2);
    const auto pv1 = dynamics::polar_velocity(p1, veh);
    double x2 = dynamics::lateral_velocity(pv1.V_rho, pv1.V_lambda, p1.lambda, lref);
    if (t > t_sw + d1 && t < t_sw + d2) {
      // The look-back point lies after the switch, which the estimator has
      // not yet seen: the estimate misses the post-switch drift.
      const double tr = t - d1 - t_sw;
      x2 -= jump * std::cos(s.gamma_E + lref) * tr * tr / (2.0 * veh.tau_E);
      ++out.bias_steps;
    }
    const double x4 = dynamics::evader_normal_accel(p2.a_E, p2.gamma_E, lref);
    const auto hist = sim.x3_history(lref, d1);

    game::GuidanceInputs in;
    in.x1 = 0.0;
    in.x2_delayed = x2;
    in.x3 = dynamics::pursuer_normal_accel(s.a_P, s.gamma_P, lref);
    in.x3_history = hist;
    in.x3_dt = sim.dt();
    in.x4_delayed = x4;
    in.t_go = t_go;
    const auto z = game::zem_dglcc(in, d1, d2, gp);
    u = game::pursuer_command(z.z_bar, t_go / veh.tau_P, table, gp.k);
    if (t >= cfg.t_max) break;
  }
  out.miss = sim.miss().miss;
  out.z_bar = out.miss / game::GameParams::from_vehicle(veh).zem_scale();
  return out;
}

TuningResult tune_c(const ScenarioConfig& base, int s_C, int s_sw, double t_f, int jobs) {
  if (s_C < 1 || s_sw < 1) throw ConfigError("tuning grid sizes must be positive");
  TuningResult res;
  res.C = linspace(0.0, 1.0, s_C);
  res.t_sw = linspace(0.0, t_f, s_sw);
  const double b = tuning_b(base);
  const auto gp = game::GameParams::from_vehicle(base.vehicle, base.k_chatter);

  std::vector<game::BoundaryTable> tables(res.C.size());
  parallel_for(res.C.size(), jobs, [&](std::size_t i) {
    tables[i] = game::BoundaryTable(
        game::DelayModel::online(b, res.C[i], base.vehicle.f, base.vehicle.tau_P), gp);
  });

  res.surface.assign(res.C.size() * res.t_sw.size(), 0.0);
  parallel_for(res.surface.size(), jobs, [&](std::size_t i) {
    const std::size_t c = i / res.t_sw.size();
    const std::size_t s = i % res.t_sw.size();
    res.surface[i] = tuning_case(base, res.C[c], res.t_sw[s], b, tables[c]).z_bar;
  });

  res.worst.resize(res.C.size());
  for (std::size_t c = 0; c < res.C.size(); ++c) {
    const auto row = res.surface.begin() + static_cast<long>(c * res.t_sw.size());
    res.worst[c] = *std::max_element(row, row + static_cast<long>(res.t_sw.size()));
  }
  const auto best = std::min_element(res.worst.begin(), res.worst.end());
  res.best_C = res.C[static_cast<std::size_t>(best - res.worst.begin())];
  res.best_worst = *best;
  return res;
}

}  // namespace intercept
