#include "intercept/engagement.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>

#include "intercept/delay_estimator.hpp"
#include "intercept/game.hpp"
#include "intercept/smoother.hpp"

namespace intercept {

using dynamics::EngagementState;

namespace {

// Once the linear closest-approach time is this close, the remaining flight
// is extrapolated in Cartesian coordinates with constant accelerations. This
// keeps the polar equations away from rho -> 0.
constexpr double kEndgame = 5e-3;

double dot(const dynamics::Vec2& a, const dynamics::Vec2& b) { return a.x * b.x + a.y * b.y; }

}  // namespace

TruthSim::TruthSim(const ScenarioConfig& cfg)
    : v_(cfg.vehicle),
      t_sw_(cfg.t_sw),
      cmd_before_(cfg.evader_cmd_before),
      cmd_after_(cfg.evader_cmd_after),
      h_(cfg.truth_dt),
      per_period_(static_cast<int>(std::lround(cfg.vehicle.dt_meas() / cfg.truth_dt))) {
  history_.reserve(static_cast<std::size_t>(cfg.t_max / h_) + 16);
  EngagementState s = cfg.initial_state();
  s.theta = t_sw_ <= 0.0 ? 0.0 : s.t;
  history_.push_back(s);
}

void TruthSim::substep(double u) {
  const EngagementState s = history_.back();
  const auto r = dynamics::relative_position(s);
  const auto vel = dynamics::relative_velocity(s, v_);
  const double vv = dot(vel, vel);
  const double t_lin = vv > 0.0 ? -dot(r, vel) / vv : 0.0;
  if (t_lin <= kEndgame) {
    finished_ = true;
    if (t_lin <= 0.0) {
      miss_ = {std::hypot(r.x, r.y), s.t};
      return;
    }
    const auto a = dynamics::relative_acceleration(s);
    dynamics::TimedPosition pts[3];
    for (int i = 0; i < 3; ++i) {
      const double tau = t_lin * i;
      pts[i] = {s.t + tau,
                {r.x + vel.x * tau + 0.5 * a.x * tau * tau, r.y + vel.y * tau + 0.5 * a.y * tau * tau}};
    }
    miss_ = dynamics::closest_approach(pts);
    return;
  }

  const double t0 = static_cast<double>(n_) * h_;
  const double t1 = static_cast<double>(n_ + 1) * h_;
  EngagementState y;
  if (t0 < t_sw_ && t_sw_ < t1) {
    y = dynamics::step(s, u, cmd_before_, v_, t_sw_ - t0);
    y = dynamics::step(y, u, cmd_after_, v_, t1 - t_sw_);
  } else {
    y = dynamics::step(s, u, t0 >= t_sw_ ? cmd_after_ : cmd_before_, v_, h_);
  }
  y.t = t1;
  y.theta = t1 >= t_sw_ ? t1 - t_sw_ : t1;
  ++n_;
  history_.push_back(y);
}

bool TruthSim::advance(double u) {
  if (finished_) return false;
  const std::size_t start = history_.size() - 1;
  for (int i = 0; i < per_period_ && !finished_; ++i) substep(u);
  if (finished_) return false;
  const std::size_t mid = start + static_cast<std::size_t>(per_period_ / 2);
  const std::size_t end = history_.size() - 1;
  track_.gamma_P = {history_[start].gamma_P, history_[mid].gamma_P, history_[end].gamma_P};
  track_.a_P = {history_[start].a_P, history_[mid].a_P, history_[end].a_P};
  return true;
}

dynamics::MissResult TruthSim::miss() const {
  if (finished_) return miss_;
  return dynamics::terminate_and_miss(history_, v_);
}

const EngagementState& TruthSim::at(double t) const {
  const double k = std::floor(t / h_ + 1e-9);
  if (k <= 0.0) return history_.front();
  const auto i = std::min(static_cast<std::size_t>(k), history_.size() - 1);
  return history_[i];
}

std::vector<double> TruthSim::x3_history(double lambda_ref, double span) const {
  const long m = std::max(0L, static_cast<long>(std::ceil(span / h_ - 1e-9)));
  std::vector<double> out(static_cast<std::size_t>(m + 1), 0.0);
  const long last = static_cast<long>(history_.size()) - 1;
  for (long j = 0; j <= m; ++j) {
    const long idx = last - m + j;
    if (idx < 0) continue;
    const auto& s = history_[static_cast<std::size_t>(idx)];
    out[static_cast<std::size_t>(j)] = dynamics::pursuer_normal_accel(s.a_P, s.gamma_P, lambda_ref);
  }
  return out;
}

namespace {

struct Estimates {
  double lambda_ref = 0.0;
  double rho = 0.0;
  double V_rho = 0.0;
  double t_go = 0.0;
  double xi_dot = 0.0;
  double a_E_n = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
};

double closing_t_go(double rho, double V_rho) { return V_rho < 0.0 ? -rho / V_rho : 0.0; }

double sign(double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); }

}  // namespace

RunRecord run_engagement(const ScenarioConfig& cfg, const RunOptions& opt) {
  cfg.validate();
  const auto wall0 = std::chrono::steady_clock::now();
  const auto& veh = cfg.vehicle;
  const double period = veh.dt_meas();
  const double f = veh.f;
  const game::GameParams gp = game::GameParams::from_vehicle(veh, cfg.k_chatter);
  const bool use_filter = cfg.estimator == EstimatorKind::filter;

  RunRecord rec;
  rec.law = cfg.law;
  rec.t_sw = cfg.t_sw;
  rec.seed = cfg.seed;
  rec.detection_time = std::numeric_limits<double>::quiet_NaN();

  TruthSim sim(cfg);
  Rng meas_rng(derive_seed(cfg.seed, 2));
  std::unique_ptr<dynamics::NoiseLaw> noise;
  if (cfg.noise == estimation::LikelihoodKind::laplace) {
    noise = std::make_unique<dynamics::LaplaceNoise>(cfg.sigma_lambda);
  } else {
    noise = std::make_unique<dynamics::GaussianNoise>(cfg.sigma_lambda);
  }

  std::optional<estimation::Immpf> filter;
  smoother::FixedLagSmoother smoother(cfg.smoother_lag);
  delay::DelayEstimator delay_est(cfg.delay_config());
  estimation::FilterOutput fout;
  if (use_filter) {
    filter.emplace(cfg.filter_config(), estimation::TransitionModel::constant(2, cfg.p_switch),
                   veh, derive_seed(cfg.seed, 1));
    const auto radar = estimation::RadarEstimate::from_truth(sim.state(), cfg.radar_dx,
                                                             cfg.radar_dy, cfg.radar_covariance());
    fout = filter->initialize(radar, 0.0);
    smoother.record(filter->ensemble().x, {},
                    {sim.state().gamma_P, sim.state().a_P, 0.0});
  }

  // Boundary tables. DGL1 and DGLC use fixed delays; TV-DGLCC rebuilds its
  // table whenever the fitted delay model moves by more than a millisecond.
  std::optional<game::BoundaryTable> table;
  double table_b = std::numeric_limits<double>::quiet_NaN();
  auto build = [&](const game::DelayModel& m) {
    try {
      table.emplace(m, gp);
    } catch (const NoRootError&) {
      table.reset();
    }
    ++rec.table_builds;
  };
  if (cfg.law == Law::dgl1) build(game::DelayModel::none());
  if (cfg.law == Law::dglc) build(game::DelayModel::constant(0.0, cfg.dglc_delta / veh.tau_P));

  const auto probe_sel = smoother::lateral_velocity(veh, cfg.lambda0);
  std::vector<double> probe_filtered;
  std::vector<double> probe_truth;
  double probe_es = 0.0;
  double probe_ef = 0.0;

  double u = 0.0;
  for (long k = 0;; ++k) {
    const double t_k = static_cast<double>(k) * period;
    bool diverged = false;
    if (k > 0) {
      if (!sim.advance(u)) break;
      if (use_filter) {
        const auto z = dynamics::measure(sim.state(), *noise, meas_rng);
        fout = filter->step({z.z, t_k}, sim.last_track());
        diverged = fout.diverged;
        smoother.record(filter->ensemble().x, filter->ancestors(),
                        {sim.state().gamma_P, sim.state().a_P, t_k});
      }
    }
    const EngagementState& s = sim.state();
    Estimates est;
    double p_post = 0.0;
    delay::DelayEstimate dly;

    if (use_filter) {
      const auto& ens = filter->ensemble();
      est.lambda_ref = fout.mean.lambda;
      est.rho = fout.mean.rho;
      est.V_rho = estimation::weighted_mean(
          std::span<const estimation::ParticleState>(ens.x), ens.w,
          [&](const estimation::ParticleState& x, std::size_t) {
            return dynamics::polar_velocity(x.lambda, x.gamma_E, s.gamma_P, veh).V_rho;
          });
      est.t_go = closing_t_go(est.rho, est.V_rho);
      p_post = fout.modal.size() > 1 ? fout.modal[1] : 0.0;
      dly = delay_est.update(ens, t_k, est.t_go, est.V_rho);
    } else {
      const auto pv = dynamics::polar_velocity(s, veh);
      est.lambda_ref = s.lambda;
      est.rho = s.rho;
      est.V_rho = pv.V_rho;
      est.t_go = closing_t_go(s.rho, pv.V_rho);
      p_post = s.t >= cfg.t_sw ? 1.0 : 0.0;
      auto a = cfg.delay_config().analytic;
      dly.theta_star = delay::analytic_theta(est.t_go, a, est.V_rho);
      dly.b = delay::analytic_b(a, est.V_rho);
      dly.source = delay::ThetaSource::analytic_init;
      dly.t_k = t_k;
    }
    rec.theta_trace.push_back(dly.theta_star);
    if (std::isnan(rec.detection_time) && t_k >= cfg.t_sw && p_post > 0.5) {
      rec.detection_time = t_k;
    }

    const auto lat_sel = smoother::lateral_velocity(veh, est.lambda_ref);
    const auto acc_sel = smoother::evader_normal_accel(est.lambda_ref);
    auto filtered_at = [&](int lag, const smoother::Selector& sel, double* used) {
      if (use_filter) {
        const auto r = smoother.smoothed(lag, filter->ensemble().w, sel);
        *used = r.lag_used / f;
        return r.value;
      }
      const double t_past = std::max(0.0, t_k - lag / f);
      const EngagementState& p = sim.at(t_past);
      *used = t_k - p.t;
      return sel({p.rho, p.lambda, p.gamma_E, p.a_E, p.theta}, {p.gamma_P, p.a_P, p.t});
    };

    int lag1 = 0;
    int lag2 = 0;
    if (cfg.law == Law::tv_dglcc) {
      const auto resolved = delay::resolve_delays(dly.theta_star, cfg.C, dly.b, est.t_go, veh.tau_P);
      lag1 = static_cast<int>(std::lround(resolved.delta1 * f));
      lag2 = static_cast<int>(std::lround(resolved.delta2 * f));
      const double shift = std::isnan(table_b) ? 1.0 : std::abs(dly.b - table_b) * std::cbrt(est.t_go);
      if (shift > 1e-3) {
        build(game::DelayModel::online(dly.b, cfg.C, f, veh.tau_P));
        table_b = dly.b;
      }
    }
    est.xi_dot = filtered_at(lag1, lat_sel, &est.delta1);
    est.a_E_n = filtered_at(lag2, acc_sel, &est.delta2);
    if (cfg.law == Law::dglc) {
      est.delta1 = 0.0;
      est.delta2 = cfg.dglc_delta;
    }

    const double x3 = dynamics::pursuer_normal_accel(s.a_P, s.gamma_P, est.lambda_ref);
    const auto x3_hist = sim.x3_history(est.lambda_ref, est.delta1);
    game::GuidanceInputs in;
    in.x1 = 0.0;  // the reference line is the estimated LOS itself
    in.x2_delayed = est.xi_dot;
    in.x3 = x3;
    in.x3_history = x3_hist;
    in.x3_dt = sim.dt();
    in.x4_delayed = est.a_E_n;
    in.t_go = est.t_go;
    const game::ZemValue zem = cfg.law == Law::dgl1
                                   ? game::zem_dgl1(in, gp)
                                   : game::zem_dglcc(in, est.delta1, est.delta2, gp);
    double u_new = table ? game::pursuer_command(zem.z_bar, est.t_go / veh.tau_P, *table, gp.k)
                         : sign(zem.z_bar);
    if (diverged) {
      u_new = u;
      rec.diverged = true;
    }
    u = std::clamp(u_new, -1.0, 1.0);
    rec.max_abs_u = std::max(rec.max_abs_u, std::abs(u));

    if (opt.probe_smoother && use_filter) {
      const auto pv = dynamics::polar_velocity(s, veh);
      probe_truth.push_back(dynamics::lateral_velocity(pv.V_rho, pv.V_lambda, s.lambda, cfg.lambda0));
      const auto& w = filter->ensemble().w;
      probe_filtered.push_back(smoother.smoothed(0, w, probe_sel).value);
      const int l1 = static_cast<int>(std::lround(cfg.C * dly.theta_star * f));
      const bool inside = cfg.t_sw >= t_k - dly.theta_star && cfg.t_sw <= t_k;
      if (inside && l1 >= 1 && l1 <= k && l1 <= smoother.available_lag()) {
        const auto past = static_cast<std::size_t>(k - l1);
        const double es = smoother.smoothed(l1, w, probe_sel).value - probe_truth[past];
        const double ef = probe_filtered[past] - probe_truth[past];
        probe_es += es * es;
        probe_ef += ef * ef;
        ++rec.probe.samples;
      }
    }

    if (opt.record_steps) {
      StepRecord r;
      r.t = t_k;
      r.rho = s.rho;
      r.lambda = s.lambda;
      r.gamma_E = s.gamma_E;
      r.a_E = s.a_E;
      r.gamma_P = s.gamma_P;
      r.a_P = s.a_P;
      const auto pv = dynamics::polar_velocity(s, veh);
      r.xi_dot = dynamics::lateral_velocity(pv.V_rho, pv.V_lambda, s.lambda, est.lambda_ref);
      r.a_E_n = dynamics::evader_normal_accel(s.a_E, s.gamma_E, est.lambda_ref);
      r.rho_hat = est.rho;
      r.lambda_hat = est.lambda_ref;
      r.xi_dot_hat = est.xi_dot;
      r.a_E_n_hat = est.a_E_n;
      r.t_go_hat = est.t_go;
      r.p_post_switch = p_post;
      r.theta_star = dly.theta_star;
      r.theta_source = static_cast<int>(dly.source);
      r.delta1 = est.delta1;
      r.delta2 = est.delta2;
      r.z_bar = zem.z_bar;
      r.u = u;
      r.diverged = diverged;
      rec.trace.push_back(r);
    }
    ++rec.steps;
    if (t_k >= cfg.t_max) break;
  }

  const auto m = sim.miss();
  rec.miss = m.miss;
  rec.t_cpa = m.t_cpa;
  if (filter) rec.divergence_events = filter->divergence_events();
  if (rec.probe.samples > 0) {
    rec.probe.smoothed_rmse = std::sqrt(probe_es / rec.probe.samples);
    rec.probe.filtered_rmse = std::sqrt(probe_ef / rec.probe.samples);
  }
  rec.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  return rec;
}

namespace {

bool bits_equal(double a, double b) {
  return std::memcmp(&a, &b, sizeof(double)) == 0;
}

}  // namespace

bool same_outcome(const RunRecord& a, const RunRecord& b) {
  auto eq_vec = [](const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!bits_equal(x[i], y[i])) return false;
    }
    return true;
  };
  if (a.law != b.law || !bits_equal(a.t_sw, b.t_sw) || a.seed != b.seed) return false;
  if (!bits_equal(a.miss, b.miss) || !bits_equal(a.t_cpa, b.t_cpa)) return false;
  if (!bits_equal(a.detection_time, b.detection_time)) return false;
  if (a.diverged != b.diverged || a.divergence_events != b.divergence_events) return false;
  if (a.steps != b.steps || a.table_builds != b.table_builds) return false;
  if (!bits_equal(a.max_abs_u, b.max_abs_u)) return false;
  if (!eq_vec(a.theta_trace, b.theta_trace)) return false;
  if (a.probe.samples != b.probe.samples || !bits_equal(a.probe.smoothed_rmse, b.probe.smoothed_rmse) ||
      !bits_equal(a.probe.filtered_rmse, b.probe.filtered_rmse)) {
    return false;
  }
  if (a.trace.size() != b.trace.size()) return false;
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    const auto& x = a.trace[i];
    const auto& y = b.trace[i];
    const double xs[] = {x.t, x.rho, x.lambda, x.gamma_E, x.a_E, x.gamma_P, x.a_P, x.xi_dot,
                         x.a_E_n, x.rho_hat, x.lambda_hat, x.xi_dot_hat, x.a_E_n_hat,
                         x.t_go_hat, x.p_post_switch, x.theta_star, x.delta1, x.delta2,
                         x.z_bar, x.u};
    const double ys[] = {y.t, y.rho, y.lambda, y.gamma_E, y.a_E, y.gamma_P, y.a_P, y.xi_dot,
                         y.a_E_n, y.rho_hat, y.lambda_hat, y.xi_dot_hat, y.a_E_n_hat,
                         y.t_go_hat, y.p_post_switch, y.theta_star, y.delta1, y.delta2,
                         y.z_bar, y.u};
    for (std::size_t j = 0; j < std::size(xs); ++j) {
      if (!bits_equal(xs[j], ys[j])) return false;
    }
    if (x.theta_source != y.theta_source || x.diverged != y.diverged) return false;
  }
  return true;
}

}  // namespace intercept
