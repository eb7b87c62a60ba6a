#include "intercept/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace intercept::estimation {

using dynamics::VehicleParams;

TransitionModel TransitionModel::constant(int modes, double p_switch) {
  if (modes < 1) throw ConfigError("need at least one mode");
  if (!(p_switch >= 0.0 && p_switch <= 1.0)) throw ConfigError("switch probability out of range");
  std::vector<double> m(static_cast<std::size_t>(modes * modes));
  for (int i = 0; i < modes; ++i) {
    for (int j = 0; j < modes; ++j) {
      m[i * modes + j] = modes == 1 ? 1.0 : (i == j ? 1.0 - p_switch : p_switch / (modes - 1));
    }
  }
  return from_matrix(modes, std::move(m));
}

TransitionModel TransitionModel::from_matrix(int modes, std::vector<double> row_major) {
  if (modes < 1 || row_major.size() != static_cast<std::size_t>(modes * modes)) {
    throw ConfigError("transition matrix has the wrong size");
  }
  for (int i = 0; i < modes; ++i) {
    double row = 0.0;
    for (int j = 0; j < modes; ++j) {
      const double v = row_major[i * modes + j];
      if (!(v >= 0.0)) throw ConfigError("transition probabilities must be non-negative");
      row += v;
    }
    if (std::abs(row - 1.0) > 1e-12) throw ConfigError("transition matrix rows must sum to 1");
  }
  TransitionModel t;
  t.modes_ = modes;
  t.matrix_ = std::move(row_major);
  return t;
}

TransitionModel TransitionModel::sojourn_dependent(int modes, Fn fn) {
  if (modes < 1 || !fn) throw ConfigError("invalid sojourn-dependent transition model");
  TransitionModel t;
  t.modes_ = modes;
  t.fn_ = std::move(fn);
  return t;
}

double TransitionModel::prob(int from, int to, double theta) const {
  if (fn_) return fn_(from, to, theta);
  return matrix_[from * modes_ + to];
}

void FilterConfig::validate() const {
  if (particles_per_mode < 1) throw ConfigError("particles_per_mode must be positive");
  if (mode_commands.empty()) throw ConfigError("need at least one mode");
  if (theta_init.size() != mode_commands.size()) {
    throw ConfigError("theta_init needs one range per mode");
  }
  if (!(sigma_lambda > 0.0)) throw ConfigError("likelihood sigma must be positive");
  if (sigma_gamma_E < 0.0 || sigma_a_E < 0.0) throw ConfigError("process noise must be >= 0");
}

std::array<double, 16> RadarEstimate::default_covariance() {
  const double deg = std::numbers::pi / 180.0;
  std::array<double, 16> c{};
  c[0] = 50.0 * 50.0;
  c[5] = (1.0 * deg) * (1.0 * deg);
  c[10] = (3.0 * deg) * (3.0 * deg);
  c[15] = 10.0 * 10.0;
  return c;
}

RadarEstimate RadarEstimate::from_truth(const dynamics::EngagementState& s, double dX, double dY,
                                        const std::array<double, 16>& cov) {
  const double ex = s.rho * std::cos(s.lambda) - dX;
  const double ey = s.rho * std::sin(s.lambda) - dY;
  RadarEstimate r;
  r.mean = {std::hypot(ex, ey), std::atan2(ey, ex), s.gamma_E, s.a_E};
  r.cov = cov;
  r.dX = dX;
  r.dY = dY;
  return r;
}

std::pair<double, double> radar_to_pursuer(double rho_R, double lambda_R, double dX, double dY) {
  const double dR2 = dX * dX + dY * dY;
  const double rho = std::sqrt(rho_R * rho_R + dR2 +
                               2.0 * rho_R * (dX * std::cos(lambda_R) + dY * std::sin(lambda_R)));
  const double lambda = std::atan2(dY + rho_R * std::sin(lambda_R), dX + rho_R * std::cos(lambda_R));
  return {rho, lambda};
}

ParticleEnsemble initialize(const RadarEstimate& radar, const FilterConfig& cfg, Rng& rng,
                            double t0) {
  cfg.validate();
  Eigen::Matrix4d P;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) P(i, j) = radar.cov[i * 4 + j];
  }
  if (!P.isApprox(P.transpose(), 1e-12)) throw ConfigError("radar covariance is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(P);
  const Eigen::Vector4d ev = eig.eigenvalues();
  if (ev.minCoeff() < -1e-12 * std::max(1.0, ev.maxCoeff())) {
    throw ConfigError("radar covariance is not positive semi-definite");
  }
  const Eigen::Matrix4d L =
      eig.eigenvectors() * ev.cwiseMax(0.0).cwiseSqrt().asDiagonal();
  const Eigen::Vector4d mean(radar.mean[0], radar.mean[1], radar.mean[2], radar.mean[3]);

  ParticleEnsemble e;
  e.modes = cfg.modes();
  e.per_mode = cfg.particles_per_mode;
  e.t = t0;
  const auto N = static_cast<std::size_t>(cfg.total());
  e.x.resize(N);
  e.mode.resize(N);
  e.w.assign(N, 1.0 / static_cast<double>(N));
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int j = 0; j < e.modes; ++j) {
    std::uniform_real_distribution<double> theta(cfg.theta_init[j].first,
                                                 cfg.theta_init[j].second);
    for (int s = 0; s < e.per_mode; ++s) {
      const std::size_t n = static_cast<std::size_t>(j * e.per_mode + s);
      Eigen::Vector4d g;
      for (int c = 0; c < 4; ++c) g[c] = gauss(rng);
      const Eigen::Vector4d y = mean + L * g;
      const auto [rho, lambda] = radar_to_pursuer(y[0], y[1], radar.dX, radar.dY);
      e.x[n] = {rho, lambda, y[2], y[3], theta(rng)};
      e.mode[n] = j;
    }
  }
  return e;
}

std::vector<double> modal_probabilities(const ParticleEnsemble& e) {
  std::vector<double> p(static_cast<std::size_t>(e.modes), 0.0);
  for (std::size_t i = 0; i < e.size(); ++i) p[static_cast<std::size_t>(e.mode[i])] += e.w[i];
  return p;
}

double effective_sample_size(std::span<const double> w) {
  double s = 0.0;
  double s2 = 0.0;
  for (double v : w) {
    s += v;
    s2 += v * v;
  }
  return s2 > 0.0 ? s * s / s2 : 0.0;
}

void systematic_resample_into(std::span<const double> weights, double u0, std::span<int> out) {
  const std::size_t n = out.size();
  if (n == 0) return;
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("systematic_resample: zero total weight");
  const double step = total / static_cast<double>(n);
  double target = u0 * step;
  double cum = 0.0;
  std::size_t i = 0;
  const std::size_t last = weights.size() - 1;
  for (std::size_t k = 0; k < n; ++k) {
    while (i < last && cum + weights[i] <= target) {
      cum += weights[i];
      ++i;
    }
    out[k] = static_cast<int>(i);
    target += step;
  }
}

std::vector<int> systematic_resample(std::span<const double> weights, std::size_t n, double u0) {
  std::vector<int> out(n);
  systematic_resample_into(weights, u0, out);
  return out;
}

ParticleState weighted_average(std::span<const ParticleState> x, std::span<const double> w) {
  ParticleState m{0.0, 0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    m.rho += w[i] * x[i].rho;
    m.lambda += w[i] * x[i].lambda;
    m.gamma_E += w[i] * x[i].gamma_E;
    m.a_E += w[i] * x[i].a_E;
    m.theta += w[i] * x[i].theta;
  }
  return m;
}

namespace {

struct Rates {
  double rho, lambda, gamma_E, a_E;
};

Rates particle_rates(const ParticleState& x, double v_cmd, double gamma_P,
                     const VehicleParams& p) {
  const auto pv = dynamics::polar_velocity(x.lambda, x.gamma_E, gamma_P, p);
  return {pv.V_rho, pv.V_lambda / x.rho, x.a_E / p.V_E, (p.a_E_max * v_cmd - x.a_E) / p.tau_E};
}

ParticleState shift(const ParticleState& x, const Rates& k, double h) {
  ParticleState y = x;
  y.rho += h * k.rho;
  y.lambda += h * k.lambda;
  y.gamma_E += h * k.gamma_E;
  y.a_E += h * k.a_E;
  // A particle whose range estimate runs through zero near the end would make
  // the polar kinematics singular; hold it at a small positive range instead.
  y.rho = std::max(y.rho, 1.0);
  return y;
}

}  // namespace

ParticleState Immpf::propagate(const ParticleState& x, double v_cmd, const PursuerTrack& pt,
                               const VehicleParams& p, double dt) {
  const ParticleState x0 = shift(x, Rates{0, 0, 0, 0}, 0.0);
  const Rates k1 = particle_rates(x0, v_cmd, pt.gamma_P[0], p);
  const Rates k2 = particle_rates(shift(x0, k1, 0.5 * dt), v_cmd, pt.gamma_P[1], p);
  const Rates k3 = particle_rates(shift(x0, k2, 0.5 * dt), v_cmd, pt.gamma_P[1], p);
  const Rates k4 = particle_rates(shift(x0, k3, dt), v_cmd, pt.gamma_P[2], p);
  ParticleState y = x0;
  y.rho += dt / 6.0 * (k1.rho + 2 * k2.rho + 2 * k3.rho + k4.rho);
  y.lambda += dt / 6.0 * (k1.lambda + 2 * k2.lambda + 2 * k3.lambda + k4.lambda);
  y.gamma_E += dt / 6.0 * (k1.gamma_E + 2 * k2.gamma_E + 2 * k3.gamma_E + k4.gamma_E);
  y.a_E += dt / 6.0 * (k1.a_E + 2 * k2.a_E + 2 * k3.a_E + k4.a_E);
  y.rho = std::max(y.rho, 1.0);
  return y;
}

Immpf::Immpf(FilterConfig cfg, TransitionModel tpm, VehicleParams vehicle, std::uint64_t seed)
    : cfg_(std::move(cfg)), tpm_(std::move(tpm)), vehicle_(vehicle), rng_(seed) {
  cfg_.validate();
  if (tpm_.modes() != cfg_.modes()) throw ConfigError("transition model and mode count differ");
  if (cfg_.likelihood == LikelihoodKind::laplace) {
    noise_ = std::make_unique<dynamics::LaplaceNoise>(cfg_.sigma_lambda);
  } else {
    noise_ = std::make_unique<dynamics::GaussianNoise>(cfg_.sigma_lambda);
  }
}

FilterOutput Immpf::initialize(const RadarEstimate& radar, double t0) {
  return reset(estimation::initialize(radar, cfg_, rng_, t0));
}

FilterOutput Immpf::reset(ParticleEnsemble e) {
  if (e.modes != cfg_.modes() || e.size() != static_cast<std::size_t>(e.modes * e.per_mode)) {
    throw ConfigError("ensemble shape does not match the filter configuration");
  }
  ens_ = std::move(e);
  scratch_ = ens_;
  ancestors_.resize(ens_.size());
  std::iota(ancestors_.begin(), ancestors_.end(), 0);
  q_.assign(ens_.size(), 0.0);
  loglik_.assign(ens_.size(), 0.0);
  return summarize(false);
}

FilterOutput Immpf::step(const dynamics::Measurement& z, const PursuerTrack& pursuer) {
  if (ens_.x.empty()) throw std::logic_error("Immpf::step before initialize");
  const int M = ens_.modes;
  const int S = ens_.per_mode;
  const std::size_t N = ens_.size();
  const double dt = z.t_k - ens_.t;
  if (!(dt > 0.0)) throw std::invalid_argument("measurement time must advance");
  const double period = 1.0 / vehicle_.f;

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Interaction merged with resampling: each target mode draws S ancestors
  // from the whole ensemble weighted by w_i p(r_i -> j | theta_i).
  for (int j = 0; j < M; ++j) {
    double c = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      q_[i] = ens_.w[i] * tpm_.prob(ens_.mode[i], j, ens_.x[i].theta);
      c += q_[i];
    }
    const std::span<int> anc(ancestors_.data() + static_cast<std::size_t>(j * S),
                             static_cast<std::size_t>(S));
    systematic_resample_into(q_, unif(rng_), anc);
    const double wj = c / S;
    for (int s = 0; s < S; ++s) {
      const std::size_t n = static_cast<std::size_t>(j * S + s);
      const auto a = static_cast<std::size_t>(anc[static_cast<std::size_t>(s)]);
      ParticleState x = ens_.x[a];
      x.theta = ens_.mode[a] == j ? x.theta + period : period;
      scratch_.x[n] = x;
      scratch_.mode[n] = j;
      scratch_.w[n] = wj;
    }
  }

  // Prediction with mode-matched evader command plus process noise.
  for (std::size_t n = 0; n < N; ++n) {
    const double v = cfg_.mode_commands[static_cast<std::size_t>(scratch_.mode[n])];
    ParticleState y = propagate(scratch_.x[n], v, pursuer, vehicle_, dt);
    y.gamma_E += cfg_.sigma_gamma_E * gauss(rng_);
    y.a_E += cfg_.sigma_a_E * gauss(rng_);
    scratch_.x[n] = y;
  }

  // Bearing likelihood, normalized in the log domain.
  const double gP = pursuer.gamma_P[2];
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < N; ++n) {
    const double r = std::remainder(z.z - (gP - scratch_.x[n].lambda), 2.0 * std::numbers::pi);
    loglik_[n] = noise_->log_density(r);
    if (loglik_[n] > best) best = loglik_[n];
  }
  bool diverged = false;
  if (!(best > cfg_.divergence_loglik) || !std::isfinite(best)) {
    diverged = true;
    ++divergence_events_;
    std::fill(scratch_.w.begin(), scratch_.w.end(), 1.0 / static_cast<double>(N));
  } else {
    double total = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
      scratch_.w[n] *= std::exp(loglik_[n] - best);
      total += scratch_.w[n];
    }
    for (double& w : scratch_.w) w /= total;
  }
  scratch_.t = z.t_k;
  std::swap(ens_, scratch_);
  return summarize(diverged);
}

FilterOutput Immpf::summarize(bool diverged) const {
  FilterOutput out;
  out.mean = weighted_average(ens_.x, ens_.w);
  out.modal = modal_probabilities(ens_);
  out.ess = effective_sample_size(ens_.w);
  out.diverged = diverged;
  return out;
}

}  // namespace intercept::estimation
