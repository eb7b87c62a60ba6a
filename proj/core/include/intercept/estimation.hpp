#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "intercept/dynamics.hpp"
#include "intercept/rng.hpp"

namespace intercept::estimation {

// Augmented per-particle state; theta is the sojourn time.
struct ParticleState {
  double rho = 0.0;
  double lambda = 0.0;
  double gamma_E = 0.0;
  double a_E = 0.0;
  double theta = 0.0;
};

struct Particle {
  ParticleState x;
  int mode = 0;
  double w = 0.0;
};

// Mode transition probabilities, optionally depending on the sojourn time of
// the source mode.
class TransitionModel {
 public:
  using Fn = std::function<double(int from, int to, double theta)>;

  // Symmetric M-mode chain: stay with 1 - p_switch, spread p_switch evenly.
  static TransitionModel constant(int modes, double p_switch);
  static TransitionModel from_matrix(int modes, std::vector<double> row_major);
  // fn must return a row-stochastic matrix for every theta.
  static TransitionModel sojourn_dependent(int modes, Fn fn);

  int modes() const { return modes_; }
  double prob(int from, int to, double theta) const;
  bool depends_on_theta() const { return static_cast<bool>(fn_); }

 private:
  int modes_ = 0;
  std::vector<double> matrix_;
  Fn fn_;
};

enum class LikelihoodKind { gaussian, laplace };

struct FilterConfig {
  int particles_per_mode = 2000;
  // Normalized evader command assumed by each mode.
  std::vector<double> mode_commands{-1.0, 1.0};
  double sigma_gamma_E = 3e-4;  // rad per step
  double sigma_a_E = 1.0;       // m/s^2 per step
  double sigma_lambda = 0.5e-3;
  LikelihoodKind likelihood = LikelihoodKind::gaussian;
  // Initial sojourn-time ranges per mode, seconds.
  std::vector<std::pair<double, double>> theta_init{{2.9, 3.1}, {0.0, 0.2}};
  // Log-likelihood below which every weight is considered to have underflowed.
  double divergence_loglik = -700.0;

  int modes() const { return static_cast<int>(mode_commands.size()); }
  int total() const { return particles_per_mode * modes(); }
  void validate() const;
};

// Radar estimate of (rho_R, lambda_R, gamma_E, a_E) with covariance, and the
// radar position relative to the pursuer.
struct RadarEstimate {
  std::array<double, 4> mean{};
  std::array<double, 16> cov{};  // row-major
  double dX = 0.0;
  double dY = 0.0;

  static std::array<double, 16> default_covariance();
  // Radar estimate whose mean is the true state seen from a radar at (dX, dY)
  // relative to the pursuer.
  static RadarEstimate from_truth(const dynamics::EngagementState& s, double dX, double dY,
                                  const std::array<double, 16>& cov);
};

// Maps a radar polar fix to pursuer-relative (rho, lambda).
std::pair<double, double> radar_to_pursuer(double rho_R, double lambda_R, double dX, double dY);

struct ParticleEnsemble {
  int modes = 0;
  int per_mode = 0;
  double t = 0.0;
  // Mode blocks: particles [j*S, (j+1)*S) belong to mode j.
  std::vector<ParticleState> x;
  std::vector<int> mode;
  std::vector<double> w;

  std::size_t size() const { return x.size(); }
};

ParticleEnsemble initialize(const RadarEstimate& radar, const FilterConfig& cfg, Rng& rng,
                            double t0 = 0.0);

std::vector<double> modal_probabilities(const ParticleEnsemble& e);
double effective_sample_size(std::span<const double> w);

// n indices drawn by systematic resampling with offset u0 in [0, 1). Weights
// need not be normalized.
std::vector<int> systematic_resample(std::span<const double> weights, std::size_t n, double u0);
void systematic_resample_into(std::span<const double> weights, double u0, std::span<int> out);

// Weighted sums in index order; shared by the filter and the smoother so that
// lag-0 smoothing reproduces the filter output bit for bit.
ParticleState weighted_average(std::span<const ParticleState> x, std::span<const double> w);
template <class F>
double weighted_mean(std::span<const ParticleState> x, std::span<const double> w, F&& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * f(x[i], i);
  return acc;
}

// Known pursuer own-state over one measurement interval: start, midpoint, end.
struct PursuerTrack {
  std::array<double, 3> gamma_P{};
  std::array<double, 3> a_P{};
};

struct FilterOutput {
  ParticleState mean;
  std::vector<double> modal;
  double ess = 0.0;
  bool diverged = false;
};

class Immpf {
 public:
  Immpf(FilterConfig cfg, TransitionModel tpm, dynamics::VehicleParams vehicle,
        std::uint64_t seed);

  FilterOutput initialize(const RadarEstimate& radar, double t0 = 0.0);
  // Adopt an existing ensemble (tests and degenerate set-ups).
  FilterOutput reset(ParticleEnsemble e);
  // One interaction/resampling, sojourn, prediction and update cycle.
  FilterOutput step(const dynamics::Measurement& z, const PursuerTrack& pursuer);

  const ParticleEnsemble& ensemble() const { return ens_; }
  // Ancestor (index into the previous ensemble) of every current particle.
  std::span<const int> ancestors() const { return ancestors_; }
  const FilterConfig& config() const { return cfg_; }
  int divergence_events() const { return divergence_events_; }

  // Propagate one particle over dt with a mode command and pursuer track.
  static ParticleState propagate(const ParticleState& x, double v_cmd,
                                 const PursuerTrack& pursuer,
                                 const dynamics::VehicleParams& vehicle, double dt);

 private:
  FilterOutput summarize(bool diverged) const;

  FilterConfig cfg_;
  TransitionModel tpm_;
  dynamics::VehicleParams vehicle_;
  Rng rng_;
  std::unique_ptr<dynamics::NoiseLaw> noise_;
  ParticleEnsemble ens_;
  ParticleEnsemble scratch_;
  std::vector<int> ancestors_;
  std::vector<double> q_;
  std::vector<double> loglik_;
  int divergence_events_ = 0;
};

}  // namespace intercept::estimation
