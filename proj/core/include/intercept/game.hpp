#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "intercept/dynamics.hpp"
#include "intercept/error.hpp"

namespace intercept::game {

// Normalized game constants. Times tau_P, tau_E in seconds, a_E_max in m/s^2.
struct GameParams {
  double mu = 2.25;
  double epsilon = 1.0;
  double tau_P = 0.2;
  double tau_E = 0.2;
  double a_E_max = 20.0 * dynamics::kGravity;
  double k = 0.7;

  static GameParams from_vehicle(const dynamics::VehicleParams& v, double k = 0.7);
  double a_P_max() const { return mu * a_E_max; }
  // Length scale of the normalized ZEM.
  double zem_scale() const { return a_E_max * tau_P * tau_P; }
  void validate() const;
};

// exp(-tau) + tau - 1, accurate for small tau.
double psi(double tau);

// Delays and their slopes at one normalized time-to-go. The slopes blow up at
// tau = 0 when omega < 1, so tau*gamma is carried separately (it goes to 0).
struct DelaySample {
  double d1 = 0.0;
  double d2 = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  double tg1 = 0.0;
  double tg2 = 0.0;
};

// Delta_i(tau) = a_i + b_i tau^omega in normalized time.
struct DelayModel {
  double a1 = 0.0;
  double a2 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double omega = 1.0 / 3.0;

  static DelayModel none();
  static DelayModel constant(double d1, double d2);
  static DelayModel analytic(double a, double b1, double b2, double omega);
  // Delta_2(t_go) = 1/f + b t_go^(1/3) seconds, Delta_1 = C Delta_2, mapped
  // to normalized time.
  static DelayModel online(double b_seconds, double C, double f, double tau_P);

  DelaySample at(double tau) const;
  bool is_zero() const { return a1 == 0.0 && a2 == 0.0 && b1 == 0.0 && b2 == 0.0; }
  void validate() const;
};

double a_func(double tau, const DelayModel& delays, const GameParams& p);
double r_func(double tau, const DelayModel& delays, const GameParams& p);
// DGL1 game function mu Psi(tau) - eps Psi(tau/eps).
double r_dgl1(double tau, const GameParams& p);

struct Crossing {
  double lo = 0.0;
  double hi = 0.0;
  bool upward = true;
};

struct SingularOnset {
  double tau_s = 0.0;
  int sign_changes = 0;
  std::vector<Crossing> crossings;
  // True when R is already nonnegative at tau = 0 and positive after it
  // (the delay-free hit-to-kill case): the singular region starts at 0.
  bool starts_at_zero = false;
  bool single_root() const { return sign_changes <= 1; }
};

// Smallest positive root of R by bisection, plus a sign-change census on a
// uniform grid. Throws NoRootError when R never turns positive.
SingularOnset find_tau_s(const DelayModel& delays, const GameParams& p,
                         double tau_max = 20.0, int grid = 10000);

// Integral of R from tau_s to tau (adaptive quadrature), 0 below tau_s.
double singular_boundary(double tau, double tau_s, const DelayModel& delays,
                         const GameParams& p);
// Integral of -R over [0, tau_s].
double guaranteed_miss(double tau_s, const DelayModel& delays, const GameParams& p);

// Tabulated boundary of the singular region. Cumulative Gauss-Legendre panels
// with cubic Hermite interpolation (R is the exact derivative).
class BoundaryTable {
 public:
  BoundaryTable() = default;
  BoundaryTable(const DelayModel& delays, const GameParams& p, double tau_max = 25.0,
                double panel = 0.02);

  double tau_s() const { return onset_.tau_s; }
  const SingularOnset& onset() const { return onset_; }
  const DelayModel& delays() const { return delays_; }
  double boundary(double tau) const;
  bool empty() const { return nodes_.empty(); }
  void write_csv(std::ostream& os, double tau_hi, int points) const;

 private:
  DelayModel delays_;
  GameParams params_;
  SingularOnset onset_;
  double h_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> value_;
  std::vector<double> slope_;
};

// Trapezoidal integral of the most recent `span` seconds of a uniformly
// sampled signal (oldest first, newest = now). Throws HistoryError if the
// samples cover less than `span`.
double history_integral(std::span<const double> samples, double dt, double span);

struct GuidanceInputs {
  double x1 = 0.0;
  double x2_delayed = 0.0;
  double x3 = 0.0;
  std::span<const double> x3_history;  // oldest first, last entry is x3 now
  double x3_dt = 1e-3;
  double x4_delayed = 0.0;
  double t_go = 0.0;
};

struct ZemValue {
  double z = 0.0;      // m
  double z_bar = 0.0;  // z / (a_E_max tau_P^2)
};

ZemValue zem_dgl1(const GuidanceInputs& in, const GameParams& p);
// delta1, delta2 in seconds.
ZemValue zem_dglcc(const GuidanceInputs& in, double delta1, double delta2, const GameParams& p);

// Normalized center of the uncertainty set with all states already normalized.
double zem_cc_normalized(double x1, double x2_at_d1, double x3, double x3_integral,
                         double x4_at_d2, double tau, double d1, double d2,
                         const GameParams& p);

// Right-hand side of dz_cc/dtau for piecewise-smooth evader controls supplied
// through their integrals. Used by the property suites.
struct EvaderControlIntegrals {
  double plain_d1 = 0.0;  // int_tau^{tau+d1} v ds
  double exp_d2 = 0.0;    // int_tau^{tau+d2} exp((tau-s)/eps) v ds
  double exp_d1d2 = 0.0;  // int_{tau+d1}^{tau+d2} exp((tau-s)/eps) v ds
  double v_at_d2 = 0.0;   // v(tau + d2)
};
double dzcc_dtau(double tau, double u, const EvaderControlIntegrals& v,
                 const DelaySample& d, const GameParams& p);

// Chatter-free saddle law on the normalized ZEM.
double pursuer_command(double z_bar, double tau, const BoundaryTable& table, double k);

double command_tv_dglcc(const GuidanceInputs& in, double delta1, double delta2,
                        const BoundaryTable& table, const GameParams& p);
double command_dgl1(const GuidanceInputs& in, const BoundaryTable& table, const GameParams& p);
double command_dglc(const GuidanceInputs& in, double delta_t, const BoundaryTable& table,
                    const GameParams& p);

}  // namespace intercept::game
