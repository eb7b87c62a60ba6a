#include "intercept/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

namespace intercept::game {

GameParams GameParams::from_vehicle(const dynamics::VehicleParams& v, double k) {
  GameParams p;
  p.mu = v.mu();
  p.epsilon = v.epsilon();
  p.tau_P = v.tau_P;
  p.tau_E = v.tau_E;
  p.a_E_max = v.a_E_max;
  p.k = k;
  return p;
}

void GameParams::validate() const {
  if (!(mu > 1.0)) throw ConfigError("mu must exceed 1");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(tau_P > 0.0) || !(tau_E > 0.0)) throw ConfigError("time constants must be positive");
  if (!(a_E_max > 0.0)) throw ConfigError("a_E_max must be positive");
  if (!(k > 0.0 && k <= 1.0)) throw ConfigError("k must lie in (0, 1]");
}

double psi(double tau) {
  if (std::abs(tau) < 0.1) {
    // tau^2/2 - tau^3/6 + ... ; 14 terms is far below double precision at 0.1.
    double term = tau * tau / 2.0;
    double sum = 0.0;
    for (int n = 2; n < 16; ++n) {
      sum += term;
      term *= -tau / (n + 1);
    }
    return sum;
  }
  return std::expm1(-tau) + tau;
}

DelayModel DelayModel::none() { return DelayModel{0.0, 0.0, 0.0, 0.0, 1.0 / 3.0}; }

DelayModel DelayModel::constant(double d1, double d2) {
  return DelayModel{d1, d2, 0.0, 0.0, 1.0 / 3.0};
}

DelayModel DelayModel::analytic(double a, double b1, double b2, double omega) {
  return DelayModel{a, a, b1, b2, omega};
}

DelayModel DelayModel::online(double b_seconds, double C, double f, double tau_P) {
  const double omega = 1.0 / 3.0;
  const double a2 = (1.0 / f) / tau_P;
  const double b2 = b_seconds * std::pow(tau_P, omega - 1.0);
  return DelayModel{C * a2, a2, C * b2, b2, omega};
}

DelaySample DelayModel::at(double tau) const {
  DelaySample s;
  if (tau > 0.0) {
    const double tw = std::pow(tau, omega);
    s.d1 = a1 + b1 * tw;
    s.d2 = a2 + b2 * tw;
    s.tg1 = b1 * omega * tw;
    s.tg2 = b2 * omega * tw;
    s.g1 = s.tg1 / tau;
    s.g2 = s.tg2 / tau;
  } else {
    s.d1 = a1;
    s.d2 = a2;
    // Slopes are unbounded at 0 when b > 0; only tau*gamma enters at tau = 0.
    s.g1 = b1 > 0.0 ? HUGE_VAL : 0.0;
    s.g2 = b2 > 0.0 ? HUGE_VAL : 0.0;
  }
  return s;
}

void DelayModel::validate() const {
  if (a1 < 0.0 || a2 < 0.0 || b1 < 0.0 || b2 < 0.0) {
    throw ConfigError("delay coefficients must be non-negative");
  }
  if (!(omega > 0.0 && omega <= 1.0)) throw ConfigError("omega must lie in (0, 1]");
  if (a1 > a2 || b1 > b2) throw ConfigError("Delta_1 must not exceed Delta_2");
}

double a_func(double tau, const DelayModel& delays, const GameParams& p) {
  const DelaySample d = delays.at(tau);
  const double eps = p.epsilon;
  const double e2 = std::exp(-d.d2 / eps);
  // gamma2 * expm1(-tau/eps) -> 0 as tau -> 0 even though gamma2 diverges.
  const double g2em = tau > 0.0 ? d.g2 * std::expm1(-tau / eps) : 0.0;
  // Regrouped so that every term vanishes or reduces exactly when the delays
  // vanish; the delay-free value is eps Psi(tau/eps) with no cancellation.
  return d.d1 + d.tg1 - tau * std::expm1(-d.d2 / eps) + eps * e2 * psi(tau / eps) -
         eps * e2 * std::expm1(d.d1 / eps) + eps * e2 * g2em +
         std::exp((d.d1 - d.d2) / eps) * (d.tg2 - d.tg1);
}

double r_func(double tau, const DelayModel& delays, const GameParams& p) {
  return p.mu * psi(tau) - a_func(tau, delays, p);
}

double r_dgl1(double tau, const GameParams& p) {
  return p.mu * psi(tau) - p.epsilon * psi(tau / p.epsilon);
}

namespace {

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

SingularOnset find_tau_s(const DelayModel& delays, const GameParams& p, double tau_max,
                         int grid) {
  if (!(tau_max > 0.0) || grid < 2) throw std::invalid_argument("find_tau_s: bad grid");
  auto R = [&](double t) { return r_func(t, delays, p); };

  SingularOnset out;
  const double h = tau_max / grid;
  int prev_sign = 0;
  double prev_tau = 0.0;
  bool any_positive = false;
  for (int j = 0; j <= grid; ++j) {
    const double t = j * h;
    const int s = sgn(R(t));
    if (s > 0) any_positive = true;
    if (s == 0) continue;
    if (prev_sign != 0 && s != prev_sign) {
      out.crossings.push_back({prev_tau, t, s > 0});
    }
    if (prev_sign == 0 && s > 0) out.starts_at_zero = true;
    prev_sign = s;
    prev_tau = t;
  }
  if (!any_positive) {
    throw NoRootError("R(tau) has no positive value on [0, " + std::to_string(tau_max) + "]");
  }
  out.sign_changes = static_cast<int>(out.crossings.size());
  if (out.starts_at_zero) {
    out.tau_s = 0.0;
    return out;
  }
  const Crossing& c = out.crossings.front();
  auto tol = [](double a, double b) {
    return std::abs(b - a) <= 1e-10 * std::max({std::abs(a), std::abs(b), 1e-6});
  };
  const auto [lo, hi] = boost::math::tools::bisect(R, c.lo, c.hi, tol);
  out.tau_s = 0.5 * (lo + hi);
  return out;
}

double singular_boundary(double tau, double tau_s, const DelayModel& delays, const GameParams& p) {
  if (tau <= tau_s) return 0.0;
  auto R = [&](double t) { return r_func(t, delays, p); };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(R, tau_s, tau, 20, 1e-10);
}

double guaranteed_miss(double tau_s, const DelayModel& delays, const GameParams& p) {
  if (tau_s <= 0.0) return 0.0;
  auto negR = [&](double t) { return -r_func(t, delays, p); };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(negR, 0.0, tau_s, 20,
                                                                        1e-10);
}

}  // namespace intercept::game
