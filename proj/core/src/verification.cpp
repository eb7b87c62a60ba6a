#include "intercept/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "intercept/rng.hpp"
#include "intercept/sweep.hpp"

namespace intercept::verify {

using game::DelayModel;
using game::GameParams;
using game::psi;

PiecewiseTrajectory::PiecewiseTrajectory(State x0, std::vector<Piece> pieces, double horizon,
                                         const GameParams& p)
    : pieces_(std::move(pieces)), horizon_(horizon), p_(p) {
  if (pieces_.empty() || pieces_.front().t0 != 0.0) {
    throw std::invalid_argument("PiecewiseTrajectory: first piece must start at 0");
  }
  starts_.push_back(x0);
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    const double h = pieces_[i + 1].t0 - pieces_[i].t0;
    if (!(h > 0.0)) throw std::invalid_argument("PiecewiseTrajectory: pieces must be increasing");
    starts_.push_back(propagate(starts_.back(), pieces_[i].u, pieces_[i].v, h));
  }
}

PiecewiseTrajectory::State PiecewiseTrajectory::propagate(const State& s, double u, double v,
                                                          double h) const {
  const double eps = p_.epsilon;
  const double mu = p_.mu;
  const double e3 = std::exp(-h);
  const double e4 = std::exp(-h / eps);
  State y;
  y.x3 = u + (s.x3 - u) * e3;
  y.x4 = v + (s.x4 - v) * e4;
  const double i3 = u * h + (s.x3 - u) * (1.0 - e3);
  const double i4 = v * h + (s.x4 - v) * eps * (1.0 - e4);
  // int_0^h (h - s) x(s) ds for each first-order lag.
  const double j3 = u * h * h / 2.0 + (s.x3 - u) * psi(h);
  const double j4 = v * h * h / 2.0 + (s.x4 - v) * eps * eps * psi(h / eps);
  y.x2 = s.x2 + i4 - mu * i3;
  y.x1 = s.x1 + s.x2 * h + j4 - mu * j3;
  y.int_x3 = s.int_x3 + i3;
  return y;
}

std::size_t PiecewiseTrajectory::piece(double t) const {
  const auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                                   [](double x, const Piece& p) { return x < p.t0; });
  return it == pieces_.begin() ? 0 : static_cast<std::size_t>(it - pieces_.begin()) - 1;
}

PiecewiseTrajectory::State PiecewiseTrajectory::at(double t) const {
  if (t < 0.0 || t > horizon_) throw std::out_of_range("PiecewiseTrajectory::at");
  const std::size_t i = piece(t);
  return propagate(starts_[i], pieces_[i].u, pieces_[i].v, t - pieces_[i].t0);
}

double PiecewiseTrajectory::u_at(double t) const { return pieces_[piece(t)].u; }
double PiecewiseTrajectory::v_at(double t) const { return pieces_[piece(t)].v; }

double PiecewiseTrajectory::int_v(double ta, double tb) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const double lo = std::max(ta, pieces_[i].t0);
    const double hi = std::min(tb, i + 1 < pieces_.size() ? pieces_[i + 1].t0 : horizon_);
    if (hi > lo) sum += pieces_[i].v * (hi - lo);
  }
  return sum;
}

double PiecewiseTrajectory::int_v_exp(double ta, double tb, double t_ref) const {
  const double eps = p_.epsilon;
  double sum = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const double lo = std::max(ta, pieces_[i].t0);
    const double hi = std::min(tb, i + 1 < pieces_.size() ? pieces_[i + 1].t0 : horizon_);
    if (hi > lo) {
      sum += pieces_[i].v * eps * (std::exp((hi - t_ref) / eps) - std::exp((lo - t_ref) / eps));
    }
  }
  return sum;
}

namespace {

struct Worst {
  double err = 0.0;
  std::string where;
  void update(double e, const std::string& w) {
    if (!(e <= err)) {  // also catches NaN
      err = std::isnan(e) ? INFINITY : e;
      where = w;
    }
  }
};

double rel(double got, double want, double scale) {
  const double d = std::abs(got - want);
  const double s = std::max(std::abs(want), scale);
  return s > 0.0 ? d / s : d;
}

DelayModel random_model(Rng& rng) {
  std::uniform_int_distribution<int> ia(1, 10), ib(1, 10), ifr(0, 8), iw(1, 11);
  const double a = 0.01 * ia(rng);
  const double b2 = 0.06 * ib(rng);
  const double b1 = 0.125 * ifr(rng) * b2;
  return DelayModel::analytic(a, b1, b2, iw(rng) / 12.0);
}

GameParams random_params(Rng& rng) {
  std::uniform_real_distribution<double> mu(1.1, 3.0), eps(0.2, 2.0);
  GameParams p;
  p.mu = mu(rng);
  p.epsilon = eps(rng);
  return p;
}

}  // namespace

SuiteResult reductions(std::uint64_t seed, int samples) {
  Rng rng(derive_seed(seed, 101));
  std::uniform_real_distribution<double> U(-1.0, 1.0), T(0.0, 10.0), D(0.0, 0.5);
  Worst w;
  long checks = 0;
  for (int n = 0; n < samples; ++n) {
    const GameParams p = random_params(rng);
    const double eps = p.epsilon;
    // Mix a few very short times-to-go in; that is where cancellation bites.
    const double tau = n % 10 == 0 ? std::pow(10.0, -6.0 + 5.0 * (U(rng) + 1.0) / 2.0) : T(rng);
    const double x1 = U(rng), x2 = U(rng), x3 = U(rng), x4 = U(rng);
    std::ostringstream at;
    at << "tau=" << tau << " mu=" << p.mu << " eps=" << eps;

    // A with no delays.
    const double a0 = game::a_func(tau, DelayModel::none(), p);
    const double a_ref = eps * psi(tau / eps);
    w.update(rel(a0, a_ref, 0.0), "A(no delay) " + at.str());

    // Normalized ZEM with no delays vs the delay-free form.
    const double z_ref = x1 + tau * x2 - p.mu * psi(tau) * x3 + eps * eps * psi(tau / eps) * x4;
    const double scale = std::abs(x1) + std::abs(tau * x2) + std::abs(p.mu * psi(tau) * x3) +
                         std::abs(eps * eps * psi(tau / eps) * x4);
    const double z0 = game::zem_cc_normalized(x1, x2, x3, 0.0, x4, tau, 0.0, 0.0, p);
    w.update(rel(z0, z_ref, scale), "z_cc(no delay) " + at.str());

    // Dimensional ZEM, same reduction.
    GameParams dp = p;
    dp.tau_P = 0.2;
    dp.tau_E = 0.2 * eps;
    dp.a_E_max = 196.133;
    const std::vector<double> hist{x3, x3};
    game::GuidanceInputs in;
    in.x1 = 40.0 * x1;
    in.x2_delayed = 400.0 * x2;
    in.x3 = 400.0 * x3;
    in.x3_history = hist;
    in.x4_delayed = 200.0 * x4;
    in.t_go = tau * dp.tau_P;
    const double zd = game::zem_dglcc(in, 0.0, 0.0, dp).z;
    const double zd_ref = game::zem_dgl1(in, dp).z;
    const double dscale = std::abs(in.x1) + std::abs(in.t_go * in.x2_delayed) +
                          std::abs(dp.tau_P * dp.tau_P * psi(in.t_go / dp.tau_P) * in.x3) +
                          std::abs(dp.tau_E * dp.tau_E * psi(in.t_go / dp.tau_E) * in.x4_delayed);
    w.update(rel(zd, zd_ref, dscale), "dimensional z(no delay) " + at.str());

    // Constant delays: the time-varying forms with b1 = b2 = 0 against the
    // constant-delay closed forms written out directly.
    double d1 = D(rng);
    double d2 = D(rng);
    if (d1 > d2) std::swap(d1, d2);
    const DelayModel cm{d1, d2, 0.0, 0.0, 1.0 / 3.0};
    const double ac = game::a_func(tau, cm, p);
    const double t1 = d1 + tau;
    const double t2 = eps * std::exp(-(tau + d2) / eps);
    const double t3 = -eps * std::exp((d1 - d2) / eps);
    w.update(rel(ac, t1 + t2 + t3, std::abs(t1) + std::abs(t2) + std::abs(t3)),
             "A(constant delays) " + at.str());

    const double I = U(rng) * d1;
    const double c4 = eps * std::exp(-d2 / eps) *
                      (tau * std::exp(d1 / eps) + eps * std::exp(-tau / eps) - eps);
    const double zc_terms[] = {x1, tau * x2, -p.mu * psi(tau) * x3, -p.mu * tau * I, c4 * x4};
    double zc_ref = 0.0;
    double zc_scale = 0.0;
    for (double v : zc_terms) {
      zc_ref += v;
      zc_scale += std::abs(v);
    }
    const double zc = game::zem_cc_normalized(x1, x2, x3, I, x4, tau, d1, d2, p);
    w.update(rel(zc, zc_ref, zc_scale), "z_cc(constant delays) " + at.str());

    const auto s = cm.at(tau);
    w.update(std::abs(s.g1) + std::abs(s.g2) + std::abs(s.tg1) + std::abs(s.tg2),
             "constant-delay slopes " + at.str());
    checks += 6;
  }
  SuiteResult r;
  r.name = "reductions";
  r.metric = w.err;
  r.threshold = 1e-10;
  r.checks = checks;
  r.pass = w.err <= r.threshold;
  r.detail = "worst relative error at " + w.where;
  return r;
}

SuiteResult derivative(std::uint64_t seed, int trajectories, double dtau) {
  Rng rng(derive_seed(seed, 202));
  std::uniform_real_distribution<double> U(-1.0, 1.0), U01(0.0, 1.0);
  Worst w;
  long checks = 0;
  for (int n = 0; n < trajectories; ++n) {
    const GameParams p = random_params(rng);
    const DelayModel m = random_model(rng);
    const double T = 4.0 + 4.0 * U01(rng);
    // Piecewise-constant controls: mostly bang-bang, some interior values.
    std::vector<PiecewiseTrajectory::Piece> pieces;
    double t0 = 0.0;
    while (t0 < T) {
      auto pick = [&] { return U01(rng) < 0.7 ? (U(rng) < 0 ? -1.0 : 1.0) : U(rng); };
      pieces.push_back({t0, pick(), pick()});
      t0 += 0.3 + 1.2 * U01(rng);
    }
    const PiecewiseTrajectory traj({U(rng), U(rng), U(rng), U(rng), 0.0}, pieces, T, p);

    auto zbar = [&](double tau) {
      const auto d = m.at(tau);
      const double t = T - tau;
      const auto now = traj.at(t);
      const auto past1 = traj.at(t - d.d1);
      const auto past2 = traj.at(t - d.d2);
      return game::zem_cc_normalized(now.x1, past1.x2, now.x3, now.int_x3 - past1.int_x3,
                                     past2.x4, tau, d.d1, d.d2, p);
    };
    auto near_break = [&](double t) {
      for (const auto& pc : pieces) {
        if (std::abs(t - pc.t0) < 1e-3) return true;
      }
      return false;
    };

    int taken = 0;
    for (int attempt = 0; taken < 50 && attempt < 5000; ++attempt) {
      const double tau = 0.1 + (T - 0.1) * U01(rng);
      const auto d_hi = m.at(tau + dtau);
      if (tau + dtau + d_hi.d2 > T - 1e-3) continue;
      bool bad = false;
      for (double tt : {tau - dtau, tau, tau + dtau}) {
        const auto d = m.at(tt);
        for (double back : {0.0, d.d1, d.d2}) bad = bad || near_break(T - tt - back);
      }
      if (bad) continue;
      const double fd = (zbar(tau + dtau) - zbar(tau - dtau)) / (2.0 * dtau);

      const auto d = m.at(tau);
      const double t = T - tau;
      game::EvaderControlIntegrals vi;
      vi.plain_d1 = traj.int_v(t - d.d1, t);
      vi.exp_d2 = traj.int_v_exp(t - d.d2, t, t);
      vi.exp_d1d2 = traj.int_v_exp(t - d.d2, t - d.d1, t);
      vi.v_at_d2 = traj.v_at(t - d.d2);
      const double an = game::dzcc_dtau(tau, traj.u_at(t), vi, d, p);
      // Errors are measured against the analytic value, floored at a tenth of
      // the size of its constituent terms so near-zero crossings stay meaningful.
      const double scale = 0.1 * (std::abs(p.mu * psi(tau)) + std::abs(vi.plain_d1) +
                                  std::abs(vi.exp_d2) + std::abs(vi.exp_d1d2) +
                                  std::abs(vi.v_at_d2));
      std::ostringstream at;
      at << "trajectory " << n << " tau=" << tau;
      w.update(rel(fd, an, scale), at.str());
      ++taken;
      ++checks;
    }
  }
  SuiteResult r;
  r.name = "derivative";
  r.metric = w.err;
  r.threshold = 1e-4;
  r.checks = checks;
  r.pass = w.err < r.threshold && checks > 0;
  r.detail = "worst relative error at " + w.where;
  return r;
}

SuiteResult functional_bound(std::uint64_t seed, int samples) {
  Rng rng(derive_seed(seed, 303));
  std::uniform_real_distribution<double> U(-1.0, 1.0), U01(0.0, 1.0);
  Worst bound;
  Worst extremal;
  double min_A = INFINITY;
  long checks = 0;
  constexpr int kCells = 64;
  for (int n = 0; n < samples; ++n) {
    const GameParams p = random_params(rng);
    const DelayModel m = random_model(rng);
    const double eps = p.epsilon;
    const double tau = 1e-3 + 15.0 * U01(rng);
    const auto d = m.at(tau);
    const double A = game::a_func(tau, m, p);

    // Discretize v on [tau, tau + d2] (time-to-go) into cells.
    std::vector<double> v(kCells);
    const bool bang = n % 2 == 0;
    for (auto& x : v) x = bang ? (U(rng) < 0 ? -1.0 : 1.0) : U(rng);
    auto integrals = [&](const std::vector<double>& vals) {
      game::EvaderControlIntegrals I;
      const double h = d.d2 / kCells;
      for (int c = 0; c < kCells; ++c) {
        const double s0 = tau + c * h;
        const double s1 = s0 + h;
        const double w_exp = eps * (std::exp((tau - s0) / eps) - std::exp((tau - s1) / eps));
        I.exp_d2 += vals[c] * w_exp;
        const double lo = std::max(s0, tau + d.d1);
        if (s1 > lo) {
          I.exp_d1d2 += vals[c] * eps * (std::exp((tau - lo) / eps) - std::exp((tau - s1) / eps));
        }
        const double hi = std::min(s1, tau + d.d1);
        if (hi > s0) I.plain_d1 += vals[c] * (hi - s0);
      }
      I.v_at_d2 = vals.back();
      return I;
    };
    const double F = game::dzcc_dtau(tau, 0.0, integrals(v), d, p);
    const double Fm = game::dzcc_dtau(tau, 0.0, integrals(std::vector<double>(kCells, -1.0)), d, p);
    const double Fp = game::dzcc_dtau(tau, 0.0, integrals(std::vector<double>(kCells, 1.0)), d, p);
    std::ostringstream at;
    at << "tau=" << tau << " mu=" << p.mu << " eps=" << eps << " a=" << m.a2 << " b1=" << m.b1
       << " b2=" << m.b2 << " omega=" << m.omega;
    // Excess of |F| over A(1 + 1e-6), relative to A; <= 0 means within bound.
    bound.update(std::max(0.0, (std::abs(F) - A * (1.0 + 1e-6) - 1e-12) / A), at.str());
    extremal.update(std::max(rel(Fm, A, 0.0), rel(Fp, -A, 0.0)), at.str());

    for (int j = 0; j <= 2000; ++j) {
      const double a = game::a_func(0.01 * j, m, p);
      min_A = std::min(min_A, a);
    }
    checks += 3;
  }
  SuiteResult r;
  r.name = "functional-bound";
  r.metric = std::max(bound.err, extremal.err);
  r.threshold = 1e-6;
  r.checks = checks;
  r.pass = bound.err == 0.0 && extremal.err <= 1e-6 && min_A > 0.0;
  std::ostringstream os;
  os << "bound excess " << bound.err << " (" << bound.where << "); extremal error "
     << extremal.err << " (" << extremal.where << "); min A on grid " << min_A;
  r.detail = os.str();
  return r;
}

SuiteResult single_root(std::uint64_t seed, long samples, int jobs) {
  SweepSpec spec;
  spec.samples = samples;
  spec.seed = seed;
  spec.jobs = jobs;
  const auto rep = sweep_single_root(spec);
  SuiteResult r;
  r.name = "single-root";
  r.metric = static_cast<double>(rep.violations);
  r.threshold = 0.0;
  r.checks = rep.cases;
  r.pass = rep.violations == 0;
  std::ostringstream os;
  os << rep.cases << " cases, " << rep.single_root << " single root, " << rep.violations
     << " multi-root, " << rep.no_root << " without a root before tau_max";
  r.detail = os.str();
  return r;
}

std::vector<SuiteResult> all(std::uint64_t seed, int jobs) {
  return {reductions(seed), derivative(seed), functional_bound(seed),
          single_root(seed, 10000, jobs)};
}

}  // namespace intercept::verify
