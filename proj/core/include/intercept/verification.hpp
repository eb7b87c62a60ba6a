#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "intercept/game.hpp"

namespace intercept::verify {

struct SuiteResult {
  std::string name;
  bool pass = false;
  double metric = 0.0;     // worst observed error (or count)
  double threshold = 0.0;  // pass if metric <= threshold (or < for counts, see detail)
  long checks = 0;
  std::string detail;
};

// Zero delays collapse A to eps Psi(tau/eps) and the ZEM to its delay-free
// form; constant delays reproduce the constant-delay closed forms.
SuiteResult reductions(std::uint64_t seed, int samples = 1000);

// Central difference of the normalized ZEM along exact trajectories with
// piecewise-constant controls against the analytic derivative.
SuiteResult derivative(std::uint64_t seed, int trajectories = 10, double dtau = 1e-4);

// |F| <= A for admissible evader controls; v = -1 and v = +1 attain +A, -A.
SuiteResult functional_bound(std::uint64_t seed, int samples = 1000);

// Random subsample of the single-root grid.
SuiteResult single_root(std::uint64_t seed, long samples = 10000, int jobs = 1);

std::vector<SuiteResult> all(std::uint64_t seed, int jobs = 1);

// Exact solution of the normalized linear dynamics under piecewise-constant
// controls (forward time, unit pursuer time constant).
class PiecewiseTrajectory {
 public:
  struct Piece {
    double t0 = 0.0;
    double u = 0.0;
    double v = 0.0;
  };
  struct State {
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;
    double x4 = 0.0;
    double int_x3 = 0.0;  // integral of x3 from t = 0
  };

  // pieces sorted by t0, first at t0 = 0; the last extends to `horizon`.
  PiecewiseTrajectory(State x0, std::vector<Piece> pieces, double horizon,
                      const game::GameParams& p);
  State at(double t) const;
  double u_at(double t) const;
  double v_at(double t) const;
  double horizon() const { return horizon_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  // Exact integrals of v over [t_a, t_b], plain and weighted by exp(-(t_ref - t)/eps)
  // expressed in forward time (t_ref is the current instant).
  double int_v(double ta, double tb) const;
  double int_v_exp(double ta, double tb, double t_ref) const;

 private:
  State propagate(const State& s, double u, double v, double h) const;
  std::size_t piece(double t) const;

  std::vector<Piece> pieces_;
  std::vector<State> starts_;
  double horizon_;
  game::GameParams p_;
};

}  // namespace intercept::verify
