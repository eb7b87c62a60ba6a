#pragma once

#include <cstdint>
#include <vector>

namespace intercept {

struct SweepCase {
  double a = 0.0;
  double b2 = 0.0;
  double b1_fraction = 0.0;
  double omega = 0.0;
  double mu = 0.0;
  double epsilon = 0.0;
  int sign_changes = 0;
};

struct SweepSpec {
  // 0 sweeps the full grid; otherwise this many cases drawn uniformly (with
  // replacement) from it.
  long samples = 10000;
  std::uint64_t seed = 1;
  double tau_max = 20.0;
  int grid = 10000;
  int jobs = 1;
};

struct SweepReport {
  long cases = 0;
  long single_root = 0;
  long violations = 0;  // more than one sign change of R on (0, tau_max]
  long no_root = 0;     // R never turned positive before tau_max
  std::vector<SweepCase> multi_root;
};

// Grid axis sizes: a 10, b2 10, b1 fraction 9, omega 11, mu 11, epsilon 11.
long sweep_grid_size();
SweepCase sweep_grid_case(long index);

SweepReport sweep_single_root(const SweepSpec& spec);

}  // namespace intercept
