#pragma once

#include <vector>

#include "intercept/estimation.hpp"

namespace intercept::fixtures {

// Two-mode ensemble whose mode-0 probability is 0.985 and whose mode-1
// sojourn histogram has 1% of its mass above 0.26 s and nothing above 0.28 s.
// Mode-0 particles carry long sojourn times, as before any detected switch.
inline estimation::ParticleEnsemble theta_histogram_ensemble() {
  std::vector<std::pair<double, double>> bins;  // (theta, complement weight)
  for (int k = 1; k <= 25; ++k) bins.emplace_back(0.01 * k, 0.0388);
  bins.emplace_back(0.26, 0.022);
  bins.emplace_back(0.27, 0.005);
  bins.emplace_back(0.28, 0.003);

  estimation::ParticleEnsemble e;
  e.modes = 2;
  e.per_mode = static_cast<int>(bins.size());
  const double p_dominant = 0.985;
  for (int s = 0; s < e.per_mode; ++s) {
    e.x.push_back({10000.0, 1.5, -1.5, -196.0, 3.0 + 0.01 * s});
    e.mode.push_back(0);
    e.w.push_back(p_dominant / e.per_mode);
  }
  for (const auto& [theta, w] : bins) {
    e.x.push_back({10000.0, 1.5, -1.5, 196.0, theta});
    e.mode.push_back(1);
    e.w.push_back((1.0 - p_dominant) * w);
  }
  return e;
}

}  // namespace intercept::fixtures
