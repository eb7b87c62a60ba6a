#pragma once

#include <vector>

#include "intercept/game.hpp"
#include "intercept/scenario.hpp"

namespace intercept {

// Deterministic study for the delay ratio C = Delta_1 / Delta_2. The pursuer
// knows everything except xi_dot and a_E, which arrive delayed by the analytic
// detection-delay model; between t_sw + Delta_1 and t_sw + Delta_2 the
// delayed xi_dot also carries the undetected-maneuver bias.
struct TuningResult {
  std::vector<double> C;
  std::vector<double> t_sw;
  std::vector<double> surface;  // |z_bar| at intercept, row-major [C][t_sw]
  std::vector<double> worst;    // max over t_sw per C
  double best_C = 0.0;
  double best_worst = 0.0;
};

struct TuningCase {
  double miss = 0.0;    // m
  double z_bar = 0.0;   // miss / (a_E_max tau_P^2)
  int bias_steps = 0;   // guidance steps inside the bias window
};

// b of the analytic delay model for the scenario's nominal closing speed.
double tuning_b(const ScenarioConfig& base);

// One engagement of the study. `table` must be built for the same C and b.
TuningCase tuning_case(const ScenarioConfig& base, double C, double t_sw, double b,
                       const game::BoundaryTable& table);

// C on linspace(0, 1, s_C), t_sw on linspace(0, t_f, s_sw). Ties go to the
// smallest C.
TuningResult tune_c(const ScenarioConfig& base, int s_C, int s_sw, double t_f = 3.0,
                    int jobs = 1);

}  // namespace intercept
