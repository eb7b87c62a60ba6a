#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "intercept/engagement.hpp"
#include "intercept/scenario.hpp"

namespace intercept {

// Runs fn(i) for i in [0, n) on `jobs` threads (0 = hardware concurrency).
// Results must be written by index; the first exception is rethrown.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

struct SwitchStats {
  double t_sw = 0.0;
  int runs = 0;
  double mean_miss = 0.0;
  double std_miss = 0.0;  // sample standard deviation
};

struct RunSummary {
  double t_sw = 0.0;
  std::uint64_t seed = 0;
  double miss = 0.0;
  double detection_time = 0.0;
  bool diverged = false;
  SmootherProbe probe;
};

struct CampaignSummary {
  Law law = Law::tv_dglcc;
  std::uint64_t base_seed = 0;
  int runs_per_point = 0;
  double kill_probability = 0.95;
  double lethality_radius = 0.0;
  std::vector<SwitchStats> per_switch;
  std::vector<double> pooled_sorted;  // ascending
  std::vector<RunSummary> runs;       // ordered by (switch index, run index)
};

struct CampaignOptions {
  int runs = 50;
  int jobs = 1;
  double kill_probability = 0.95;
  // Every run reuses the template seed instead of a per-run stream.
  bool identical_seeds = false;
  bool probe_smoother = false;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

// Seed of run r: derived from the template seed and r only, so different
// switch times and laws see common random numbers.
std::uint64_t run_seed(std::uint64_t base, int run_index);

CampaignSummary run_campaign(const ScenarioConfig& tmpl, std::span<const double> t_sw_grid,
                             const CampaignOptions& opt);

// Smallest sample x with empirical CDF(x) >= p. Input must be sorted.
double lethality_radius(std::span<const double> sorted, double p);
// (miss, cumulative probability) at every sample.
std::vector<std::pair<double, double>> empirical_cdf(std::span<const double> sorted);

bool same_outcome(const CampaignSummary& a, const CampaignSummary& b);

}  // namespace intercept
