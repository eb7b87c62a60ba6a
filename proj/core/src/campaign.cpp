#include "intercept/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>

#include "intercept/rng.hpp"

namespace intercept {

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  unsigned workers = jobs > 0 ? static_cast<unsigned>(jobs) : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::uint64_t run_seed(std::uint64_t base, int run_index) {
  return derive_seed(base, static_cast<std::uint64_t>(run_index));
}

double lethality_radius(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("lethality_radius: no samples");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("lethality_radius: p outside (0, 1]");
  const auto n = static_cast<double>(sorted.size());
  // Guard against p*n landing a hair above an integer through rounding.
  auto k = static_cast<std::size_t>(std::ceil(p * n - 1e-9));
  k = std::clamp<std::size_t>(k, 1, sorted.size());
  return sorted[k - 1];
}

std::vector<std::pair<double, double>> empirical_cdf(std::span<const double> sorted) {
  std::vector<std::pair<double, double>> out;
  out.reserve(sorted.size());
  const auto n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    // Ties share the highest rank.
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    out.emplace_back(sorted[i], static_cast<double>(i + 1) / n);
  }
  return out;
}

CampaignSummary run_campaign(const ScenarioConfig& tmpl, std::span<const double> t_sw_grid,
                             const CampaignOptions& opt) {
  if (opt.runs < 1) throw ConfigError("runs must be positive");
  if (t_sw_grid.empty()) throw ConfigError("empty switch-time grid");
  tmpl.validate();
  const std::size_t points = t_sw_grid.size();
  const std::size_t runs = static_cast<std::size_t>(opt.runs);
  const std::size_t total = points * runs;

  CampaignSummary out;
  out.law = tmpl.law;
  out.base_seed = tmpl.seed;
  out.runs_per_point = opt.runs;
  out.kill_probability = opt.kill_probability;
  out.runs.resize(total);

  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  RunOptions ro;
  ro.probe_smoother = opt.probe_smoother;
  parallel_for(total, opt.jobs, [&](std::size_t i) {
    const std::size_t p = i / runs;
    const int r = static_cast<int>(i % runs);
    ScenarioConfig cfg = tmpl;
    cfg.t_sw = t_sw_grid[p];
    cfg.seed = opt.identical_seeds ? tmpl.seed : run_seed(tmpl.seed, r);
    const RunRecord rec = run_engagement(cfg, ro);
    out.runs[i] = {cfg.t_sw, cfg.seed, rec.miss, rec.detection_time, rec.diverged, rec.probe};
    const std::size_t d = done.fetch_add(1) + 1;
    if (opt.progress) {
      std::lock_guard<std::mutex> lock(progress_mutex);
      opt.progress(d, total);
    }
  });

  for (std::size_t p = 0; p < points; ++p) {
    SwitchStats st;
    st.t_sw = t_sw_grid[p];
    st.runs = opt.runs;
    double sum = 0.0;
    for (std::size_t r = 0; r < runs; ++r) sum += out.runs[p * runs + r].miss;
    st.mean_miss = sum / static_cast<double>(runs);
    double ss = 0.0;
    for (std::size_t r = 0; r < runs; ++r) {
      const double d = out.runs[p * runs + r].miss - st.mean_miss;
      ss += d * d;
    }
    st.std_miss = runs > 1 ? std::sqrt(ss / static_cast<double>(runs - 1)) : 0.0;
    out.per_switch.push_back(st);
  }
  out.pooled_sorted.reserve(total);
  for (const auto& r : out.runs) out.pooled_sorted.push_back(r.miss);
  std::sort(out.pooled_sorted.begin(), out.pooled_sorted.end());
  out.lethality_radius = lethality_radius(out.pooled_sorted, opt.kill_probability);
  return out;
}

namespace {

bool bits_equal(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

bool same_outcome(const CampaignSummary& a, const CampaignSummary& b) {
  if (a.law != b.law || a.base_seed != b.base_seed || a.runs_per_point != b.runs_per_point) {
    return false;
  }
  if (!bits_equal(a.lethality_radius, b.lethality_radius)) return false;
  if (a.per_switch.size() != b.per_switch.size() || a.runs.size() != b.runs.size()) return false;
  for (std::size_t i = 0; i < a.per_switch.size(); ++i) {
    const auto& x = a.per_switch[i];
    const auto& y = b.per_switch[i];
    if (!bits_equal(x.t_sw, y.t_sw) || x.runs != y.runs || !bits_equal(x.mean_miss, y.mean_miss) ||
        !bits_equal(x.std_miss, y.std_miss)) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    const auto& x = a.runs[i];
    const auto& y = b.runs[i];
    if (x.seed != y.seed || !bits_equal(x.miss, y.miss) ||
        !bits_equal(x.detection_time, y.detection_time) || x.diverged != y.diverged) {
      return false;
    }
  }
  return true;
}

}  // namespace intercept
