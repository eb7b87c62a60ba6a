#include "intercept/sweep.hpp"

#include <random>

#include "intercept/campaign.hpp"
#include "intercept/error.hpp"
#include "intercept/game.hpp"
#include "intercept/rng.hpp"

namespace intercept {

namespace {

constexpr int kA = 10;
constexpr int kB2 = 10;
constexpr int kFrac = 9;
constexpr int kOmega = 11;
constexpr int kMu = 11;
constexpr int kEps = 11;

}  // namespace

long sweep_grid_size() { return static_cast<long>(kA) * kB2 * kFrac * kOmega * kMu * kEps; }

SweepCase sweep_grid_case(long index) {
  if (index < 0 || index >= sweep_grid_size()) throw std::out_of_range("sweep case index");
  SweepCase c;
  c.epsilon = 0.2 + 0.18 * static_cast<double>(index % kEps);
  index /= kEps;
  c.mu = 1.1 + 0.19 * static_cast<double>(index % kMu);
  index /= kMu;
  c.omega = static_cast<double>(index % kOmega + 1) / 12.0;
  index /= kOmega;
  c.b1_fraction = 0.125 * static_cast<double>(index % kFrac);
  index /= kFrac;
  c.b2 = 0.06 * static_cast<double>(index % kB2 + 1);
  index /= kB2;
  c.a = 0.01 * static_cast<double>(index + 1);
  return c;
}

SweepReport sweep_single_root(const SweepSpec& spec) {
  const long total = spec.samples > 0 ? spec.samples : sweep_grid_size();
  std::vector<long> indices(static_cast<std::size_t>(total));
  if (spec.samples > 0) {
    Rng rng(derive_seed(spec.seed, 0));
    std::uniform_int_distribution<long> pick(0, sweep_grid_size() - 1);
    for (auto& i : indices) i = pick(rng);
  } else {
    for (long i = 0; i < total; ++i) indices[static_cast<std::size_t>(i)] = i;
  }

  // 0 = single root, 1 = multi-root, 2 = no root.
  std::vector<SweepCase> cases(indices.size());
  std::vector<int> verdict(indices.size(), 0);
  parallel_for(indices.size(), spec.jobs, [&](std::size_t i) {
    SweepCase c = sweep_grid_case(indices[i]);
    game::GameParams p;
    p.mu = c.mu;
    p.epsilon = c.epsilon;
    const auto d = game::DelayModel::analytic(c.a, c.b1_fraction * c.b2, c.b2, c.omega);
    try {
      const auto onset = game::find_tau_s(d, p, spec.tau_max, spec.grid);
      c.sign_changes = onset.sign_changes;
      verdict[i] = onset.single_root() ? 0 : 1;
    } catch (const NoRootError&) {
      c.sign_changes = 0;
      verdict[i] = 2;
    }
    cases[i] = c;
  });

  SweepReport rep;
  rep.cases = total;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    switch (verdict[i]) {
      case 0: ++rep.single_root; break;
      case 1:
        ++rep.violations;
        rep.multi_root.push_back(cases[i]);
        break;
      default: ++rep.no_root; break;
    }
  }
  return rep;
}

}  // namespace intercept
