#include "eis/exploration.hpp"

#include <cmath>
#include <numeric>

namespace eis {

GameState uniform_sample(std::span<const Region> regions, Rng& rng) {
  if (regions.empty()) {
    throw std::invalid_argument("uniform_sample: no regions");
  }
  double total_volume = 0.0;
  for (const Region& r : regions) total_volume += r.volume();
  double pick = rng.uniform() * total_volume;
  std::size_t chosen = regions.size() - 1;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    pick -= regions[i].volume();
    if (pick < 0.0) {
      chosen = i;
      break;
    }
  }
  const Region& region = regions[chosen];
  GameState s;
  s.player = region.player;
  s.coords.resize(region.dimension());
  for (std::size_t axis = 0; axis < region.dimension(); ++axis) {
    s.coords[axis] = rng.uniform(region.lower[axis], region.upper[axis]);
  }
  return s;
}

GameState boltzmann_explore_step(const GameDynamics& game, const Model& model,
                                 const GameState& s, double tau, Rng& rng) {
  const ActionSet& actions = game.action_set(s);
  std::vector<double> q(actions.size());
  const bool deterministic = game.is_deterministic();
  for (std::size_t a = 0; a < actions.size(); ++a) {
    if (deterministic && game.mean_reward(s, actions[a])) {
      const GameState successor = game.next_state(s, actions[a]);
      q[a] = *game.mean_reward(s, actions[a]) + game.gamma() * model.value(successor);
    } else {
      const StepResult peek = game.sample_step(s, actions[a], rng);
      q[a] = peek.reward + game.gamma() * model.value(peek.state);
    }
  }
  const Distribution policy = boltzmann_policy(q, tau, s.player);
  double pick = rng.uniform();
  std::size_t chosen = actions.size() - 1;
  for (std::size_t a = 0; a < actions.size(); ++a) {
    pick -= policy[a];
    if (pick < 0.0) {
      chosen = a;
      break;
    }
  }
  return game.sample_step(s, actions[chosen], rng).state;
}

ExplorationRun explore_until_representative(ExplorationPolicy& policy,
                                            const Partition& partition, int min_per_cell,
                                            std::int64_t max_steps, Rng& rng) {
  if (min_per_cell < 1) {
    throw std::invalid_argument("explore_until_representative: K must be >= 1");
  }
  ExplorationRun run;
  std::vector<int> counts(partition.size(), 0);
  std::size_t uncovered = partition.size();
  while (run.steps < max_steps && uncovered > 0) {
    GameState s = run.samples.empty() ? policy.initial(rng)
                                      : policy.next(run.samples.back(), rng);
    const std::size_t cell = partition.locate(s);
    counts[cell] += 1;
    if (counts[cell] == min_per_cell) uncovered -= 1;
    run.samples.push_back(std::move(s));
    run.steps += 1;
  }
  run.success = uncovered == 0;
  return run;
}

CoverageEstimate coverage_time_estimate(ExplorationPolicy& policy,
                                        const Partition& partition, int min_per_cell,
                                        int trials, std::int64_t max_steps, Rng& rng) {
  if (trials < 1) {
    throw std::invalid_argument("coverage_time_estimate: trials must be >= 1");
  }
  CoverageEstimate estimate;
  estimate.trial_steps.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    Rng trial_rng = rng.derive(static_cast<std::uint64_t>(t));
    const ExplorationRun run =
        explore_until_representative(policy, partition, min_per_cell, max_steps, trial_rng);
    estimate.trial_steps.push_back(run.steps);
    if (run.success) estimate.successes += 1;
  }
  const double n = static_cast<double>(trials);
  double mean = 0.0;
  for (std::int64_t s : estimate.trial_steps) mean += static_cast<double>(s);
  mean /= n;
  double variance = 0.0;
  for (std::int64_t s : estimate.trial_steps) {
    const double d = static_cast<double>(s) - mean;
    variance += d * d;
  }
  estimate.mean = mean;
  estimate.stddev = std::sqrt(variance / n);
  return estimate;
}

}  // namespace eis
