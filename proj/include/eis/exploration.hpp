#pragma once

#include "eis/model.hpp"
#include "eis/supervised.hpp"

namespace eis {

/// Draw a state uniformly over the union of the regions, regions weighted
/// by volume; the player is set by region membership.
GameState uniform_sample(std::span<const Region> regions, Rng& rng);

/// One trajectory step of Boltzmann exploration: per action a one-step
/// lookahead q(a) = r + gamma * model.value(s') is formed (exact mean
/// reward and successor where the game is deterministic, a sampled
/// transition otherwise), an action is drawn from boltzmann_policy(q, tau,
/// player(s)), and the sampled successor is returned.
GameState boltzmann_explore_step(const GameDynamics& game, const Model& model,
                                 const GameState& s, double tau, Rng& rng);

/// Exploration policies conform to one interface taking the current state;
/// state-free samplers simply ignore it.
class ExplorationPolicy {
 public:
  virtual ~ExplorationPolicy() = default;
  virtual GameState initial(Rng& rng) = 0;
  virtual GameState next(const GameState& current, Rng& rng) = 0;
};

class UniformSampler final : public ExplorationPolicy {
 public:
  explicit UniformSampler(std::vector<Region> regions) : regions_(std::move(regions)) {}
  GameState initial(Rng& rng) override { return uniform_sample(regions_, rng); }
  GameState next(const GameState&, Rng& rng) override {
    return uniform_sample(regions_, rng);
  }

 private:
  std::vector<Region> regions_;
};

class BoltzmannExplorer final : public ExplorationPolicy {
 public:
  BoltzmannExplorer(const GameDynamics& game, const Model& model, double tau,
                    std::optional<GameState> start = std::nullopt)
      : game_(game), model_(model), tau_(tau), start_(std::move(start)) {}

  GameState initial(Rng& rng) override {
    return start_ ? *start_ : uniform_sample(game_.state_regions(), rng);
  }
  GameState next(const GameState& current, Rng& rng) override {
    return boltzmann_explore_step(game_, model_, current, tau_, rng);
  }

 private:
  const GameDynamics& game_;
  const Model& model_;
  double tau_;
  std::optional<GameState> start_;
};

struct ExplorationRun {
  std::vector<GameState> samples;  // in draw order
  std::int64_t steps = 0;
  bool success = false;
};

/// Draw states with the policy until the collected set is
/// (h, K)-representative for the partition, or until max_steps draws.
/// Failure is reported through the flag, never an error.
ExplorationRun explore_until_representative(ExplorationPolicy& policy,
                                            const Partition& partition, int min_per_cell,
                                            std::int64_t max_steps, Rng& rng);

struct CoverageEstimate {
  double mean = 0.0;
  double stddev = 0.0;  // population form; 0 for a single trial
  std::vector<std::int64_t> trial_steps;
  int successes = 0;
};

/// Empirical statistics of explore_until_representative over independent
/// trials, each on a derived seed, merged in trial order.
CoverageEstimate coverage_time_estimate(ExplorationPolicy& policy,
                                        const Partition& partition, int min_per_cell,
                                        int trials, std::int64_t max_steps, Rng& rng);

}  // namespace eis
