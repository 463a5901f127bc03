#pragma once

#include <cstdint>

#include "eis/game.hpp"

namespace eis {

/// Deterministic game whose reachable states form a small finite set,
/// exhaustively solvable by value iteration.
class FiniteDeterministicGame : public GameDynamics {
 public:
  virtual std::vector<GameState> enumerate_states() const = 0;
  virtual std::size_t state_index(const GameState& s) const = 0;
};

/// Finite deterministic game flattened into index form for exact solvers.
struct FiniteGameTable {
  std::vector<GameState> states;
  std::vector<double> actions;
  double gamma = 0.0;
  std::vector<std::vector<double>> reward;     // [state][action]
  std::vector<std::vector<std::size_t>> next;  // [state][action]
};

FiniteGameTable tabulate(const FiniteDeterministicGame& game);

/// Family of deterministic two-player games on grids embedded in the real
/// line. Each player owns `states_per_player` points placed at the centers
/// of equal cells of their interval; an action jumps to index
/// (i + jump) mod n on the opposite player's grid. Rewards are a fixed
/// table drawn once from `reward_seed`, bounded by `reward_scale`.
/// Queries at arbitrary coordinates snap to the nearest grid point, so the
/// game is defined on the whole region while its reachable core is finite.
struct GridChainSpec {
  int states_per_player = 8;
  std::vector<int> jumps = {0, 1, 2};
  double gamma = 0.7;
  std::uint64_t reward_seed = 42;
  double reward_scale = 1.0;
  double p1_lo = 0.0, p1_hi = 1.0;
  double p2_lo = -1.25, p2_hi = -0.25;
};

class GridChainGame final : public FiniteDeterministicGame {
 public:
  explicit GridChainGame(GridChainSpec spec);

  double cell_width(Player p) const;
  double state_coord(Player p, std::size_t index) const;
  const GridChainSpec& spec() const { return spec_; }

  std::vector<GameState> enumerate_states() const override;
  std::size_t state_index(const GameState& s) const override;

  double gamma() const override { return spec_.gamma; }
  double reward_bound() const override { return spec_.reward_scale; }
  const ActionSet& action_set(const GameState&) const override { return actions_; }
  bool is_deterministic() const override { return true; }
  GameState next_state(const GameState& s, double action) const override;
  StepResult sample_step(const GameState& s, double action, Rng& rng) const override;
  std::optional<double> mean_reward(const GameState& s, double action) const override;
  const std::vector<Region>& state_regions() const override { return regions_; }

 private:
  std::size_t grid_index(const GameState& s) const;  // snap to nearest point

  GridChainSpec spec_;
  ActionSet actions_;
  std::vector<Region> regions_;
  std::vector<std::vector<double>> rewards_;  // [player * n + i][action]
};

/// Two states, one action, alternating turns: x (P1) -> y (P2) -> x.
/// Closed-form fixed point V(x) = (r1 + gamma r2) / (1 - gamma^2).
class TwoStateGame final : public FiniteDeterministicGame {
 public:
  TwoStateGame(double r1, double r2, double gamma);

  std::vector<GameState> enumerate_states() const override;
  std::size_t state_index(const GameState& s) const override;

  double gamma() const override { return gamma_; }
  double reward_bound() const override;
  const ActionSet& action_set(const GameState&) const override { return actions_; }
  bool is_deterministic() const override { return true; }
  GameState next_state(const GameState& s, double action) const override;
  StepResult sample_step(const GameState& s, double action, Rng& rng) const override;
  std::optional<double> mean_reward(const GameState& s, double action) const override;
  const std::vector<Region>& state_regions() const override { return regions_; }

 private:
  double r1_, r2_, gamma_;
  ActionSet actions_;
  std::vector<Region> regions_;
};

}  // namespace eis
