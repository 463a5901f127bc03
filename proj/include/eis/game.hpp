#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "eis/metrics.hpp"
#include "eis/rng.hpp"

namespace eis {

enum class Player : int { p1 = 0, p2 = 1 };

inline Player opponent(Player p) { return p == Player::p1 ? Player::p2 : Player::p1; }

/// A point in the (continuous or discretized) state space plus the player
/// to move. For any given game the player is a function of the coordinates:
/// the two players' regions are disjoint.
struct GameState {
  std::vector<double> coords;
  Player player = Player::p1;
};

inline GameState make_state(double x, Player p) { return GameState{{x}, p}; }

/// Finite ordered list of real-valued action labels. The order is fixed for
/// the lifetime of a game; argmax/argmin ties break toward the lowest index.
class ActionSet {
 public:
  explicit ActionSet(std::vector<double> actions);

  std::size_t size() const { return actions_.size(); }
  double operator[](std::size_t i) const { return actions_[i]; }
  std::span<const double> actions() const { return actions_; }

  /// Index of a label, or npos when absent (1e-12 match tolerance).
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t index_of(double action) const;

 private:
  std::vector<double> actions_;
};

/// Axis-aligned bounded box owned by one player.
struct Region {
  Player player = Player::p1;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dimension() const { return lower.size(); }
  double volume() const;
  bool contains(std::span<const double> x) const;
  void validate() const;  // throws on empty, unbounded or inverted bounds
};

struct StepResult {
  GameState state;
  double reward = 0.0;
};

struct TransitionOutcome {
  double probability = 0.0;
  GameState state;
  double reward = 0.0;
};

struct UnsupportedDynamicsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two-player turn-based zero-sum Markov game with sampled transitions.
/// Implementations must be safe to query from multiple workers concurrently
/// provided each worker owns its rng; no shared mutable state inside.
class GameDynamics {
 public:
  virtual ~GameDynamics() = default;

  virtual double gamma() const = 0;
  /// Bound on |reward| for every sampled reward.
  virtual double reward_bound() const = 0;
  /// reward_bound / (1 - gamma); bounds every value produced downstream.
  double value_bound() const { return reward_bound() / (1.0 - gamma()); }

  virtual const ActionSet& action_set(const GameState& s) const = 0;
  virtual bool is_deterministic() const = 0;

  /// Deterministic games only; the default signals unsupported dynamics.
  virtual GameState next_state(const GameState& s, double action) const;

  virtual StepResult sample_step(const GameState& s, double action, Rng& rng) const = 0;

  /// Exact expected reward where available (baselines need it).
  virtual std::optional<double> mean_reward(const GameState& s, double action) const;

  virtual const std::vector<Region>& state_regions() const = 0;

  /// Finite-support transition enumeration where available; used by
  /// exhaustive oracles only.
  virtual std::optional<std::vector<TransitionOutcome>> transition_support(
      const GameState& s, double action) const;
};

/// Decorator counting every sample_step invocation.
class CountingGame final : public GameDynamics {
 public:
  explicit CountingGame(const GameDynamics& inner) : inner_(inner) {}

  std::int64_t transitions() const { return count_.load(); }
  void reset() { count_.store(0); }

  double gamma() const override { return inner_.gamma(); }
  double reward_bound() const override { return inner_.reward_bound(); }
  const ActionSet& action_set(const GameState& s) const override { return inner_.action_set(s); }
  bool is_deterministic() const override { return inner_.is_deterministic(); }
  GameState next_state(const GameState& s, double a) const override {
    return inner_.next_state(s, a);
  }
  StepResult sample_step(const GameState& s, double a, Rng& rng) const override {
    count_.fetch_add(1, std::memory_order_relaxed);
    return inner_.sample_step(s, a, rng);
  }
  std::optional<double> mean_reward(const GameState& s, double a) const override {
    return inner_.mean_reward(s, a);
  }
  const std::vector<Region>& state_regions() const override { return inner_.state_regions(); }
  std::optional<std::vector<TransitionOutcome>> transition_support(
      const GameState& s, double a) const override {
    return inner_.transition_support(s, a);
  }

 private:
  const GameDynamics& inner_;
  mutable std::atomic<std::int64_t> count_{0};
};

/// Softmax of q/tau for the maximizing player, of -q/tau for the minimizing
/// player, computed with max-subtraction. tau must be positive and q finite.
Distribution boltzmann_policy(std::span<const double> q, double tau, Player player);

/// One application of the minimax backup operator on a tabulated value
/// function: max over actions of (E r + gamma E v(s')) on P1 states, min on
/// P2 states. `mean_reward` and `expected_next_value` are indexed by
/// (state index, action index); the estimator receives the value table.
std::vector<double> bellman_apply(
    std::span<const double> values, std::span<const GameState> states,
    std::size_t action_count, double gamma,
    const std::function<double(std::size_t, std::size_t)>& mean_reward,
    const std::function<double(std::size_t, std::size_t, std::span<const double>)>&
        expected_next_value);

}  // namespace eis
