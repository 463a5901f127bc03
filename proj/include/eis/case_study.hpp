#pragma once

#include "eis/game.hpp"

namespace eis {

/// Clip u into the player's interval: P1 owns [0.1, 1.1], P2 owns
/// [-1.1, -0.1].
double clip_to_region(double u, Player player);

/// 3(|s| - 0.5)^2 - a; deterministic in (s, a). Throws invalid_argument when
/// the action is not one of {0.1, 0.2, 0.3, 0.4, 0.5}.
double case_study_reward(const GameState& s, double action);

/// Continuous-state stochastic game: from state s with action a the next
/// coordinate is clip(-|s| + z) into the opposite player's interval with
/// z ~ Normal(a, 1); gamma = 0.8.
class CaseStudyGame final : public GameDynamics {
 public:
  CaseStudyGame();

  static constexpr double kGamma = 0.8;
  static constexpr double kNoiseStd = 1.0;

  /// Deterministic core of the transition with the noise draw pinned.
  GameState step_with_noise(const GameState& s, double action, double z) const;

  double gamma() const override { return kGamma; }
  double reward_bound() const override { return 1.0; }
  const ActionSet& action_set(const GameState&) const override { return actions_; }
  bool is_deterministic() const override { return false; }
  StepResult sample_step(const GameState& s, double action, Rng& rng) const override;
  std::optional<double> mean_reward(const GameState& s, double action) const override;
  const std::vector<Region>& state_regions() const override { return regions_; }

 private:
  ActionSet actions_;
  std::vector<Region> regions_;
};

/// Same regions, actions and reward as the case study but with two-point
/// transition noise: z = a + nu, nu in {-delta, +delta} equiprobable. The
/// finite support makes exhaustive expectimax oracles exact.
class FiniteNoiseGame final : public GameDynamics {
 public:
  explicit FiniteNoiseGame(double delta = 0.3);

  double gamma() const override { return CaseStudyGame::kGamma; }
  double reward_bound() const override { return 1.0; }
  const ActionSet& action_set(const GameState&) const override { return actions_; }
  bool is_deterministic() const override { return false; }
  StepResult sample_step(const GameState& s, double action, Rng& rng) const override;
  std::optional<double> mean_reward(const GameState& s, double action) const override;
  const std::vector<Region>& state_regions() const override { return regions_; }
  std::optional<std::vector<TransitionOutcome>> transition_support(
      const GameState& s, double action) const override;

 private:
  GameState outcome_state(const GameState& s, double action, double nu) const;

  double delta_;
  ActionSet actions_;
  std::vector<Region> regions_;
};

}  // namespace eis
