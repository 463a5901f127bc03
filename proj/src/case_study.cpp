#include "eis/case_study.hpp"

#include <cmath>

namespace eis {

namespace {

constexpr double kP1Lo = 0.1, kP1Hi = 1.1;
constexpr double kP2Lo = -1.1, kP2Hi = -0.1;

std::vector<double> case_study_actions() { return {0.1, 0.2, 0.3, 0.4, 0.5}; }

std::vector<Region> case_study_regions() {
  return {Region{Player::p1, {kP1Lo}, {kP1Hi}}, Region{Player::p2, {kP2Lo}, {kP2Hi}}};
}

void require_valid_action(const ActionSet& actions, double a) {
  if (actions.index_of(a) == ActionSet::npos) {
    throw std::invalid_argument("case study: action not in action set");
  }
}

}  // namespace

double clip_to_region(double u, Player player) {
  const double lo = player == Player::p1 ? kP1Lo : kP2Lo;
  const double hi = player == Player::p1 ? kP1Hi : kP2Hi;
  return std::min(std::max(lo, u), hi);
}

double case_study_reward(const GameState& s, double action) {
  static const ActionSet actions(case_study_actions());
  require_valid_action(actions, action);
  const double dist = std::abs(s.coords.at(0)) - 0.5;
  return 3.0 * dist * dist - action;
}

CaseStudyGame::CaseStudyGame()
    : actions_(case_study_actions()), regions_(case_study_regions()) {}

GameState CaseStudyGame::step_with_noise(const GameState& s, double action,
                                         double z) const {
  require_valid_action(actions_, action);
  const Player next_player = opponent(s.player);
  const double raw = -std::abs(s.coords.at(0)) + z;
  return make_state(clip_to_region(raw, next_player), next_player);
}

StepResult CaseStudyGame::sample_step(const GameState& s, double action,
                                      Rng& rng) const {
  const double z = rng.normal(action, kNoiseStd);
  return StepResult{step_with_noise(s, action, z), case_study_reward(s, action)};
}

std::optional<double> CaseStudyGame::mean_reward(const GameState& s,
                                                 double action) const {
  return case_study_reward(s, action);
}

FiniteNoiseGame::FiniteNoiseGame(double delta)
    : delta_(delta), actions_(case_study_actions()), regions_(case_study_regions()) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("FiniteNoiseGame: delta must be positive");
  }
}

GameState FiniteNoiseGame::outcome_state(const GameState& s, double action,
                                         double nu) const {
  const Player next_player = opponent(s.player);
  const double raw = -std::abs(s.coords.at(0)) + action + nu;
  return make_state(clip_to_region(raw, next_player), next_player);
}

StepResult FiniteNoiseGame::sample_step(const GameState& s, double action,
                                        Rng& rng) const {
  require_valid_action(actions_, action);
  const double nu = rng.uniform() < 0.5 ? -delta_ : delta_;
  return StepResult{outcome_state(s, action, nu), case_study_reward(s, action)};
}

std::optional<double> FiniteNoiseGame::mean_reward(const GameState& s,
                                                   double action) const {
  return case_study_reward(s, action);
}

std::optional<std::vector<TransitionOutcome>> FiniteNoiseGame::transition_support(
    const GameState& s, double action) const {
  require_valid_action(actions_, action);
  const double reward = case_study_reward(s, action);
  return std::vector<TransitionOutcome>{
      {0.5, outcome_state(s, action, -delta_), reward},
      {0.5, outcome_state(s, action, +delta_), reward},
  };
}

}  // namespace eis
