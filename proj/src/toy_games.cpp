#include "eis/toy_games.hpp"

#include <algorithm>
#include <cmath>

namespace eis {

FiniteGameTable tabulate(const FiniteDeterministicGame& game) {
  FiniteGameTable table;
  table.states = game.enumerate_states();
  table.gamma = game.gamma();
  if (table.states.empty()) {
    throw std::invalid_argument("tabulate: game enumerates no states");
  }
  const ActionSet& actions = game.action_set(table.states.front());
  table.actions.assign(actions.actions().begin(), actions.actions().end());
  table.reward.resize(table.states.size());
  table.next.resize(table.states.size());
  for (std::size_t i = 0; i < table.states.size(); ++i) {
    table.reward[i].resize(table.actions.size());
    table.next[i].resize(table.actions.size());
    for (std::size_t a = 0; a < table.actions.size(); ++a) {
      const auto r = game.mean_reward(table.states[i], table.actions[a]);
      if (!r) {
        throw std::invalid_argument("tabulate: game lacks exact mean rewards");
      }
      table.reward[i][a] = *r;
      table.next[i][a] = game.state_index(game.next_state(table.states[i], table.actions[a]));
    }
  }
  return table;
}

namespace {

std::vector<double> jump_labels(const std::vector<int>& jumps) {
  std::vector<double> labels;
  labels.reserve(jumps.size());
  for (int j : jumps) labels.push_back(static_cast<double>(j));
  return labels;
}

}  // namespace

GridChainGame::GridChainGame(GridChainSpec spec)
    : spec_(std::move(spec)), actions_(jump_labels(spec_.jumps)) {
  if (spec_.states_per_player < 1) {
    throw std::invalid_argument("GridChainGame: need at least one state per player");
  }
  if (!(spec_.gamma > 0.0 && spec_.gamma < 1.0)) {
    throw std::invalid_argument("GridChainGame: gamma must lie in (0, 1)");
  }
  regions_ = {Region{Player::p1, {spec_.p1_lo}, {spec_.p1_hi}},
              Region{Player::p2, {spec_.p2_lo}, {spec_.p2_hi}}};
  for (const Region& r : regions_) r.validate();

  const std::size_t n = static_cast<std::size_t>(spec_.states_per_player);
  Rng rng(spec_.reward_seed);
  rewards_.resize(2 * n);
  for (auto& row : rewards_) {
    row.resize(actions_.size());
    for (double& r : row) {
      r = rng.uniform(-spec_.reward_scale, spec_.reward_scale);
    }
  }
}

double GridChainGame::cell_width(Player p) const {
  const Region& r = regions_[p == Player::p1 ? 0 : 1];
  return (r.upper[0] - r.lower[0]) / spec_.states_per_player;
}

double GridChainGame::state_coord(Player p, std::size_t index) const {
  const Region& r = regions_[p == Player::p1 ? 0 : 1];
  return r.lower[0] + (static_cast<double>(index) + 0.5) * cell_width(p);
}

std::size_t GridChainGame::grid_index(const GameState& s) const {
  const Region& r = regions_[s.player == Player::p1 ? 0 : 1];
  const double w = cell_width(s.player);
  const double offset = (s.coords.at(0) - r.lower[0]) / w;
  const auto idx = static_cast<std::int64_t>(std::floor(offset));
  const auto clamped =
      std::clamp<std::int64_t>(idx, 0, spec_.states_per_player - 1);
  return static_cast<std::size_t>(clamped);
}

std::vector<GameState> GridChainGame::enumerate_states() const {
  std::vector<GameState> states;
  const std::size_t n = static_cast<std::size_t>(spec_.states_per_player);
  states.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    states.push_back(make_state(state_coord(Player::p1, i), Player::p1));
  }
  for (std::size_t i = 0; i < n; ++i) {
    states.push_back(make_state(state_coord(Player::p2, i), Player::p2));
  }
  return states;
}

std::size_t GridChainGame::state_index(const GameState& s) const {
  const std::size_t n = static_cast<std::size_t>(spec_.states_per_player);
  return (s.player == Player::p1 ? 0 : n) + grid_index(s);
}

GameState GridChainGame::next_state(const GameState& s, double action) const {
  const std::size_t a = actions_.index_of(action);
  if (a == ActionSet::npos) {
    throw std::invalid_argument("GridChainGame: unknown action");
  }
  const std::int64_t n = spec_.states_per_player;
  const std::int64_t raw = static_cast<std::int64_t>(grid_index(s)) + spec_.jumps[a];
  const std::size_t target = static_cast<std::size_t>(((raw % n) + n) % n);
  const Player next_player = opponent(s.player);
  return make_state(state_coord(next_player, target), next_player);
}

StepResult GridChainGame::sample_step(const GameState& s, double action, Rng&) const {
  return StepResult{next_state(s, action), *mean_reward(s, action)};
}

std::optional<double> GridChainGame::mean_reward(const GameState& s,
                                                 double action) const {
  const std::size_t a = actions_.index_of(action);
  if (a == ActionSet::npos) {
    throw std::invalid_argument("GridChainGame: unknown action");
  }
  return rewards_[state_index(s)][a];
}

TwoStateGame::TwoStateGame(double r1, double r2, double gamma)
    : r1_(r1), r2_(r2), gamma_(gamma), actions_({0.0}) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("TwoStateGame: gamma must lie in (0, 1)");
  }
  regions_ = {Region{Player::p1, {0.0}, {1.0}}, Region{Player::p2, {-1.0}, {0.0}}};
}

std::vector<GameState> TwoStateGame::enumerate_states() const {
  return {make_state(0.5, Player::p1), make_state(-0.5, Player::p2)};
}

std::size_t TwoStateGame::state_index(const GameState& s) const {
  return s.player == Player::p1 ? 0 : 1;
}

double TwoStateGame::reward_bound() const {
  return std::max(std::abs(r1_), std::abs(r2_));
}

GameState TwoStateGame::next_state(const GameState& s, double) const {
  return s.player == Player::p1 ? make_state(-0.5, Player::p2)
                                : make_state(0.5, Player::p1);
}

StepResult TwoStateGame::sample_step(const GameState& s, double action, Rng&) const {
  return StepResult{next_state(s, action), *mean_reward(s, action)};
}

std::optional<double> TwoStateGame::mean_reward(const GameState& s, double) const {
  return s.player == Player::p1 ? r1_ : r2_;
}

}  // namespace eis
