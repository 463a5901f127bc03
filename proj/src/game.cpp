#include "eis/game.hpp"

#include <algorithm>
#include <cmath>

namespace eis {

ActionSet::ActionSet(std::vector<double> actions) : actions_(std::move(actions)) {
  if (actions_.empty()) {
    throw std::invalid_argument("ActionSet: empty");
  }
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    for (std::size_t j = i + 1; j < actions_.size(); ++j) {
      if (std::abs(actions_[i] - actions_[j]) <= 1e-12) {
        throw std::invalid_argument("ActionSet: duplicate label");
      }
    }
  }
}

std::size_t ActionSet::index_of(double action) const {
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    if (std::abs(actions_[i] - action) <= 1e-12) return i;
  }
  return npos;
}

double Region::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lower.size(); ++i) v *= upper[i] - lower[i];
  return v;
}

bool Region::contains(std::span<const double> x) const {
  if (x.size() != lower.size()) return false;
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (x[i] < lower[i] || x[i] > upper[i]) return false;
  }
  return true;
}

void Region::validate() const {
  if (lower.empty() || lower.size() != upper.size()) {
    throw std::invalid_argument("Region: empty or mismatched bounds");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i])) {
      throw std::invalid_argument("Region: unbounded");
    }
    if (!(lower[i] < upper[i])) {
      throw std::invalid_argument("Region: inverted or degenerate bounds");
    }
  }
}

GameState GameDynamics::next_state(const GameState&, double) const {
  throw UnsupportedDynamicsError("next_state: game is not deterministic");
}

std::optional<double> GameDynamics::mean_reward(const GameState&, double) const {
  return std::nullopt;
}

std::optional<std::vector<TransitionOutcome>> GameDynamics::transition_support(
    const GameState&, double) const {
  return std::nullopt;
}

Distribution boltzmann_policy(std::span<const double> q, double tau, Player player) {
  if (!(tau > 0.0)) {
    throw std::invalid_argument("boltzmann_policy: tau must be positive");
  }
  if (q.empty()) {
    throw std::invalid_argument("boltzmann_policy: empty q");
  }
  const double sign = player == Player::p1 ? 1.0 : -1.0;
  double top = -std::numeric_limits<double>::infinity();
  for (double qi : q) {
    if (!std::isfinite(qi)) {
      throw std::domain_error("boltzmann_policy: non-finite q entry");
    }
    top = std::max(top, sign * qi);
  }
  std::vector<double> weights(q.size());
  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    weights[i] = std::exp((sign * q[i] - top) / tau);
    total += weights[i];
  }
  for (double& w : weights) w /= total;
  return Distribution(std::move(weights));
}

std::vector<double> bellman_apply(
    std::span<const double> values, std::span<const GameState> states,
    std::size_t action_count, double gamma,
    const std::function<double(std::size_t, std::size_t)>& mean_reward,
    const std::function<double(std::size_t, std::size_t, std::span<const double>)>&
        expected_next_value) {
  if (values.size() != states.size()) {
    throw std::invalid_argument("bellman_apply: grid/value length mismatch");
  }
  if (action_count == 0) {
    throw std::invalid_argument("bellman_apply: no actions");
  }
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const bool maximize = states[i].player == Player::p1;
    double best = 0.0;
    for (std::size_t a = 0; a < action_count; ++a) {
      const double backup =
          mean_reward(i, a) + gamma * expected_next_value(i, a, values);
      if (a == 0 || (maximize ? backup > best : backup < best)) {
        best = backup;
      }
    }
    out[i] = best;
  }
  return out;
}

}  // namespace eis
