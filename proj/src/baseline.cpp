#include "eis/baseline.hpp"

#include <algorithm>
#include <cmath>

#include "eis/case_study.hpp"
#include "eis/game.hpp"

namespace eis {

double gaussian_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double DiscretizedGame::expected_next_value(std::size_t i, std::size_t a,
                                            std::span<const double> values) const {
  const std::vector<double>& row = rows[i][a];
  const std::size_t offset = target_offset(i);
  double total = 0.0;
  for (std::size_t k = 0; k < row.size(); ++k) {
    total += row[k] * values[offset + k];
  }
  return total;
}

DiscretizedGame discretize_case_study(int points_per_player) {
  if (points_per_player < 2) {
    throw std::invalid_argument("discretize_case_study: need at least 2 points per player");
  }
  const CaseStudyGame game;
  const std::size_t n = static_cast<std::size_t>(points_per_player);

  DiscretizedGame d;
  d.gamma = game.gamma();
  d.points_per_player = n;
  d.actions.assign(game.action_set(make_state(0.5, Player::p1)).actions().begin(),
                   game.action_set(make_state(0.5, Player::p1)).actions().end());

  std::vector<std::vector<double>> grids(2);
  for (std::size_t r = 0; r < 2; ++r) {
    const Region& region = game.state_regions()[r];
    grids[r].resize(n);
    const double step = (region.upper[0] - region.lower[0]) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
      grids[r][k] = region.lower[0] + static_cast<double>(k) * step;
    }
    grids[r].back() = region.upper[0];
    for (double x : grids[r]) {
      d.states.push_back(make_state(x, region.player));
    }
  }

  d.mean_rewards.resize(d.states.size());
  d.rows.resize(d.states.size());
  for (std::size_t i = 0; i < d.states.size(); ++i) {
    const GameState& s = d.states[i];
    const std::size_t target_region = s.player == Player::p1 ? 1 : 0;
    const std::vector<double>& target = grids[target_region];
    const double lo = target.front();
    const double hi = target.back();
    d.mean_rewards[i].resize(d.actions.size());
    d.rows[i].resize(d.actions.size());
    for (std::size_t a = 0; a < d.actions.size(); ++a) {
      d.mean_rewards[i][a] = case_study_reward(s, d.actions[a]);
      const double mean = -std::abs(s.coords[0]) + d.actions[a];
      std::vector<double>& row = d.rows[i][a];
      row.assign(n, 0.0);
      // Interior mass split at grid midpoints; tail mass beyond the region
      // endpoints lands on the clip boundary states.
      double prev_cdf = gaussian_cdf(lo - mean);
      row[0] += prev_cdf;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const double midpoint = 0.5 * (target[k] + target[k + 1]);
        const double cdf = gaussian_cdf(midpoint - mean);
        row[k] += cdf - prev_cdf;
        prev_cdf = cdf;
      }
      const double hi_cdf = gaussian_cdf(hi - mean);
      row[n - 1] += hi_cdf - prev_cdf;
      row[n - 1] += 1.0 - hi_cdf;
    }
  }
  return d;
}

ViSolution value_iteration(const DiscretizedGame& game, int max_iterations,
                           double tolerance) {
  ViSolution solution;
  solution.values.assign(game.states.size(), 0.0);
  const auto mean_reward = [&game](std::size_t i, std::size_t a) {
    return game.mean_rewards[i][a];
  };
  const auto expectation = [&game](std::size_t i, std::size_t a,
                                   std::span<const double> v) {
    return game.expected_next_value(i, a, v);
  };
  for (int it = 0; it < max_iterations; ++it) {
    std::vector<double> next =
        bellman_apply(solution.values, game.states, game.actions.size(), game.gamma,
                      mean_reward, expectation);
    double residual = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      residual = std::max(residual, std::abs(next[i] - solution.values[i]));
    }
    solution.values = std::move(next);
    solution.residuals.push_back(residual);
    if (residual <= tolerance) break;
  }
  solution.q_values.resize(game.states.size());
  for (std::size_t i = 0; i < game.states.size(); ++i) {
    solution.q_values[i].resize(game.actions.size());
    for (std::size_t a = 0; a < game.actions.size(); ++a) {
      solution.q_values[i][a] =
          game.mean_rewards[i][a] +
          game.gamma * game.expected_next_value(i, a, solution.values);
    }
  }
  return solution;
}

std::vector<Distribution> reference_boltzmann(std::span<const GameState> states,
                                              const std::vector<std::vector<double>>& q,
                                              double tau) {
  if (states.size() != q.size()) {
    throw std::invalid_argument("reference_boltzmann: state/Q size mismatch");
  }
  std::vector<Distribution> policies;
  policies.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    policies.push_back(boltzmann_policy(q[i], tau, states[i].player));
  }
  return policies;
}

ExactSolution brute_force_solve(const FiniteGameTable& table, double tolerance,
                                int max_iterations) {
  ExactSolution solution;
  const std::size_t n = table.states.size();
  const std::size_t actions = table.actions.size();
  solution.values.assign(n, 0.0);
  std::vector<double> next(n, 0.0);
  for (int it = 0; it < max_iterations; ++it) {
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool maximize = table.states[i].player == Player::p1;
      double best = 0.0;
      for (std::size_t a = 0; a < actions; ++a) {
        const double backup =
            table.reward[i][a] + table.gamma * solution.values[table.next[i][a]];
        if (a == 0 || (maximize ? backup > best : backup < best)) best = backup;
      }
      next[i] = best;
      residual = std::max(residual, std::abs(best - solution.values[i]));
    }
    solution.values.swap(next);
    solution.iterations = it + 1;
    solution.residual = residual;
    if (residual <= tolerance) break;
  }
  solution.q_values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    solution.q_values[i].resize(actions);
    for (std::size_t a = 0; a < actions; ++a) {
      solution.q_values[i][a] =
          table.reward[i][a] + table.gamma * solution.values[table.next[i][a]];
    }
  }
  return solution;
}

ExactSolution brute_force_solve(const FiniteDeterministicGame& game, double tolerance) {
  return brute_force_solve(tabulate(game), tolerance);
}

Reference make_reference(const DiscretizedGame& game, const ViSolution& solution) {
  return Reference{game.states, solution.values, solution.q_values};
}

Reference make_reference(const FiniteGameTable& table, const ExactSolution& solution) {
  return Reference{table.states, solution.values, solution.q_values};
}

}  // namespace eis
