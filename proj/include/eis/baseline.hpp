#pragma once

#include "eis/metrics.hpp"
#include "eis/toy_games.hpp"

namespace eis {

/// Case-study game restricted to equally spaced per-player grids, with the
/// expectation over the clipped Gaussian transition computed by exact CDF
/// mass assignment: tail mass beyond a region endpoint goes to the boundary
/// grid point, interior mass to the nearest grid point. Rows are exact
/// probability vectors, which keeps the backup operator an exact
/// gamma-contraction.
struct DiscretizedGame {
  std::vector<GameState> states;  // P1 grid then P2 grid
  std::vector<double> actions;
  double gamma = 0.0;
  std::size_t points_per_player = 0;
  std::vector<std::vector<double>> mean_rewards;           // [state][action]
  std::vector<std::vector<std::vector<double>>> rows;      // [state][action][target point]

  /// Index of the first target-grid state for transitions out of state i.
  std::size_t target_offset(std::size_t i) const {
    return states[i].player == Player::p1 ? points_per_player : 0;
  }
  double expected_next_value(std::size_t i, std::size_t a,
                             std::span<const double> values) const;
};

/// Standard normal CDF.
double gaussian_cdf(double x);

DiscretizedGame discretize_case_study(int points_per_player);

struct ViSolution {
  std::vector<double> values;                 // V on the grid
  std::vector<std::vector<double>> q_values;  // per state per action
  std::vector<double> residuals;              // sup |V_{k+1} - V_k| per sweep
};

/// Repeated minimax backups with the exact expectation rows until the
/// iteration budget or a sup-norm residual at most `tolerance`. Q values
/// are formed from the final sweep.
ViSolution value_iteration(const DiscretizedGame& game, int max_iterations,
                           double tolerance);

/// Boltzmann policy of a tabulated Q per state, with the state player's
/// sign convention.
std::vector<Distribution> reference_boltzmann(std::span<const GameState> states,
                                              const std::vector<std::vector<double>>& q,
                                              double tau);

struct ExactSolution {
  std::vector<double> values;
  std::vector<std::vector<double>> q_values;
  int iterations = 0;
  double residual = 0.0;
};

/// Exact fixed point of a finite deterministic game by value iteration to a
/// 1e-12 sup-norm residual.
ExactSolution brute_force_solve(const FiniteGameTable& table, double tolerance = 1e-12,
                                int max_iterations = 2000000);
ExactSolution brute_force_solve(const FiniteDeterministicGame& game,
                                double tolerance = 1e-12);

/// Tabulated optimal value/Q reference against which learned models are
/// evaluated.
struct Reference {
  std::vector<GameState> states;
  std::vector<double> v_star;
  std::vector<std::vector<double>> q_star;
};

Reference make_reference(const DiscretizedGame& game, const ViSolution& solution);
Reference make_reference(const FiniteGameTable& table, const ExactSolution& solution);

}  // namespace eis
