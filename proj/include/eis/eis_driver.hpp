#pragma once

#include <memory>
#include <optional>

#include "eis/baseline.hpp"
#include "eis/exploration.hpp"
#include "eis/improvement.hpp"
#include "eis/report.hpp"
#include "eis/supervised.hpp"

namespace eis {

enum class ImprovementKind { mcts, sparse_sampling };
enum class ExplorationKind { uniform, boltzmann };

/// Fixed values replacing the per-iteration schedules where set.
struct ScheduleOverrides {
  std::optional<int> depth;            // H
  std::optional<std::int64_t> simulations;  // m
  std::optional<double> cell_diameter;      // h
  std::optional<int> min_per_cell;          // K
};

struct EISConfig {
  double tau = 0.5;
  double rho = 0.5;
  int iterations = 5;  // L
  ImprovementKind improvement = ImprovementKind::mcts;
  ExplorationKind exploration = ExplorationKind::uniform;
  ScheduleOverrides overrides;

  double c1 = 1.0;                  // simulation-schedule constant
  std::int64_t simulation_cap = 100000;
  int sparse_width = 30;            // C for the sparse-sampling oracle
  double h_min = 1e-3;
  double lipschitz_v = 1.0;
  double lipschitz_p = 1.0;
  UcbConstants ucb;
  double eta = 0.5;

  std::uint64_t seed = 0;
  double exploration_delta = 0.1;   // per-run failure budget for exploration
  int coverage_pretrials = 20;      // trials behind the budget estimate
  std::optional<GameState> trajectory_start;  // Boltzmann explorer start hook
  bool record_wall_time = true;     // false zeroes wall_ms for bitwise replays

  void validate(const GameDynamics& game) const;
};

struct EISResult {
  std::shared_ptr<const Model> final_model;
  std::vector<IterationReport> reports;
  std::int64_t total_transitions = 0;  // instrumented count across the run
};

/// The L-iteration loop: per iteration compute schedules, explore until the
/// collected states are (h, K)-representative (or the budget is spent,
/// which flags the iteration and falls back to the non-strict fit), query
/// the improvement oracle at every collected state against the previous
/// model snapshot, fit the cell-average model, and evaluate against the
/// reference when one is supplied. iterations == 0 returns the initial
/// model (V == 0, uniform policy) and no reports.
EISResult eis_run(const GameDynamics& game, const std::optional<Reference>& reference,
                  const EISConfig& config);

struct ModelEvaluation {
  double sup_value_error = 0.0;
  double mean_value_error = 0.0;
  double max_policy_kl = 0.0;
};

/// Errors of a model against a tabulated reference on the reference grid:
/// sup and mean absolute value error, and the max KL from the model policy
/// to the Boltzmann policy of the reference Q at temperature tau.
ModelEvaluation evaluate_model(const Model& model, const Reference& reference,
                               double tau);

}  // namespace eis
