#pragma once

#include <cstdint>

#include "eis/model.hpp"

namespace eis {

/// Polynomial confidence constants for tree action selection. The bonus at
/// a node with N total visits and N_a visits of action a is
/// beta^(1/xi) * N^(alpha/xi) / N_a^(1-eta), added for max nodes and
/// subtracted for min nodes.
struct UcbConstants {
  double beta = 2.0;
  double xi = 4.0;
  double alpha = 1.0;
};

struct MCTSConfig {
  int depth = 1;                 // H >= 1
  std::int64_t simulations = 1;  // m >= 1
  double eta = 0.5;              // in [1/2, 1)
  UcbConstants ucb;              // shared across depths
  double value_clip = 0.0;       // v_max; estimates clipped to [-v_max, v_max]

  void validate() const;
};

/// Output of one improvement query at a state: improved value, Boltzmann
/// policy of the Q estimates, the Q estimates themselves, and the exact
/// number of sampled transitions consumed.
struct ImprovementResult {
  double v_hat = 0.0;
  Distribution pi_hat;
  std::vector<double> q_hat;
  std::int64_t samples_used = 0;
};

/// Fixed-depth search on a deterministic game: runs cfg.simulations
/// root-to-depth-H traversals, selecting actions by empirical mean plus the
/// confidence bonus at P1 nodes (minus it at P2 nodes, lowest index on
/// ties), evaluating depth-H leaves with leaf_model, and returns the root's
/// averaged backed-up return clipped to [-v_max, v_max]. Each action is
/// visited once before any confidence comparison. Throws
/// UnsupportedDynamicsError for stochastic games.
double fixed_depth_mcts(const GameDynamics& game, const GameState& root,
                        const Model& leaf_model, const MCTSConfig& cfg, Rng& rng);

/// Improvement oracle for deterministic games. For each action: the edge
/// reward estimate is the mean of m sampled rewards, the successor value is
/// a fixed-depth search from s∘a, and q_hat = r_hat + gamma * v_successor.
/// v_hat is the max (P1) or min (P2) of q_hat and pi_hat its Boltzmann
/// transform at temperature tau. samples_used = m * (1 + H) * |A| exactly.
ImprovementResult improvement_query(const GameDynamics& game, const Model& model,
                                    const GameState& s, const MCTSConfig& cfg,
                                    double tau, Rng& rng);

enum class SparseMode {
  sampled,     // width C Monte Carlo draws per (node, action)
  exhaustive,  // enumerate finite-support outcomes with exact weights
};

/// Non-adaptive depth-H width-C lookahead for stochastic (or deterministic)
/// games. Depth 0 returns leaf_model.value(s); otherwise each action's
/// value is the mean over C sampled transitions of reward + gamma * child
/// estimate, and the node backs up the max (P1) or min (P2) over actions,
/// clipped to [-v_max, v_max]. Exhaustive mode replaces the C draws by the
/// game's finite transition support with exact probabilities.
/// `transitions`, when non-null, accumulates the number of sampled steps.
double sparse_sampling_estimate(const GameDynamics& game, const GameState& s,
                                const Model& leaf_model, int depth, int width,
                                Rng& rng, SparseMode mode = SparseMode::sampled,
                                std::int64_t* transitions = nullptr);

/// Improvement oracle backed by the sparse-sampling tree: the root layer's
/// per-action means are the Q estimates; value and policy are formed from
/// them exactly as in improvement_query.
ImprovementResult sparse_sampling_query(const GameDynamics& game, const Model& model,
                                        const GameState& s, int depth, int width,
                                        double tau, Rng& rng);

/// ceil(log(tau*rho / (16 |A|)) / log gamma), floored at 1.
int mcts_depth_schedule(double tau, double rho, std::size_t action_count, double gamma);

struct SimSchedule {
  std::int64_t simulations = 1;
  bool capped = false;
};

/// ceil(c1 * (tau * v_max * rho^l / (16 |A|))^(-2)), clamped to `cap` with a
/// flag when the formula exceeds it.
SimSchedule mcts_sim_schedule(int iteration, double tau, double rho, double v_max,
                              std::size_t action_count, double c1, std::int64_t cap);

}  // namespace eis
