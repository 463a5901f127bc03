#include "eis/improvement.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace eis {

void MCTSConfig::validate() const {
  if (depth < 1) throw std::invalid_argument("MCTSConfig: depth must be >= 1");
  if (simulations < 1) throw std::invalid_argument("MCTSConfig: simulations must be >= 1");
  if (!(eta >= 0.5 && eta < 1.0)) throw std::invalid_argument("MCTSConfig: eta outside [1/2, 1)");
  if (!(ucb.beta > 1.0)) throw std::invalid_argument("MCTSConfig: beta must exceed 1");
  if (!(ucb.xi > 1.0)) throw std::invalid_argument("MCTSConfig: xi must exceed 1");
  if (!(value_clip > 0.0)) throw std::invalid_argument("MCTSConfig: value_clip must be positive");
}

namespace {

double clip(double v, double bound) { return std::clamp(v, -bound, bound); }

/// Search tree node. Per action we track the visit count, the accumulated
/// edge rewards and the accumulated backed-up child returns, so that
/// (reward_sum + gamma * value_sum) / visits is the empirical mean used in
/// action selection. Deterministic transitions give one child per action.
struct SearchNode {
  explicit SearchNode(GameState s) : state(std::move(s)) {}

  GameState state;
  int total_visits = 0;
  std::vector<int> visits;
  std::vector<double> reward_sum;
  std::vector<double> value_sum;
  std::vector<std::unique_ptr<SearchNode>> children;
};

class FixedDepthSearch {
 public:
  FixedDepthSearch(const GameDynamics& game, const Model& leaf_model,
                   const MCTSConfig& cfg, Rng& rng)
      : game_(game), leaf_model_(leaf_model), cfg_(cfg), rng_(rng),
        v_max_(cfg.value_clip),
        bonus_scale_(std::pow(cfg.ucb.beta, 1.0 / cfg.ucb.xi)) {}

  double run(const GameState& root) {
    SearchNode node(root);
    double total = 0.0;
    for (std::int64_t t = 0; t < cfg_.simulations; ++t) {
      total += simulate(node, 0);
    }
    return clip(total / static_cast<double>(cfg_.simulations), v_max_);
  }

 private:
  std::size_t select_action(const SearchNode& node) const {
    // Each action is simulated once before any confidence comparison.
    for (std::size_t a = 0; a < node.visits.size(); ++a) {
      if (node.visits[a] == 0) return a;
    }
    const bool maximize = node.state.player == Player::p1;
    const double parent_term =
        bonus_scale_ * std::pow(static_cast<double>(node.total_visits),
                                cfg_.ucb.alpha / cfg_.ucb.xi);
    std::size_t best = 0;
    double best_score = 0.0;
    for (std::size_t a = 0; a < node.visits.size(); ++a) {
      const double n_a = static_cast<double>(node.visits[a]);
      const double mean =
          (node.reward_sum[a] + game_.gamma() * node.value_sum[a]) / n_a;
      const double bonus = parent_term / std::pow(n_a, 1.0 - cfg_.eta);
      const double score = maximize ? mean + bonus : mean - bonus;
      if (a == 0 || (maximize ? score > best_score : score < best_score)) {
        best = a;
        best_score = score;
      }
    }
    return best;
  }

  double simulate(SearchNode& node, int depth) {
    if (depth == cfg_.depth) {
      return clip(leaf_model_.value(node.state), v_max_);
    }
    if (node.visits.empty()) {
      const std::size_t n = game_.action_set(node.state).size();
      node.visits.assign(n, 0);
      node.reward_sum.assign(n, 0.0);
      node.value_sum.assign(n, 0.0);
      node.children.resize(n);
    }
    const std::size_t a = select_action(node);
    const double action = game_.action_set(node.state)[a];
    const StepResult step = game_.sample_step(node.state, action, rng_);
    if (!node.children[a]) {
      node.children[a] = std::make_unique<SearchNode>(step.state);
    }
    const double child_return = simulate(*node.children[a], depth + 1);
    node.reward_sum[a] += step.reward;
    node.value_sum[a] += child_return;
    node.visits[a] += 1;
    node.total_visits += 1;
    return clip(step.reward + game_.gamma() * child_return, v_max_);
  }

  const GameDynamics& game_;
  const Model& leaf_model_;
  const MCTSConfig& cfg_;
  Rng& rng_;
  double v_max_;
  double bonus_scale_;
};

double minimax_of(std::span<const double> q, Player player) {
  double best = q[0];
  for (double v : q) {
    best = player == Player::p1 ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

}  // namespace

double fixed_depth_mcts(const GameDynamics& game, const GameState& root,
                        const Model& leaf_model, const MCTSConfig& cfg, Rng& rng) {
  cfg.validate();
  if (!game.is_deterministic()) {
    throw UnsupportedDynamicsError("fixed_depth_mcts: requires deterministic transitions");
  }
  FixedDepthSearch search(game, leaf_model, cfg, rng);
  return search.run(root);
}

ImprovementResult improvement_query(const GameDynamics& game, const Model& model,
                                    const GameState& s, const MCTSConfig& cfg,
                                    double tau, Rng& rng) {
  cfg.validate();
  if (!(tau > 0.0)) {
    throw std::invalid_argument("improvement_query: tau must be positive");
  }
  if (!game.is_deterministic()) {
    throw UnsupportedDynamicsError("improvement_query: requires deterministic transitions");
  }
  const ActionSet& actions = game.action_set(s);
  std::vector<double> q_hat(actions.size());
  for (std::size_t a = 0; a < actions.size(); ++a) {
    double reward_sum = 0.0;
    for (std::int64_t k = 0; k < cfg.simulations; ++k) {
      reward_sum += game.sample_step(s, actions[a], rng).reward;
    }
    const double r_hat = reward_sum / static_cast<double>(cfg.simulations);
    const GameState successor = game.next_state(s, actions[a]);
    const double v_successor = fixed_depth_mcts(game, successor, model, cfg, rng);
    q_hat[a] = r_hat + game.gamma() * v_successor;
  }
  const double v_hat = minimax_of(q_hat, s.player);
  Distribution pi_hat = boltzmann_policy(q_hat, tau, s.player);
  const std::int64_t samples =
      cfg.simulations * (1 + static_cast<std::int64_t>(cfg.depth)) *
      static_cast<std::int64_t>(actions.size());
  return ImprovementResult{v_hat, std::move(pi_hat), std::move(q_hat), samples};
}

namespace {

class SparseSampler {
 public:
  SparseSampler(const GameDynamics& game, const Model& leaf_model, int width,
                SparseMode mode, Rng* rng, std::int64_t* transitions)
      : game_(game), leaf_model_(leaf_model), width_(width), mode_(mode),
        rng_(rng), transitions_(transitions), v_max_(game.value_bound()) {}

  double estimate(const GameState& s, int depth) {
    if (depth == 0) {
      return clip(leaf_model_.value(s), v_max_);
    }
    const std::vector<double> q = action_values(s, depth);
    return clip(minimax_of(q, s.player), v_max_);
  }

  std::vector<double> action_values(const GameState& s, int depth) {
    const ActionSet& actions = game_.action_set(s);
    std::vector<double> q(actions.size());
    for (std::size_t a = 0; a < actions.size(); ++a) {
      q[a] = mode_ == SparseMode::exhaustive
                 ? exact_backup(s, actions[a], depth)
                 : sampled_backup(s, actions[a], depth);
    }
    return q;
  }

 private:
  double sampled_backup(const GameState& s, double action, int depth) {
    double total = 0.0;
    for (int c = 0; c < width_; ++c) {
      const StepResult step = game_.sample_step(s, action, *rng_);
      if (transitions_) ++*transitions_;
      total += step.reward + game_.gamma() * estimate(step.state, depth - 1);
    }
    return total / static_cast<double>(width_);
  }

  double exact_backup(const GameState& s, double action, int depth) {
    const auto outcomes = game_.transition_support(s, action);
    if (!outcomes) {
      throw UnsupportedDynamicsError(
          "sparse_sampling_estimate: exhaustive mode needs finite transition support");
    }
    double total = 0.0;
    for (const TransitionOutcome& o : *outcomes) {
      total += o.probability * (o.reward + game_.gamma() * estimate(o.state, depth - 1));
    }
    return total;
  }

  const GameDynamics& game_;
  const Model& leaf_model_;
  int width_;
  SparseMode mode_;
  Rng* rng_;
  std::int64_t* transitions_;
  double v_max_;
};

void validate_sparse_params(int depth, int width, SparseMode mode) {
  if (depth < 0) throw std::invalid_argument("sparse sampling: depth must be >= 0");
  if (mode == SparseMode::sampled && width < 1) {
    throw std::invalid_argument("sparse sampling: width must be >= 1");
  }
}

}  // namespace

double sparse_sampling_estimate(const GameDynamics& game, const GameState& s,
                                const Model& leaf_model, int depth, int width,
                                Rng& rng, SparseMode mode, std::int64_t* transitions) {
  validate_sparse_params(depth, width, mode);
  SparseSampler sampler(game, leaf_model, width, mode, &rng, transitions);
  return sampler.estimate(s, depth);
}

ImprovementResult sparse_sampling_query(const GameDynamics& game, const Model& model,
                                        const GameState& s, int depth, int width,
                                        double tau, Rng& rng) {
  validate_sparse_params(depth, width, SparseMode::sampled);
  if (depth < 1) {
    throw std::invalid_argument("sparse_sampling_query: depth must be >= 1");
  }
  if (!(tau > 0.0)) {
    throw std::invalid_argument("sparse_sampling_query: tau must be positive");
  }
  std::int64_t transitions = 0;
  SparseSampler sampler(game, model, width, SparseMode::sampled, &rng, &transitions);
  std::vector<double> q_hat = sampler.action_values(s, depth);
  const double v_hat = clip(minimax_of(q_hat, s.player), game.value_bound());
  Distribution pi_hat = boltzmann_policy(q_hat, tau, s.player);
  return ImprovementResult{v_hat, std::move(pi_hat), std::move(q_hat), transitions};
}

int mcts_depth_schedule(double tau, double rho, std::size_t action_count, double gamma) {
  if (!(tau > 0.0) || !(rho > 0.0 && rho < 1.0) || action_count == 0 ||
      !(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("mcts_depth_schedule: invalid parameters");
  }
  const double x = tau * rho / (16.0 * static_cast<double>(action_count));
  if (x >= 1.0) return 1;
  const double h = std::ceil(std::log(x) / std::log(gamma));
  return std::max(1, static_cast<int>(h));
}

SimSchedule mcts_sim_schedule(int iteration, double tau, double rho, double v_max,
                              std::size_t action_count, double c1, std::int64_t cap) {
  if (!(c1 > 0.0) || cap < 1 || !(tau > 0.0) || !(rho > 0.0 && rho < 1.0) ||
      !(v_max > 0.0) || action_count == 0 || iteration < 0) {
    throw std::invalid_argument("mcts_sim_schedule: invalid parameters");
  }
  const double base = tau * v_max * std::pow(rho, iteration) /
                      (16.0 * static_cast<double>(action_count));
  const double raw = std::ceil(c1 / (base * base));
  if (!(raw < static_cast<double>(cap))) {
    return SimSchedule{cap, true};
  }
  return SimSchedule{std::max<std::int64_t>(1, static_cast<std::int64_t>(raw)), false};
}

}  // namespace eis
