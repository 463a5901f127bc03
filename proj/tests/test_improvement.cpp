#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eis/baseline.hpp"
#include "eis/case_study.hpp"
#include "eis/improvement.hpp"
#include "eis/toy_games.hpp"
#include "test_support.hpp"

using namespace eis;

namespace {

/// All root actions lead to a zero-reward absorbing pair; the root edge
/// rewards are fixed per action. Exact Q values at the root are therefore
/// the edge rewards themselves.
class AbsorbingRewardGame final : public GameDynamics {
 public:
  AbsorbingRewardGame(std::vector<double> root_rewards, Player root_player,
                      double gamma)
      : root_rewards_(std::move(root_rewards)), root_player_(root_player),
        gamma_(gamma), actions_(action_labels(root_rewards_.size())) {
    regions_ = {Region{Player::p1, {0.0}, {1.0}}, Region{Player::p2, {-1.0}, {0.0}}};
  }

  GameState root() const {
    return make_state(root_player_ == Player::p1 ? 0.5 : -0.5, root_player_);
  }

  double gamma() const override { return gamma_; }
  double reward_bound() const override {
    double bound = 1.0;
    for (double r : root_rewards_) bound = std::max(bound, std::abs(r));
    return bound;
  }
  const ActionSet& action_set(const GameState&) const override { return actions_; }
  bool is_deterministic() const override { return true; }
  GameState next_state(const GameState& s, double) const override {
    const Player next = opponent(s.player);
    return make_state(next == Player::p1 ? 0.9 : -0.9, next);
  }
  StepResult sample_step(const GameState& s, double a, Rng&) const override {
    return StepResult{next_state(s, a), *mean_reward(s, a)};
  }
  std::optional<double> mean_reward(const GameState& s, double a) const override {
    const std::size_t index = actions_.index_of(a);
    if (index == ActionSet::npos) {
      throw std::invalid_argument("AbsorbingRewardGame: unknown action");
    }
    return is_root(s) ? root_rewards_[index] : 0.0;
  }
  const std::vector<Region>& state_regions() const override { return regions_; }

 private:
  static std::vector<double> action_labels(std::size_t n) {
    std::vector<double> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<double>(i);
    return labels;
  }
  bool is_root(const GameState& s) const {
    return s.player == root_player_ && std::abs(s.coords[0]) == 0.5;
  }

  std::vector<double> root_rewards_;
  Player root_player_;
  double gamma_;
  ActionSet actions_;
  std::vector<Region> regions_;
};

/// Exhaustive fixed-depth minimax recursion over deterministic dynamics;
/// independent of the tree-search implementation.
double depth_minimax(const GameDynamics& game, const Model& leaf, const GameState& s,
                     int depth) {
  if (depth == 0) return leaf.value(s);
  const ActionSet& actions = game.action_set(s);
  double best = 0.0;
  for (std::size_t a = 0; a < actions.size(); ++a) {
    const double value =
        *game.mean_reward(s, actions[a]) +
        game.gamma() * depth_minimax(game, leaf, game.next_state(s, actions[a]), depth - 1);
    if (a == 0 || (s.player == Player::p1 ? value > best : value < best)) best = value;
  }
  return best;
}

/// Exhaustive expectimax over finite-support stochastic dynamics.
double expectimax(const GameDynamics& game, const Model& leaf, const GameState& s,
                  int depth) {
  if (depth == 0) return leaf.value(s);
  const ActionSet& actions = game.action_set(s);
  double best = 0.0;
  for (std::size_t a = 0; a < actions.size(); ++a) {
    const auto outcomes = game.transition_support(s, actions[a]);
    REQUIRE(outcomes.has_value());
    double value = 0.0;
    for (const TransitionOutcome& o : *outcomes) {
      value += o.probability * (o.reward + game.gamma() * expectimax(game, leaf, o.state, depth - 1));
    }
    if (a == 0 || (s.player == Player::p1 ? value > best : value < best)) best = value;
  }
  return best;
}

MCTSConfig make_config(int depth, std::int64_t simulations, double v_max) {
  MCTSConfig cfg;
  cfg.depth = depth;
  cfg.simulations = simulations;
  cfg.value_clip = v_max;
  return cfg;
}

GridChainSpec single_action_chain() {
  GridChainSpec spec;
  spec.states_per_player = 5;
  spec.jumps = {1};
  spec.gamma = 0.8;
  spec.reward_seed = 77;
  return spec;
}

}  // namespace

TEST_CASE("config validation and unsupported dynamics") {
  const CaseStudyGame stochastic;
  const ConstantModel leaf(0.0, 5);
  Rng rng(1);
  MCTSConfig cfg = make_config(2, 10, stochastic.value_bound());
  CHECK_THROWS_AS(
      fixed_depth_mcts(stochastic, make_state(0.5, Player::p1), leaf, cfg, rng),
      UnsupportedDynamicsError);

  cfg.depth = 0;
  const GridChainGame chain(GridChainSpec{});
  CHECK_THROWS_AS(
      fixed_depth_mcts(chain, chain.enumerate_states()[0], leaf, cfg, rng),
      std::invalid_argument);
}

TEST_CASE("single-action chain backs up the exact discounted rollup") {
  const GridChainGame game(single_action_chain());
  const GameState root = game.enumerate_states()[0];
  const double leaf_value = 0.4;
  const FunctionModel leaf([leaf_value](const GameState&) { return leaf_value; }, 1);

  for (int depth : {1, 2, 4}) {
    // closed-form rollup along the forced path
    double expected = 0.0;
    double discount = 1.0;
    GameState s = root;
    for (int k = 0; k < depth; ++k) {
      expected += discount * *game.mean_reward(s, game.action_set(s)[0]);
      discount *= game.gamma();
      s = game.next_state(s, game.action_set(s)[0]);
    }
    expected += discount * leaf_value;

    Rng rng(5);
    const MCTSConfig cfg = make_config(depth, 25, game.value_bound());
    const double estimate = fixed_depth_mcts(game, root, leaf, cfg, rng);
    CHECK(estimate == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("exact leaves give zero error and biased leaves shift by gamma^H b") {
  const GridChainGame game(single_action_chain());
  const ExactSolution solution = brute_force_solve(game);
  const std::vector<GameState> states = game.enumerate_states();
  const GameState root = states[2];

  const FunctionModel exact_leaf(
      [&](const GameState& s) { return solution.values[game.state_index(s)]; }, 1);
  const double bias = 0.3;
  const FunctionModel biased_leaf(
      [&](const GameState& s) { return solution.values[game.state_index(s)] + bias; }, 1);

  const int depth = 3;
  const MCTSConfig cfg = make_config(depth, 40, game.value_bound() + bias);
  Rng rng1(9), rng2(9);
  const double with_exact = fixed_depth_mcts(game, root, exact_leaf, cfg, rng1);
  const double with_bias = fixed_depth_mcts(game, root, biased_leaf, cfg, rng2);

  CHECK(with_exact ==
        doctest::Approx(solution.values[game.state_index(root)]).epsilon(1e-12));
  CHECK(with_bias - with_exact ==
        doctest::Approx(std::pow(game.gamma(), depth) * bias).epsilon(1e-12));
}

TEST_CASE("multi-action search approaches the exhaustive minimax backup") {
  const GridChainGame game(GridChainSpec{});
  const ExactSolution solution = brute_force_solve(game);
  const FunctionModel exact_leaf(
      [&](const GameState& s) { return solution.values[game.state_index(s)]; }, 3);

  const int depth = 3;
  for (const std::size_t root_index : {0u, 9u}) {  // one max root, one min root
    const GameState root = game.enumerate_states()[root_index];
    const double oracle = depth_minimax(game, exact_leaf, root, depth);
    // exact leaves make the depth-H backup coincide with the fixed point
    CHECK(oracle ==
          doctest::Approx(solution.values[game.state_index(root)]).epsilon(1e-9));

    Rng rng(13 + root_index);
    const MCTSConfig cfg = make_config(depth, 4000, game.value_bound());
    const double estimate = fixed_depth_mcts(game, root, exact_leaf, cfg, rng);
    CHECK(std::abs(estimate - oracle) <= 0.05);
  }
}

TEST_CASE("search error shrinks with more simulations (smoke)") {
  const GridChainGame game(GridChainSpec{});
  const ExactSolution solution = brute_force_solve(game);
  const FunctionModel exact_leaf(
      [&](const GameState& s) { return solution.values[game.state_index(s)]; }, 3);
  const GameState root = game.enumerate_states()[1];
  const double truth = depth_minimax(game, exact_leaf, root, 3);

  const auto mean_error = [&](std::int64_t m) {
    double total = 0.0;
    for (int seed = 0; seed < 8; ++seed) {
      Rng rng(100 + seed);
      const MCTSConfig cfg = make_config(3, m, game.value_bound());
      total += std::abs(fixed_depth_mcts(game, root, exact_leaf, cfg, rng) - truth);
    }
    return total / 8.0;
  };
  const double coarse = mean_error(40);
  const double fine = mean_error(640);
  CHECK(fine <= coarse * 1.10 + 0.01);
}

TEST_CASE("improvement query on the absorbing construction") {
  const std::vector<double> rewards{0.3, -0.2, 0.7, 0.1};
  const double tau = 0.5;

  SUBCASE("maximizing root") {
    const AbsorbingRewardGame game(rewards, Player::p1, 0.8);
    Rng rng(21);
    const MCTSConfig cfg = make_config(2, 30, game.value_bound());
    const ImprovementResult result =
        improvement_query(game, ConstantModel(0.0, 4), game.root(), cfg, tau, rng);
    for (std::size_t a = 0; a < rewards.size(); ++a) {
      CHECK(result.q_hat[a] == doctest::Approx(rewards[a]).epsilon(1e-12));
    }
    CHECK(result.v_hat == doctest::Approx(0.7).epsilon(1e-12));
    // internal consistency: pi_hat is the Boltzmann transform of q_hat
    const Distribution expected = boltzmann_policy(result.q_hat, tau, Player::p1);
    for (std::size_t a = 0; a < rewards.size(); ++a) {
      CHECK(result.pi_hat[a] == doctest::Approx(expected[a]).epsilon(1e-12));
    }
  }

  SUBCASE("minimizing root mirrors the value") {
    const AbsorbingRewardGame game(rewards, Player::p2, 0.8);
    Rng rng(22);
    const MCTSConfig cfg = make_config(2, 30, game.value_bound());
    const ImprovementResult result =
        improvement_query(game, ConstantModel(0.0, 4), game.root(), cfg, tau, rng);
    CHECK(result.v_hat == doctest::Approx(-0.2).epsilon(1e-12));
    const Distribution expected = boltzmann_policy(result.q_hat, tau, Player::p2);
    for (std::size_t a = 0; a < rewards.size(); ++a) {
      CHECK(result.pi_hat[a] == doctest::Approx(expected[a]).epsilon(1e-12));
    }
  }

  SUBCASE("symmetric rewards give the uniform policy") {
    const AbsorbingRewardGame game({0.4, 0.4, 0.4}, Player::p1, 0.8);
    Rng rng(23);
    const MCTSConfig cfg = make_config(2, 10, game.value_bound());
    const ImprovementResult result =
        improvement_query(game, ConstantModel(0.0, 3), game.root(), cfg, tau, rng);
    for (std::size_t a = 0; a < 3; ++a) {
      CHECK(result.pi_hat[a] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("improvement query sample accounting is exact") {
  const GridChainGame game(GridChainSpec{});
  const CountingGame counted(game);
  Rng rng(31);
  const MCTSConfig cfg = make_config(4, 17, game.value_bound());
  const ImprovementResult result = improvement_query(
      counted, ConstantModel(0.0, 3), game.enumerate_states()[3], cfg, 1.0, rng);
  const std::int64_t expected = 17 * (1 + 4) * 3;  // m (1 + H) |A|
  CHECK(result.samples_used == expected);
  CHECK(counted.transitions() == expected);
}

TEST_CASE("sparse sampling base case and deterministic equivalence") {
  SUBCASE("depth zero returns the leaf value") {
    const FiniteNoiseGame game;
    const ConstantModel leaf(0.33, 5);
    Rng rng(41);
    CHECK(sparse_sampling_estimate(game, make_state(0.7, Player::p1), leaf, 0, 4, rng) ==
          doctest::Approx(0.33));
  }

  SUBCASE("deterministic game: any width equals the full-width minimax backup") {
    const GridChainGame game(GridChainSpec{});
    const ExactSolution solution = brute_force_solve(game);
    const FunctionModel leaf(
        [&](const GameState& s) { return solution.values[game.state_index(s)]; }, 3);
    for (int width : {1, 3}) {
      for (const GameState& root : game.enumerate_states()) {
        Rng rng(43);
        const double estimate = sparse_sampling_estimate(game, root, leaf, 2, width, rng);
        const double oracle = depth_minimax(game, leaf, root, 2);
        CHECK(estimate == doctest::Approx(oracle).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("exhaustive sparse sampling equals the brute-force expectimax") {
  const FiniteNoiseGame game(0.3);
  const FunctionModel leaf(
      [](const GameState& s) { return 0.8 * std::cos(3.0 * s.coords[0]); }, 5);
  Rng state_rng(47);
  Rng unused(0);
  for (int trial = 0; trial < 50; ++trial) {
    const double x = state_rng.uniform() < 0.5 ? state_rng.uniform(0.1, 1.1)
                                               : state_rng.uniform(-1.1, -0.1);
    const GameState s = make_state(x, x > 0 ? Player::p1 : Player::p2);
    const double estimate = sparse_sampling_estimate(game, s, leaf, 2, 1, unused,
                                                     SparseMode::exhaustive);
    CHECK(estimate == doctest::Approx(expectimax(game, leaf, s, 2)).epsilon(1e-9));
  }
}

TEST_CASE("exhaustive mode requires finite transition support") {
  const CaseStudyGame game;
  const ConstantModel leaf(0.0, 5);
  Rng rng(51);
  CHECK_THROWS_AS(sparse_sampling_estimate(game, make_state(0.5, Player::p1), leaf, 2, 1,
                                           rng, SparseMode::exhaustive),
                  UnsupportedDynamicsError);
}

TEST_CASE("sparse sampling estimates are clipped into the value bound") {
  const FiniteNoiseGame game;
  // leaf model deliberately outside the bound; clipping keeps outputs inside
  const ConstantModel leaf(2.0 * game.value_bound(), 5);
  Rng rng(53);
  std::int64_t transitions = 0;
  const double estimate = sparse_sampling_estimate(game, make_state(0.3, Player::p1),
                                                   leaf, 2, 3, rng, SparseMode::sampled,
                                                   &transitions);
  CHECK(std::abs(estimate) <= game.value_bound());
  CHECK(transitions == 5 * 3 + 5 * 3 * 5 * 3);  // |A| C + (|A| C)^2
}

TEST_CASE("sparse sampling query mirrors the root layer") {
  const FiniteNoiseGame game;
  const CountingGame counted(game);
  Rng rng(59);
  const ImprovementResult result = sparse_sampling_query(
      counted, ConstantModel(0.0, 5), make_state(-0.4, Player::p2), 2, 6, 0.7, rng);
  CHECK(result.samples_used == counted.transitions());
  double best = result.q_hat[0];
  for (double q : result.q_hat) best = std::min(best, q);
  CHECK(result.v_hat == doctest::Approx(best));
  const Distribution expected = boltzmann_policy(result.q_hat, 0.7, Player::p2);
  for (std::size_t a = 0; a < 5; ++a) {
    CHECK(result.pi_hat[a] == doctest::Approx(expected[a]).epsilon(1e-12));
  }
}

TEST_CASE("depth schedule") {
  CHECK(mcts_depth_schedule(0.5, 0.5, 5, 0.8) == 26);
  // degenerate argument >= 1 clamps at the floor
  CHECK(mcts_depth_schedule(100.0, 0.9, 5, 0.8) == 1);
  // smaller rho digs deeper
  CHECK(mcts_depth_schedule(0.5, 0.25, 5, 0.8) > mcts_depth_schedule(0.5, 0.5, 5, 0.8));
  CHECK_THROWS_AS(mcts_depth_schedule(0.0, 0.5, 5, 0.8), std::invalid_argument);
}

TEST_CASE("simulation schedule") {
  const SimSchedule base = mcts_sim_schedule(1, 1.0, 0.5, 1.0, 1, 1.0, 1 << 30);
  CHECK(base.simulations == 1024);
  CHECK_FALSE(base.capped);

  const SimSchedule next = mcts_sim_schedule(2, 1.0, 0.5, 1.0, 1, 1.0, 1 << 30);
  CHECK(next.simulations == 4 * base.simulations);  // rho^-2 growth

  const SimSchedule capped = mcts_sim_schedule(1, 1.0, 0.5, 1.0, 1, 1.0, 100);
  CHECK(capped.simulations == 100);
  CHECK(capped.capped);
}
