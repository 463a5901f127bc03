#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eis/case_study.hpp"
#include "eis/eis_driver.hpp"
#include "eis/toy_games.hpp"
#include "test_support.hpp"

using namespace eis;

namespace {

/// Model that reproduces a tabulated reference exactly, including its
/// Boltzmann policy target.
class ReferenceModel final : public Model {
 public:
  ReferenceModel(const GridChainGame& game, const Reference& reference, double tau,
                 double value_offset = 0.0)
      : game_(game), reference_(reference), tau_(tau), offset_(value_offset) {}

  double value(const GameState& s) const override {
    return reference_.v_star[game_.state_index(s)] + offset_;
  }
  Distribution policy(const GameState& s) const override {
    const std::size_t i = game_.state_index(s);
    return boltzmann_policy(reference_.q_star[i], tau_, s.player);
  }

 private:
  const GridChainGame& game_;
  const Reference& reference_;
  double tau_;
  double offset_;
};

GridChainSpec small_spec() {
  GridChainSpec spec;
  spec.states_per_player = 4;
  spec.jumps = {0, 1};
  spec.gamma = 0.6;
  spec.reward_seed = 2024;
  return spec;
}

EISConfig small_config() {
  EISConfig cfg;
  cfg.tau = 0.5;
  cfg.rho = 0.6;
  cfg.iterations = 3;
  cfg.improvement = ImprovementKind::mcts;
  cfg.exploration = ExplorationKind::uniform;
  cfg.overrides.depth = 3;
  cfg.overrides.simulations = 40;
  cfg.overrides.cell_diameter = 0.25;  // aligns with the 4-state grids
  cfg.overrides.min_per_cell = 1;
  cfg.seed = 5;
  cfg.record_wall_time = false;
  return cfg;
}

}  // namespace

TEST_CASE("model evaluation against a tabulated reference") {
  const GridChainGame game(small_spec());
  const Reference reference = make_reference(tabulate(game), brute_force_solve(game));
  const double tau = 0.5;

  SUBCASE("the reference itself scores zero everywhere") {
    const ReferenceModel model(game, reference, tau);
    const ModelEvaluation eval = evaluate_model(model, reference, tau);
    CHECK(eval.sup_value_error == doctest::Approx(0.0));
    CHECK(eval.mean_value_error == doctest::Approx(0.0));
    CHECK(eval.max_policy_kl == doctest::Approx(0.0));
  }
  SUBCASE("a constant offset moves sup and mean by exactly that offset") {
    const ReferenceModel model(game, reference, tau, 0.375);
    const ModelEvaluation eval = evaluate_model(model, reference, tau);
    CHECK(eval.sup_value_error == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(eval.mean_value_error == doctest::Approx(0.375).epsilon(1e-12));
  }
  SUBCASE("tabulated errors match an independent loop") {
    Rng rng(3);
    std::vector<double> noisy = reference.v_star;
    for (double& v : noisy) v += rng.uniform(-0.5, 0.5);
    const FunctionModel model(
        [&](const GameState& s) { return noisy[game.state_index(s)]; }, 2);
    double sup = 0.0, total = 0.0;
    for (std::size_t i = 0; i < reference.states.size(); ++i) {
      const double diff = std::abs(noisy[i] - reference.v_star[i]);
      sup = std::max(sup, diff);
      total += diff;
    }
    const ModelEvaluation eval = evaluate_model(model, reference, tau);
    CHECK(eval.sup_value_error == doctest::Approx(sup).epsilon(1e-12));
    CHECK(eval.mean_value_error ==
          doctest::Approx(total / reference.states.size()).epsilon(1e-12));
  }
}

TEST_CASE("zero iterations return the initial model untouched") {
  const GridChainGame game(small_spec());
  EISConfig cfg = small_config();
  cfg.iterations = 0;
  const EISResult result = eis_run(game, std::nullopt, cfg);
  CHECK(result.reports.empty());
  CHECK(result.total_transitions == 0);
  for (const GameState& s : game.enumerate_states()) {
    CHECK(result.final_model->value(s) == doctest::Approx(0.0));
    const Distribution pi = result.final_model->policy(s);
    CHECK(pi[0] == doctest::Approx(0.5));
  }
}

TEST_CASE("a short run improves on the initial model and accounts samples") {
  const GridChainGame game(small_spec());
  const Reference reference = make_reference(tabulate(game), brute_force_solve(game));
  const EISConfig cfg = small_config();
  const EISResult result = eis_run(game, reference, cfg);

  REQUIRE(result.reports.size() == 3);
  double initial_error = 0.0;
  for (double v : reference.v_star) initial_error = std::max(initial_error, std::abs(v));
  CHECK(result.reports.back().sup_value_error < initial_error);
  CHECK(result.reports.back().sup_value_error <= result.reports.front().sup_value_error);

  std::int64_t total = 0;
  for (const IterationReport& r : result.reports) {
    CHECK(r.cell_count == 8);
    CHECK(r.states_collected > 0);
    CHECK(r.samples_used > 0);
    total += r.samples_used;
  }
  CHECK(total == result.total_transitions);
}

TEST_CASE("identical config and seed reproduce bitwise-identical reports") {
  const GridChainGame game(small_spec());
  const Reference reference = make_reference(tabulate(game), brute_force_solve(game));
  const EISConfig cfg = small_config();

  const EISResult a = eis_run(game, reference, cfg);
  const EISResult b = eis_run(game, reference, cfg);
  CHECK(reports_to_csv(a.reports) == reports_to_csv(b.reports));
  for (const GameState& s : game.enumerate_states()) {
    CHECK(a.final_model->value(s) == b.final_model->value(s));
  }
}

TEST_CASE("unreachable cells exhaust the exploration budget without failing the run") {
  GridChainSpec spec = small_spec();
  spec.states_per_player = 2;
  const GridChainGame game(spec);
  EISConfig cfg = small_config();
  cfg.iterations = 1;
  cfg.exploration = ExplorationKind::boltzmann;  // trajectory visits grid points only
  cfg.overrides.cell_diameter = 0.1;             // most cells hold no grid point
  const EISResult result = eis_run(game, std::nullopt, cfg);
  REQUIRE(result.reports.size() == 1);
  CHECK(result.reports[0].flags.find("exploration_budget") != std::string::npos);
  // the fit still covers the whole space through inherited cells
  CHECK(std::isfinite(result.final_model->value(make_state(0.99, Player::p1))));
}

TEST_CASE("configuration validation") {
  const GridChainGame game(small_spec());
  EISConfig cfg = small_config();
  cfg.tau = 0.0;
  CHECK_THROWS_AS(eis_run(game, std::nullopt, cfg), std::invalid_argument);

  EISConfig mismatch = small_config();
  mismatch.improvement = ImprovementKind::mcts;
  const FiniteNoiseGame stochastic;
  CHECK_THROWS_AS(eis_run(stochastic, std::nullopt, mismatch), std::invalid_argument);
}
