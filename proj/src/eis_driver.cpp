#include "eis/eis_driver.hpp"

#include <chrono>
#include <cmath>

namespace eis {

namespace {

// rng stream tags; one derived stream per (role, iteration).
constexpr std::uint64_t kStreamExplore = 0x45780000;
constexpr std::uint64_t kStreamImprove = 0x49500000;
constexpr std::uint64_t kStreamPretrial = 0x50520000;

std::int64_t coverage_budget(const Partition& partition, int min_per_cell,
                             const EISConfig& cfg, Rng& rng) {
  // Pre-run estimate of the representative-set coverage time under uniform
  // sampling over this partition, then the e * B * log(L / delta) envelope.
  const double n = static_cast<double>(partition.size());
  const std::int64_t pretrial_cap = static_cast<std::int64_t>(
      50.0 * min_per_cell * n * (std::log(n + 1.0) + 2.0) + 100.0);
  UniformSampler sampler(partition.regions());
  const CoverageEstimate estimate = coverage_time_estimate(
      sampler, partition, min_per_cell, cfg.coverage_pretrials, pretrial_cap, rng);
  const double b_hat = estimate.successes > 0
                           ? estimate.mean
                           : static_cast<double>(pretrial_cap);
  const double envelope = std::exp(1.0) * b_hat *
                          std::log(static_cast<double>(cfg.iterations) /
                                   cfg.exploration_delta);
  const double floor = n * static_cast<double>(min_per_cell);
  return static_cast<std::int64_t>(std::ceil(std::max(envelope, floor)));
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const std::string& f : flags) {
    if (!out.empty()) out += ';';
    out += f;
  }
  return out;
}

}  // namespace

void EISConfig::validate(const GameDynamics& game) const {
  if (!(tau > 0.0)) throw std::invalid_argument("EISConfig: tau must be positive");
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("EISConfig: rho outside (0, 1)");
  if (iterations < 0) throw std::invalid_argument("EISConfig: negative iteration count");
  if (sparse_width < 1) throw std::invalid_argument("EISConfig: sparse width must be >= 1");
  if (!(h_min > 0.0)) throw std::invalid_argument("EISConfig: h_min must be positive");
  if (improvement == ImprovementKind::mcts && !game.is_deterministic()) {
    throw std::invalid_argument(
        "EISConfig: the search improvement oracle needs deterministic dynamics");
  }
}

EISResult eis_run(const GameDynamics& game, const std::optional<Reference>& reference,
                  const EISConfig& config) {
  config.validate(game);
  const CountingGame counted(game);
  const std::vector<Region>& regions = counted.state_regions();
  GameState probe;
  probe.player = regions.front().player;
  probe.coords = regions.front().lower;
  const std::size_t action_count = counted.action_set(probe).size();
  const double v_max = counted.value_bound();

  EISResult result;
  std::shared_ptr<const Model> current =
      std::make_shared<ConstantModel>(0.0, action_count);
  const Rng root_rng(config.seed);

  for (int l = 1; l <= config.iterations; ++l) {
    const auto started = std::chrono::steady_clock::now();
    const std::int64_t transitions_before = counted.transitions();
    std::vector<std::string> flags;

    // schedules
    const auto cell_counter = [&regions](double h) {
      return build_partition(regions, h).size();
    };
    KnnParameters knn;
    if (config.overrides.cell_diameter && config.overrides.min_per_cell) {
      knn.cell_diameter = *config.overrides.cell_diameter;
      knn.min_per_cell = *config.overrides.min_per_cell;
      knn.cell_count = cell_counter(knn.cell_diameter);
    } else {
      knn = knn_schedule(l, config.rho, v_max, config.lipschitz_v, config.lipschitz_p,
                         config.h_min, cell_counter);
      if (config.overrides.cell_diameter) {
        knn.cell_diameter = *config.overrides.cell_diameter;
        knn.cell_count = cell_counter(knn.cell_diameter);
      }
      if (config.overrides.min_per_cell) knn.min_per_cell = *config.overrides.min_per_cell;
      if (knn.diameter_clamped) flags.push_back("h_clamped");
    }

    int depth = 0;
    std::int64_t per_action_samples = 0;  // m for search, C for sparse sampling
    if (config.improvement == ImprovementKind::mcts) {
      depth = config.overrides.depth
                  ? *config.overrides.depth
                  : mcts_depth_schedule(config.tau, config.rho, action_count,
                                        counted.gamma());
      if (config.overrides.simulations) {
        per_action_samples = *config.overrides.simulations;
      } else {
        const SimSchedule sims =
            mcts_sim_schedule(l, config.tau, config.rho, v_max, action_count,
                              config.c1, config.simulation_cap);
        per_action_samples = sims.simulations;
        if (sims.capped) flags.push_back("m_capped");
      }
    } else {
      depth = config.overrides.depth ? *config.overrides.depth : 2;
      per_action_samples = config.overrides.simulations ? *config.overrides.simulations
                                                        : config.sparse_width;
    }

    Partition partition = build_partition(regions, knn.cell_diameter);

    // exploration
    Rng pretrial_rng = root_rng.derive(kStreamPretrial + static_cast<std::uint64_t>(l));
    const std::int64_t budget =
        coverage_budget(partition, knn.min_per_cell, config, pretrial_rng);
    Rng explore_rng = root_rng.derive(kStreamExplore + static_cast<std::uint64_t>(l));
    std::unique_ptr<ExplorationPolicy> policy;
    if (config.exploration == ExplorationKind::uniform) {
      policy = std::make_unique<UniformSampler>(regions);
    } else {
      policy = std::make_unique<BoltzmannExplorer>(counted, *current, config.tau,
                                                   config.trajectory_start);
    }
    ExplorationRun exploration = explore_until_representative(
        *policy, partition, knn.min_per_cell, budget, explore_rng);
    if (!exploration.success) flags.push_back("exploration_budget");

    // improvement against the immutable previous-model snapshot
    std::vector<TrainingDatum> data;
    data.reserve(exploration.samples.size());
    MCTSConfig search_cfg;
    if (config.improvement == ImprovementKind::mcts) {
      search_cfg.depth = depth;
      search_cfg.simulations = per_action_samples;
      search_cfg.eta = config.eta;
      search_cfg.ucb = config.ucb;
      search_cfg.value_clip = v_max;
    }
    const Rng improve_root = root_rng.derive(kStreamImprove + static_cast<std::uint64_t>(l));
    for (std::size_t i = 0; i < exploration.samples.size(); ++i) {
      Rng query_rng = improve_root.derive(i);
      const GameState& s = exploration.samples[i];
      ImprovementResult improved =
          config.improvement == ImprovementKind::mcts
              ? improvement_query(counted, *current, s, search_cfg, config.tau, query_rng)
              : sparse_sampling_query(counted, *current, s, depth,
                                      static_cast<int>(per_action_samples), config.tau,
                                      query_rng);
      data.push_back(TrainingDatum{s, improved.v_hat, std::move(improved.pi_hat)});
    }

    // supervise
    NearestNeighborModel fitted =
        nn_fit(data, std::move(partition), action_count, /*strict=*/false);
    current = std::make_shared<NearestNeighborModel>(std::move(fitted));

    IterationReport report;
    report.iteration = l;
    report.depth = depth;
    report.simulations = per_action_samples;
    report.cell_diameter = knn.cell_diameter;
    report.min_per_cell = knn.min_per_cell;
    report.cell_count = static_cast<std::int64_t>(knn.cell_count);
    report.states_collected = exploration.steps;
    report.samples_used = counted.transitions() - transitions_before;
    if (reference) {
      const ModelEvaluation eval = evaluate_model(*current, *reference, config.tau);
      report.sup_value_error = eval.sup_value_error;
      report.mean_value_error = eval.mean_value_error;
      report.max_policy_kl = eval.max_policy_kl;
    } else {
      report.sup_value_error = std::nan("");
      report.mean_value_error = std::nan("");
      report.max_policy_kl = std::nan("");
    }
    report.flags = join_flags(flags);
    if (config.record_wall_time) {
      report.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();
    }
    result.reports.push_back(std::move(report));
  }

  result.final_model = current;
  result.total_transitions = counted.transitions();
  return result;
}

ModelEvaluation evaluate_model(const Model& model, const Reference& reference,
                               double tau) {
  if (reference.states.size() != reference.v_star.size() ||
      reference.states.size() != reference.q_star.size()) {
    throw std::invalid_argument("evaluate_model: reference grid size mismatch");
  }
  const std::vector<Distribution> target =
      reference_boltzmann(reference.states, reference.q_star, tau);
  ModelEvaluation eval;
  double total = 0.0;
  for (std::size_t i = 0; i < reference.states.size(); ++i) {
    const double diff = std::abs(model.value(reference.states[i]) - reference.v_star[i]);
    eval.sup_value_error = std::max(eval.sup_value_error, diff);
    total += diff;
    const KlResult kl = kl_divergence(model.policy(reference.states[i]), target[i]);
    if (kl.infinite) {
      throw std::domain_error("evaluate_model: infinite policy divergence");
    }
    eval.max_policy_kl = std::max(eval.max_policy_kl, kl.value);
  }
  eval.mean_value_error = total / static_cast<double>(reference.states.size());
  return eval;
}

}  // namespace eis
