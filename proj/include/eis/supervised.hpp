#pragma once

#include <filesystem>
#include <functional>
#include <memory>

#include "eis/model.hpp"

namespace eis {

struct RepresentativenessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Cover of the player regions by axis-aligned grid cells of l-infinity
/// diameter at most h. locate() is total and deterministic: coordinates
/// outside every cell snap to the nearest cell of the state's player.
class Partition {
 public:
  Partition(std::vector<Region> regions, double h);

  double cell_diameter() const { return h_; }
  std::size_t size() const { return total_cells_; }  // N(h)
  const std::vector<Region>& regions() const { return regions_; }

  std::size_t locate(const GameState& s) const;
  std::vector<double> cell_center(std::size_t cell) const;
  /// Per-axis [lower, upper] bounds of a cell.
  std::pair<std::vector<double>, std::vector<double>> cell_bounds(std::size_t cell) const;
  Player cell_player(std::size_t cell) const;

 private:
  struct RegionGrid {
    std::size_t offset = 0;             // first cell index
    std::vector<std::size_t> counts;    // cells per axis
    std::vector<double> sides;          // cell side per axis
    std::size_t cells = 0;
  };

  std::pair<std::size_t, std::size_t> split(std::size_t cell) const;  // (region, local)

  std::vector<Region> regions_;
  std::vector<RegionGrid> grids_;
  double h_ = 0.0;
  std::size_t total_cells_ = 0;
};

Partition build_partition(std::vector<Region> regions, double h);

/// One improvement-module output attached to the state it was queried at.
struct TrainingDatum {
  GameState state;
  double v_hat = 0.0;
  Distribution pi_hat;
};

/// True iff every cell of the partition holds at least K of the samples.
bool is_representative(std::span<const GameState> samples, const Partition& partition,
                       int min_per_cell);

/// Piecewise-constant cell-average fit of value and policy labels.
class NearestNeighborModel final : public Model {
 public:
  double value(const GameState& s) const override;
  Distribution policy(const GameState& s) const override;

  const Partition& partition() const { return *partition_; }
  std::size_t action_count() const { return action_count_; }
  std::span<const int> cell_counts() const { return counts_; }
  /// Cells that held no samples and inherited the nearest nonempty cell's fit.
  std::span<const std::uint8_t> inherited_flags() const { return inherited_; }
  double cell_value(std::size_t cell) const { return values_[cell]; }
  std::span<const double> cell_policy(std::size_t cell) const;

  void save(const std::filesystem::path& path) const;
  static NearestNeighborModel load(const std::filesystem::path& path);

 private:
  friend NearestNeighborModel nn_fit(std::span<const TrainingDatum>, Partition,
                                     std::size_t, bool);
  NearestNeighborModel() = default;

  std::shared_ptr<const Partition> partition_;
  std::size_t action_count_ = 0;
  std::vector<double> values_;        // per cell
  std::vector<double> policies_;      // per cell, action_count entries each
  std::vector<int> counts_;           // samples per cell
  std::vector<std::uint8_t> inherited_;
};

/// Per-cell arithmetic mean of the value labels and of each action
/// probability, renormalized against float drift. In strict mode an empty
/// cell raises RepresentativenessError; otherwise empty cells inherit the
/// nearest nonempty cell's fit (center distance, lowest index ties) and are
/// flagged.
NearestNeighborModel nn_fit(std::span<const TrainingDatum> data, Partition partition,
                            std::size_t action_count, bool strict);

/// Cell lookup: the stored (value, policy) pair of the located cell.
std::pair<double, Distribution> nn_predict(const NearestNeighborModel& model,
                                           const GameState& s);

struct KnnParameters {
  double cell_diameter = 0.0;  // h
  int min_per_cell = 0;        // K
  std::size_t cell_count = 0;  // N(h)
  bool diameter_clamped = false;
};

/// Representativeness parameters for a target training error xi:
/// h = min(xi / L_v, sqrt(xi/2) / L_p) floored at h_min, and
/// K = ceil(max(v_max^2/(2 xi^2) log(4 v_max N / xi), (1/xi) log(4 N / xi)))
/// with N = cell_counter(h).
KnnParameters knn_parameters(double xi, double v_max, double lipschitz_v,
                             double lipschitz_p, double h_min,
                             const std::function<std::size_t(double)>& cell_counter);

/// Iteration-l schedule: knn_parameters at xi = v_max * rho^l / 4.
KnnParameters knn_schedule(int iteration, double rho, double v_max, double lipschitz_v,
                           double lipschitz_p, double h_min,
                           const std::function<std::size_t(double)>& cell_counter);

}  // namespace eis
