#include "eis/supervised.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace eis {

Partition::Partition(std::vector<Region> regions, double h)
    : regions_(std::move(regions)), h_(h) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("Partition: h must be positive");
  }
  if (regions_.empty()) {
    throw std::invalid_argument("Partition: no regions");
  }
  grids_.resize(regions_.size());
  std::size_t offset = 0;
  for (std::size_t r = 0; r < regions_.size(); ++r) {
    regions_[r].validate();
    RegionGrid& grid = grids_[r];
    grid.offset = offset;
    grid.cells = 1;
    for (std::size_t axis = 0; axis < regions_[r].dimension(); ++axis) {
      const double length = regions_[r].upper[axis] - regions_[r].lower[axis];
      const auto count = static_cast<std::size_t>(std::ceil(length / h - 1e-12));
      grid.counts.push_back(std::max<std::size_t>(1, count));
      grid.sides.push_back(length / static_cast<double>(grid.counts.back()));
      grid.cells *= grid.counts.back();
    }
    offset += grid.cells;
  }
  total_cells_ = offset;
}

std::size_t Partition::locate(const GameState& s) const {
  for (std::size_t r = 0; r < regions_.size(); ++r) {
    if (regions_[r].player != s.player) continue;
    const Region& region = regions_[r];
    const RegionGrid& grid = grids_[r];
    if (s.coords.size() != region.dimension()) {
      throw std::invalid_argument("Partition::locate: dimension mismatch");
    }
    std::size_t index = 0;
    for (std::size_t axis = 0; axis < region.dimension(); ++axis) {
      const double offset = (s.coords[axis] - region.lower[axis]) / grid.sides[axis];
      const auto raw = static_cast<std::int64_t>(std::floor(offset));
      const auto axis_index = static_cast<std::size_t>(std::clamp<std::int64_t>(
          raw, 0, static_cast<std::int64_t>(grid.counts[axis]) - 1));
      index = index * grid.counts[axis] + axis_index;
    }
    return grid.offset + index;
  }
  throw std::invalid_argument("Partition::locate: no region for the state's player");
}

std::pair<std::size_t, std::size_t> Partition::split(std::size_t cell) const {
  if (cell >= total_cells_) {
    throw std::out_of_range("Partition: cell index out of range");
  }
  for (std::size_t r = 0; r < grids_.size(); ++r) {
    if (cell < grids_[r].offset + grids_[r].cells) {
      return {r, cell - grids_[r].offset};
    }
  }
  throw std::out_of_range("Partition: cell index out of range");
}

std::pair<std::vector<double>, std::vector<double>> Partition::cell_bounds(
    std::size_t cell) const {
  const auto [r, local_in] = split(cell);
  const Region& region = regions_[r];
  const RegionGrid& grid = grids_[r];
  std::size_t local = local_in;
  const std::size_t d = region.dimension();
  std::vector<double> lo(d), hi(d);
  for (std::size_t axis = d; axis-- > 0;) {
    const std::size_t axis_index = local % grid.counts[axis];
    local /= grid.counts[axis];
    lo[axis] = region.lower[axis] + static_cast<double>(axis_index) * grid.sides[axis];
    hi[axis] = lo[axis] + grid.sides[axis];
  }
  return {std::move(lo), std::move(hi)};
}

std::vector<double> Partition::cell_center(std::size_t cell) const {
  auto [lo, hi] = cell_bounds(cell);
  std::vector<double> center(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) center[i] = 0.5 * (lo[i] + hi[i]);
  return center;
}

Player Partition::cell_player(std::size_t cell) const {
  return regions_[split(cell).first].player;
}

Partition build_partition(std::vector<Region> regions, double h) {
  return Partition(std::move(regions), h);
}

bool is_representative(std::span<const GameState> samples, const Partition& partition,
                       int min_per_cell) {
  std::vector<int> counts(partition.size(), 0);
  for (const GameState& s : samples) counts[partition.locate(s)] += 1;
  return std::all_of(counts.begin(), counts.end(),
                     [min_per_cell](int c) { return c >= min_per_cell; });
}

double NearestNeighborModel::value(const GameState& s) const {
  return values_[partition_->locate(s)];
}

Distribution NearestNeighborModel::policy(const GameState& s) const {
  const auto row = cell_policy(partition_->locate(s));
  return Distribution(std::vector<double>(row.begin(), row.end()));
}

std::span<const double> NearestNeighborModel::cell_policy(std::size_t cell) const {
  return std::span<const double>(policies_).subspan(cell * action_count_, action_count_);
}

NearestNeighborModel nn_fit(std::span<const TrainingDatum> data, Partition partition,
                            std::size_t action_count, bool strict) {
  if (action_count == 0) {
    throw std::invalid_argument("nn_fit: action_count must be positive");
  }
  const std::size_t cells = partition.size();
  NearestNeighborModel model;
  model.partition_ = std::make_shared<const Partition>(std::move(partition));
  model.action_count_ = action_count;
  model.values_.assign(cells, 0.0);
  model.policies_.assign(cells * action_count, 0.0);
  model.counts_.assign(cells, 0);
  model.inherited_.assign(cells, 0);

  for (const TrainingDatum& d : data) {
    if (d.pi_hat.size() != action_count) {
      throw std::invalid_argument("nn_fit: policy label size mismatch");
    }
    const std::size_t cell = model.partition_->locate(d.state);
    model.counts_[cell] += 1;
    model.values_[cell] += d.v_hat;
    for (std::size_t a = 0; a < action_count; ++a) {
      model.policies_[cell * action_count + a] += d.pi_hat[a];
    }
  }

  std::vector<std::size_t> empty_cells;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (model.counts_[cell] == 0) {
      if (strict) {
        throw RepresentativenessError("nn_fit: empty cell in strict mode");
      }
      empty_cells.push_back(cell);
      continue;
    }
    const double n = static_cast<double>(model.counts_[cell]);
    model.values_[cell] /= n;
    double total = 0.0;
    for (std::size_t a = 0; a < action_count; ++a) {
      model.policies_[cell * action_count + a] /= n;
      total += model.policies_[cell * action_count + a];
    }
    // The mean of simplex points is on the simplex; this only corrects drift.
    for (std::size_t a = 0; a < action_count; ++a) {
      model.policies_[cell * action_count + a] /= total;
    }
  }

  if (!empty_cells.empty()) {
    if (empty_cells.size() == cells) {
      throw RepresentativenessError("nn_fit: no training data at all");
    }
    for (std::size_t cell : empty_cells) {
      const auto center = model.partition_->cell_center(cell);
      std::size_t donor = cells;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t other = 0; other < cells; ++other) {
        if (model.counts_[other] == 0) continue;
        const auto other_center = model.partition_->cell_center(other);
        double dist2 = 0.0;
        for (std::size_t i = 0; i < center.size() && i < other_center.size(); ++i) {
          const double d = center[i] - other_center[i];
          dist2 += d * d;
        }
        if (dist2 < best - 1e-15 || (std::abs(dist2 - best) <= 1e-15 && other < donor)) {
          best = dist2;
          donor = other;
        }
      }
      model.values_[cell] = model.values_[donor];
      for (std::size_t a = 0; a < action_count; ++a) {
        model.policies_[cell * action_count + a] =
            model.policies_[donor * action_count + a];
      }
      model.inherited_[cell] = 1;
    }
  }
  return model;
}

std::pair<double, Distribution> nn_predict(const NearestNeighborModel& model,
                                           const GameState& s) {
  return {model.value(s), model.policy(s)};
}

namespace {

void write_double(std::string& out, double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

double read_double(std::istream& in) {
  std::string token;
  if (!(in >> token)) throw std::runtime_error("model load: truncated file");
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc{}) throw std::runtime_error("model load: bad number");
  return v;
}

}  // namespace

void NearestNeighborModel::save(const std::filesystem::path& path) const {
  std::string out;
  out += "nn-model 1\n";
  out += "diameter ";
  write_double(out, partition_->cell_diameter());
  out += "\nactions " + std::to_string(action_count_);
  out += "\nregions " + std::to_string(partition_->regions().size());
  for (const Region& r : partition_->regions()) {
    out += "\nregion " + std::to_string(r.player == Player::p1 ? 1 : 2) + " " +
           std::to_string(r.dimension());
    for (std::size_t i = 0; i < r.dimension(); ++i) {
      out += ' ';
      write_double(out, r.lower[i]);
      out += ' ';
      write_double(out, r.upper[i]);
    }
  }
  out += "\ncells " + std::to_string(values_.size()) + "\n";
  for (std::size_t cell = 0; cell < values_.size(); ++cell) {
    auto [lo, hi] = partition_->cell_bounds(cell);
    out += std::to_string(cell);
    for (std::size_t i = 0; i < lo.size(); ++i) {
      out += ' ';
      write_double(out, lo[i]);
      out += ' ';
      write_double(out, hi[i]);
    }
    out += ' ' + std::to_string(counts_[cell]);
    out += ' ' + std::to_string(static_cast<int>(inherited_[cell]));
    out += ' ';
    write_double(out, values_[cell]);
    for (std::size_t a = 0; a < action_count_; ++a) {
      out += ' ';
      write_double(out, policies_[cell * action_count_ + a]);
    }
    out += '\n';
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("model save: cannot open " + path.string());
  file << out;
  if (!file) throw std::runtime_error("model save: write failed");
}

NearestNeighborModel NearestNeighborModel::load(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("model load: cannot open " + path.string());
  std::string tag;
  int version = 0;
  file >> tag >> version;
  if (tag != "nn-model" || version != 1) {
    throw std::runtime_error("model load: unrecognized header");
  }
  std::string key;
  file >> key;
  const double h = read_double(file);
  std::size_t action_count = 0, region_count = 0, cell_count = 0;
  file >> key >> action_count;
  file >> key >> region_count;
  std::vector<Region> regions(region_count);
  for (Region& r : regions) {
    std::size_t player = 0, dim = 0;
    file >> key >> player >> dim;
    r.player = player == 1 ? Player::p1 : Player::p2;
    r.lower.resize(dim);
    r.upper.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      r.lower[i] = read_double(file);
      r.upper[i] = read_double(file);
    }
  }
  file >> key >> cell_count;

  NearestNeighborModel model;
  model.partition_ = std::make_shared<const Partition>(std::move(regions), h);
  if (model.partition_->size() != cell_count) {
    throw std::runtime_error("model load: cell count mismatch");
  }
  model.action_count_ = action_count;
  model.values_.assign(cell_count, 0.0);
  model.policies_.assign(cell_count * action_count, 0.0);
  model.counts_.assign(cell_count, 0);
  model.inherited_.assign(cell_count, 0);
  for (std::size_t cell = 0; cell < cell_count; ++cell) {
    std::size_t index = 0;
    file >> index;
    if (index != cell) throw std::runtime_error("model load: out-of-order cell row");
    const std::size_t dim = model.partition_->cell_center(cell).size();
    for (std::size_t i = 0; i < 2 * dim; ++i) read_double(file);  // bounds, derivable
    int count = 0, inherited = 0;
    file >> count >> inherited;
    model.counts_[cell] = count;
    model.inherited_[cell] = static_cast<std::uint8_t>(inherited);
    model.values_[cell] = read_double(file);
    for (std::size_t a = 0; a < action_count; ++a) {
      model.policies_[cell * action_count + a] = read_double(file);
    }
  }
  if (!file) throw std::runtime_error("model load: truncated file");
  return model;
}

KnnParameters knn_parameters(double xi, double v_max, double lipschitz_v,
                             double lipschitz_p, double h_min,
                             const std::function<std::size_t(double)>& cell_counter) {
  if (!(xi > 0.0) || !(v_max > 0.0) || !(lipschitz_v > 0.0) || !(lipschitz_p > 0.0) ||
      !(h_min > 0.0)) {
    throw std::invalid_argument("knn_parameters: invalid parameters");
  }
  KnnParameters out;
  const double h_raw = std::min(xi / lipschitz_v, std::sqrt(xi / 2.0) / lipschitz_p);
  out.cell_diameter = std::max(h_raw, h_min);
  out.diameter_clamped = h_raw < h_min;
  out.cell_count = cell_counter(out.cell_diameter);
  const double n = static_cast<double>(out.cell_count);
  const double k_value =
      v_max * v_max / (2.0 * xi * xi) * std::log(4.0 * v_max * n / xi);
  const double k_policy = (1.0 / xi) * std::log(4.0 * n / xi);
  const double k_raw = std::ceil(std::max(k_value, k_policy));
  out.min_per_cell = std::max(1, static_cast<int>(std::min(
                                     k_raw, 2.0e9)));
  return out;
}

KnnParameters knn_schedule(int iteration, double rho, double v_max, double lipschitz_v,
                           double lipschitz_p, double h_min,
                           const std::function<std::size_t(double)>& cell_counter) {
  if (!(rho > 0.0 && rho < 1.0) || iteration < 0) {
    throw std::invalid_argument("knn_schedule: invalid parameters");
  }
  const double xi = v_max * std::pow(rho, iteration) / 4.0;
  return knn_parameters(xi, v_max, lipschitz_v, lipschitz_p, h_min, cell_counter);
}

}  // namespace eis
