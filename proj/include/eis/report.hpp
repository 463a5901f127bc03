#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace eis {

/// Per-iteration accounting of one EIS run: schedule values, sample counts
/// and errors against the reference (NaN when no reference was supplied).
/// `flags` carries clamp/budget markers and is not part of the CSV columns.
struct IterationReport {
  int iteration = 0;            // l
  int depth = 0;                // H
  std::int64_t simulations = 0; // m (MCTS) or width C (sparse sampling)
  double cell_diameter = 0.0;   // h
  int min_per_cell = 0;         // K
  std::int64_t cell_count = 0;  // N(h)
  std::int64_t states_collected = 0;  // n_l
  std::int64_t samples_used = 0;      // sampled transitions this iteration
  double sup_value_error = 0.0;
  double mean_value_error = 0.0;
  double max_policy_kl = 0.0;
  std::int64_t wall_ms = 0;
  std::string flags;
};

/// CSV with header l,H,m,h,K,N,n_l,samples,sup_err,mean_err,max_kl,wall_ms.
/// '.' decimal separator, '\n' line endings, shortest exact float form.
std::string reports_to_csv(std::span<const IterationReport> reports);
void export_reports(std::span<const IterationReport> reports,
                    const std::filesystem::path& path);
std::vector<IterationReport> parse_reports(const std::filesystem::path& path);

/// Dependency-light SVG line plot of mean and max error against iteration:
/// fixed 640x400 viewBox, axis ticks, one polyline per series.
std::string error_curves_svg(std::span<const IterationReport> reports);
void plot_error_curves(std::span<const IterationReport> reports,
                       const std::filesystem::path& path);

}  // namespace eis
