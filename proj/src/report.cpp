#include "eis/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eis {

namespace {

const char* kHeader = "l,H,m,h,K,N,n_l,samples,sup_err,mean_err,max_kl,wall_ms";

void append_double(std::string& out, double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

double parse_double(std::string_view token) {
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw std::runtime_error("report parse: bad numeric field");
  }
  return v;
}

std::int64_t parse_int(std::string_view token) {
  std::int64_t v = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw std::runtime_error("report parse: bad integer field");
  }
  return v;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace

std::string reports_to_csv(std::span<const IterationReport> reports) {
  std::string out = kHeader;
  out += '\n';
  for (const IterationReport& r : reports) {
    out += std::to_string(r.iteration);
    out += ',';
    out += std::to_string(r.depth);
    out += ',';
    out += std::to_string(r.simulations);
    out += ',';
    append_double(out, r.cell_diameter);
    out += ',';
    out += std::to_string(r.min_per_cell);
    out += ',';
    out += std::to_string(r.cell_count);
    out += ',';
    out += std::to_string(r.states_collected);
    out += ',';
    out += std::to_string(r.samples_used);
    out += ',';
    append_double(out, r.sup_value_error);
    out += ',';
    append_double(out, r.mean_value_error);
    out += ',';
    append_double(out, r.max_policy_kl);
    out += ',';
    out += std::to_string(r.wall_ms);
    out += '\n';
  }
  return out;
}

void export_reports(std::span<const IterationReport> reports,
                    const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("export_reports: cannot open " + path.string());
  file << reports_to_csv(reports);
  if (!file) throw std::runtime_error("export_reports: write failed");
}

std::vector<IterationReport> parse_reports(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("parse_reports: cannot open " + path.string());
  std::string line;
  if (!std::getline(file, line) || line != kHeader) {
    throw std::runtime_error("parse_reports: missing or unexpected header");
  }
  std::vector<IterationReport> reports;
  while (std::getline(file, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 12) {
      throw std::runtime_error("parse_reports: wrong field count");
    }
    IterationReport r;
    r.iteration = static_cast<int>(parse_int(fields[0]));
    r.depth = static_cast<int>(parse_int(fields[1]));
    r.simulations = parse_int(fields[2]);
    r.cell_diameter = parse_double(fields[3]);
    r.min_per_cell = static_cast<int>(parse_int(fields[4]));
    r.cell_count = parse_int(fields[5]);
    r.states_collected = parse_int(fields[6]);
    r.samples_used = parse_int(fields[7]);
    r.sup_value_error = parse_double(fields[8]);
    r.mean_value_error = parse_double(fields[9]);
    r.max_policy_kl = parse_double(fields[10]);
    r.wall_ms = parse_int(fields[11]);
    reports.push_back(std::move(r));
  }
  return reports;
}

namespace {

constexpr double kWidth = 640.0, kHeight = 400.0;
constexpr double kMarginLeft = 60.0, kMarginRight = 20.0;
constexpr double kMarginTop = 20.0, kMarginBottom = 40.0;

double x_pixel(double iteration, double lo, double hi) {
  const double span = hi > lo ? hi - lo : 1.0;
  return kMarginLeft + (iteration - lo) / span * (kWidth - kMarginLeft - kMarginRight);
}

double y_pixel(double value, double lo, double hi) {
  const double span = hi > lo ? hi - lo : 1.0;
  return kMarginTop + (1.0 - (value - lo) / span) * (kHeight - kMarginTop - kMarginBottom);
}

void append_polyline(std::string& svg, std::span<const IterationReport> reports,
                     bool use_max, double x_lo, double x_hi, double y_lo, double y_hi,
                     const char* id, const char* color) {
  svg += "  <polyline id=\"";
  svg += id;
  svg += "\" fill=\"none\" stroke=\"";
  svg += color;
  svg += "\" stroke-width=\"1.5\" points=\"";
  bool first = true;
  for (const IterationReport& r : reports) {
    const double value = use_max ? r.sup_value_error : r.mean_value_error;
    if (!std::isfinite(value)) continue;
    if (!first) svg += ' ';
    first = false;
    append_double(svg, x_pixel(r.iteration, x_lo, x_hi));
    svg += ',';
    append_double(svg, y_pixel(value, y_lo, y_hi));
  }
  svg += "\"/>\n";
}

}  // namespace

std::string error_curves_svg(std::span<const IterationReport> reports) {
  double x_lo = 1.0, x_hi = 1.0, y_lo = 0.0, y_hi = 0.0;
  bool have_data = false;
  for (const IterationReport& r : reports) {
    for (const double v : {r.mean_value_error, r.sup_value_error}) {
      if (!std::isfinite(v)) continue;
      if (!have_data) {
        x_lo = x_hi = r.iteration;
        y_lo = y_hi = v;
        have_data = true;
      } else {
        x_lo = std::min(x_lo, static_cast<double>(r.iteration));
        x_hi = std::max(x_hi, static_cast<double>(r.iteration));
        y_lo = std::min(y_lo, v);
        y_hi = std::max(y_hi, v);
      }
    }
  }
  y_lo = std::min(y_lo, 0.0);

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 400\">\n";
  svg += "  <rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  // axes
  svg += "  <line x1=\"60\" y1=\"20\" x2=\"60\" y2=\"360\" stroke=\"black\"/>\n";
  svg += "  <line x1=\"60\" y1=\"360\" x2=\"620\" y2=\"360\" stroke=\"black\"/>\n";
  if (have_data) {
    constexpr int kTicks = 5;
    for (int t = 0; t <= kTicks; ++t) {
      const double frac = static_cast<double>(t) / kTicks;
      const double xv = x_lo + frac * (x_hi - x_lo);
      const double yv = y_lo + frac * (y_hi - y_lo);
      const double xp = x_pixel(xv, x_lo, x_hi);
      const double yp = y_pixel(yv, y_lo, y_hi);
      svg += "  <line x1=\"";
      append_double(svg, xp);
      svg += "\" y1=\"360\" x2=\"";
      append_double(svg, xp);
      svg += "\" y2=\"365\" stroke=\"black\"/>\n  <text x=\"";
      append_double(svg, xp);
      svg += "\" y=\"378\" font-size=\"10\" text-anchor=\"middle\">";
      append_double(svg, xv);
      svg += "</text>\n  <line x1=\"55\" y1=\"";
      append_double(svg, yp);
      svg += "\" x2=\"60\" y2=\"";
      append_double(svg, yp);
      svg += "\" stroke=\"black\"/>\n  <text x=\"50\" y=\"";
      append_double(svg, yp + 3.0);
      svg += "\" font-size=\"10\" text-anchor=\"end\">";
      append_double(svg, yv);
      svg += "</text>\n";
    }
    append_polyline(svg, reports, false, x_lo, x_hi, y_lo, y_hi, "mean", "#1f77b4");
    append_polyline(svg, reports, true, x_lo, x_hi, y_lo, y_hi, "max", "#d62728");
  }
  svg += "  <text x=\"340\" y=\"395\" font-size=\"11\" text-anchor=\"middle\">iteration</text>\n";
  svg += "  <text x=\"15\" y=\"190\" font-size=\"11\" transform=\"rotate(-90 15 190)\" "
         "text-anchor=\"middle\">error</text>\n";
  svg += "</svg>\n";
  return svg;
}

void plot_error_curves(std::span<const IterationReport> reports,
                       const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("plot_error_curves: cannot open " + path.string());
  file << error_curves_svg(reports);
  if (!file) throw std::runtime_error("plot_error_curves: write failed");
}

}  // namespace eis
