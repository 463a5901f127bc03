#include "eis/metrics.hpp"

#include <algorithm>
#include <limits>

namespace eis {

namespace {

constexpr double kDistributionSumTolerance = 1e-9;
constexpr double kCheckTolerance = 1e-12;

}  // namespace

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw std::invalid_argument("Distribution: empty probability vector");
  }
  double total = 0.0;
  for (double& p : probs_) {
    if (!std::isfinite(p) || p < -kCheckTolerance) {
      throw std::domain_error("Distribution: negative or non-finite entry");
    }
    p = std::max(p, 0.0);
    total += p;
  }
  if (std::abs(total - 1.0) > kDistributionSumTolerance) {
    throw std::domain_error("Distribution: probabilities do not sum to 1");
  }
}

Distribution Distribution::uniform(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Distribution::uniform: n == 0");
  return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

KlResult kl_divergence(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("kl_divergence: size mismatch");
  }
  KlResult result;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;  // 0 log 0 = 0
    if (q[i] == 0.0) {
      result.infinite = true;
      result.value = std::numeric_limits<double>::infinity();
      return result;
    }
    result.value += p[i] * std::log(p[i] / q[i]);
  }
  result.value = std::max(result.value, 0.0);
  return result;
}

double total_variation(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("total_variation: size mismatch");
  }
  double l1 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) l1 += std::abs(p[i] - q[i]);
  return 0.5 * l1;
}

bool check_pinsker(const Distribution& p, const Distribution& q) {
  const KlResult kl = kl_divergence(p, q);
  if (kl.infinite) return true;  // TV <= 1 < inf
  return total_variation(p, q) <= std::sqrt(kl.value / 2.0) + kCheckTolerance;
}

bool check_reverse_pinsker(const Distribution& p, const Distribution& q) {
  double alpha = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < q.size(); ++i) alpha = std::min(alpha, q[i]);
  if (alpha <= 0.0) {
    throw std::domain_error("check_reverse_pinsker: q must have full support");
  }
  const KlResult kl = kl_divergence(p, q);
  return total_variation(p, q) >= std::sqrt(alpha * kl.value / 2.0) - kCheckTolerance;
}

bool check_log_sum(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("check_log_sum: size mismatch");
  }
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0.0 || b[i] < 0.0) {
      throw std::domain_error("check_log_sum: negative entry");
    }
    sum_a += a[i];
    sum_b += b[i];
  }
  double rhs = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    if (b[i] == 0.0) return true;  // rhs term is +inf
    rhs += a[i] * std::log(a[i] / b[i]);
  }
  if (sum_a == 0.0) return true;  // lhs = 0 <= rhs (rhs = 0 here)
  if (sum_b == 0.0) return true;  // already returned above; kept for clarity
  const double lhs = sum_a * std::log(sum_a / sum_b);
  return lhs <= rhs + kCheckTolerance;
}

bool check_max_diff(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) {
    throw std::invalid_argument("check_max_diff: size mismatch or empty");
  }
  double max_x = x[0], min_x = x[0], max_y = y[0], min_y = y[0], gap = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    max_x = std::max(max_x, x[i]);
    min_x = std::min(min_x, x[i]);
    max_y = std::max(max_y, y[i]);
    min_y = std::min(min_y, y[i]);
    gap = std::max(gap, std::abs(x[i] - y[i]));
  }
  return std::abs(max_x - max_y) <= gap + kCheckTolerance &&
         std::abs(min_x - min_y) <= gap + kCheckTolerance;
}

}  // namespace eis
