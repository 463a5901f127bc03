#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace eis {

/// Probability vector over a finite action set. Validated on construction:
/// entries nonnegative, total within 1e-9 of 1.
class Distribution {
 public:
  explicit Distribution(std::vector<double> probs);

  static Distribution uniform(std::size_t n);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

/// KL divergence result. An infinite divergence (support mismatch) is a
/// distinguished flag, never a silent float infinity fed into aggregates.
struct KlResult {
  double value = 0.0;
  bool infinite = false;
};

/// Sum p log(p/q) with the 0 log 0 = 0 convention; flags infinity when
/// p(a) > 0 while q(a) = 0. Throws invalid_argument on length mismatch.
KlResult kl_divergence(const Distribution& p, const Distribution& q);

/// Half the l1 distance; in [0, 1].
double total_variation(const Distribution& p, const Distribution& q);

/// TV <= sqrt(KL/2) + 1e-12.
bool check_pinsker(const Distribution& p, const Distribution& q);

/// TV >= sqrt(min_a q(a) * KL / 2) - 1e-12. Requires full-support q;
/// throws domain_error when q has a zero entry.
bool check_reverse_pinsker(const Distribution& p, const Distribution& q);

/// (sum a) log(sum a / sum b) <= sum a_i log(a_i/b_i) + 1e-12, with the
/// 0 log 0 = 0 convention. Entries must be nonnegative.
bool check_log_sum(std::span<const double> a, std::span<const double> b);

/// |max x - max y| and |min x - min y| both <= max_k |x_k - y_k| + 1e-12.
bool check_max_diff(std::span<const double> x, std::span<const double> y);

/// Max absolute difference of two scalar functions over an explicit finite
/// evaluation grid.
template <class Point, class F1, class F2>
double sup_error(F1&& v1, F2&& v2, std::span<const Point> eval_points) {
  double worst = 0.0;
  for (const Point& s : eval_points) {
    worst = std::max(worst, std::abs(v1(s) - v2(s)));
  }
  return worst;
}

/// Max over eval points of KL(pi(s) || reference(s)). The reference must
/// have full support at every point; an infinite KL is a domain error.
template <class Point, class F1, class F2>
double policy_error(F1&& pi, F2&& reference, std::span<const Point> eval_points) {
  double worst = 0.0;
  for (const Point& s : eval_points) {
    const KlResult kl = kl_divergence(pi(s), reference(s));
    if (kl.infinite) {
      throw std::domain_error("policy_error: reference lacks full support");
    }
    worst = std::max(worst, kl.value);
  }
  return worst;
}

}  // namespace eis
