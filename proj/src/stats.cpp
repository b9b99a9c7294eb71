#include "wfnas/stats.hpp"

#include "wfnas/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wfnas {

double quantile(std::span<const double> values, double q) {
  if (values.empty()) throw Error("quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw Error("quantile: q outside [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double median(std::span<const double> values) { return quantile(values, 0.5); }

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

namespace {

std::vector<double> concat(std::span<const double> a, std::span<const double> b) {
  std::vector<double> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  return all;
}

double rank_sum_u(const std::vector<double>& ranks, std::size_t n_first) {
  const double r = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(n_first), 0.0);
  const double n = static_cast<double>(n_first);
  return r - n * (n + 1.0) / 2.0;
}

}  // namespace

double auc(std::span<const double> scores_pos, std::span<const double> scores_neg) {
  if (scores_pos.empty() || scores_neg.empty()) throw Error("auc: both classes need at least one score");
  const auto ranks = average_ranks(concat(scores_pos, scores_neg));
  const double u = rank_sum_u(ranks, scores_pos.size());
  return u / (static_cast<double>(scores_pos.size()) * static_cast<double>(scores_neg.size()));
}

MannWhitney mann_whitney_less(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error("mann_whitney_less: empty sample");
  const auto all = concat(a, b);
  const auto ranks = average_ranks(all);
  MannWhitney out;
  out.u = rank_sum_u(ranks, a.size());

  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double n = n1 + n2;
  std::vector<double> sorted = all;
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  const double sigma = std::sqrt(n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0))));
  if (sigma == 0.0) {
    out.p_value = 1.0;
    return out;
  }
  const double z = (out.u - n1 * n2 / 2.0 + 0.5) / sigma;
  out.p_value = 0.5 * std::erfc(-z / std::sqrt(2.0));
  return out;
}

}  // namespace wfnas
