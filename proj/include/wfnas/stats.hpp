// Order statistics, the rank AUC, and the Mann-Whitney test.
#ifndef WFNAS_STATS_HPP
#define WFNAS_STATS_HPP

#include <span>
#include <vector>

namespace wfnas {

/// Linearly interpolated quantile (the numpy default), q in [0, 1].
double quantile(std::span<const double> values, double q);
double median(std::span<const double> values);

/// Ranks (1-based) with ties assigned their average rank.
std::vector<double> average_ranks(std::span<const double> values);

/// P(score_pos > score_neg) + 0.5 P(equal), computed from rank sums.
double auc(std::span<const double> scores_pos, std::span<const double> scores_neg);

struct MannWhitney {
  double u = 0.0;        // U statistic of the first sample
  double p_value = 1.0;  // one-sided, alternative: first sample tends to be smaller
};

/// Normal approximation with tie and continuity corrections.
MannWhitney mann_whitney_less(std::span<const double> a, std::span<const double> b);

}  // namespace wfnas

#endif  // WFNAS_STATS_HPP
