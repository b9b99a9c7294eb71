// The five real/binary training-strategy pairs and the percentile threshold
// search they share.
#ifndef WFNAS_STRATEGIES_HPP
#define WFNAS_STRATEGIES_HPP

#include "wfnas/model.hpp"
#include "wfnas/optim.hpp"
#include "wfnas/types.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wfnas {

enum class Strategy {
  real,
  real_to_bin,
  lottery,
  lottery_to_bin,
  bin,
  bin_to_real,
  random,
  random_to_bin,
  agnostic,
  agnostic_to_real,
};

const std::array<Strategy, 10>& all_strategies();
/// Names use "->" for the arrow, e.g. "real->bin".
std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);
/// The strategy whose run also produces s (e.g. bin for bin->real).
Strategy base_strategy(Strategy s);

struct StrategyResult {
  Strategy strategy = Strategy::real;
  std::optional<BinaryMask> mask;
  std::optional<VectorXd> real_weights;
  double train_loss = 0.0;
  double wall_clock_seconds = 0.0;
  std::uint64_t seed = 0;
  std::optional<int> percentile;        // threshold chosen by a percentile search
  std::optional<double> shared_weight;  // u0 of the weight-agnostic network

  /// Weights the network is evaluated with: the real weights if present, else the mask.
  VectorXd effective_weights() const;
  /// Throws if neither a mask nor real weights are present.
  void validate() const;
};

struct StrategyOptions {
  int lottery_rounds = 10;
  bool lottery_retrain = false;  // retrain (masked) after each pruning round
  int agnostic_architectures = 64;
  int agnostic_shared_samples = 16;
};

inline constexpr std::array<int, 10> kThresholdPercentiles{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};

/// Nearest-rank percentiles of w's entries for kThresholdPercentiles.
std::array<double, 10> percentile_thresholds(const Eigen::Ref<const VectorXd>& w);

struct ThresholdSearch {
  BinaryMask mask;
  int percentile = 100;
  double loss = 0.0;
  std::array<double, 10> candidate_losses{};
};

using WeightObjective = std::function<double(const VectorXd& weights)>;

/// Evaluates the masks B_inf(w - xi) for the ten percentile thresholds xi and
/// keeps the one with the smallest objective; ties go to the larger percentile.
ThresholdSearch percentile_threshold_search(const Eigen::Ref<const VectorXd>& w, const WeightObjective& objective);
ThresholdSearch percentile_threshold_search(const Eigen::Ref<const VectorXd>& w, const ExampleSet& eval);

using StrategyPair = std::pair<StrategyResult, StrategyResult>;

StrategyPair run_real(const ExampleSet& train, const TrainConfig& config);
StrategyPair run_lottery(const ExampleSet& train, const TrainConfig& config, int rounds, bool retrain = false);
StrategyPair run_bin(const ExampleSet& train, const TrainConfig& config);
StrategyPair run_random(const ExampleSet& train, const TrainConfig& config);
StrategyPair run_agnostic(const ExampleSet& train, const TrainConfig& config, int n_architectures,
                          int n_shared_samples);

/// Runs the pair that contains s and returns both results.
StrategyPair run_strategy_pair(Strategy s, const ExampleSet& train, const TrainConfig& config,
                               const StrategyOptions& options = {});

/// Every sequence element of a lottery run, for inspection.
struct LotterySequence {
  std::vector<VectorXd> weights;
  std::vector<double> losses;
  std::size_t best = 0;
};
LotterySequence lottery_sequence(const ExampleSet& train, const TrainConfig& config, int rounds, bool retrain = false);

}  // namespace wfnas

#endif  // WFNAS_STRATEGIES_HPP
