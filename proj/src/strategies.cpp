#include "wfnas/strategies.hpp"

#include "wfnas/binarize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

namespace wfnas {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

StrategyResult make_result(Strategy s, std::uint64_t seed) {
  StrategyResult r;
  r.strategy = s;
  r.seed = seed;
  return r;
}

BinaryMask support(const VectorXd& w) {
  BinaryMask::Bits bits = (w.array() > 0.0).cast<std::uint8_t>();
  return BinaryMask(std::move(bits));
}

StrategyResult mask_result(Strategy s, std::uint64_t seed, const ThresholdSearch& search, double seconds) {
  StrategyResult r = make_result(s, seed);
  r.mask = search.mask;
  r.train_loss = search.loss;
  r.percentile = search.percentile;
  r.wall_clock_seconds = seconds;
  return r;
}

}  // namespace

const std::array<Strategy, 10>& all_strategies() {
  static const std::array<Strategy, 10> all{Strategy::real,   Strategy::real_to_bin,   Strategy::lottery,
                                            Strategy::lottery_to_bin, Strategy::bin, Strategy::bin_to_real,
                                            Strategy::random, Strategy::random_to_bin, Strategy::agnostic,
                                            Strategy::agnostic_to_real};
  return all;
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::real: return "real";
    case Strategy::real_to_bin: return "real->bin";
    case Strategy::lottery: return "lottery";
    case Strategy::lottery_to_bin: return "lottery->bin";
    case Strategy::bin: return "bin";
    case Strategy::bin_to_real: return "bin->real";
    case Strategy::random: return "random";
    case Strategy::random_to_bin: return "random->bin";
    case Strategy::agnostic: return "agnostic";
    case Strategy::agnostic_to_real: return "agnostic->real";
  }
  throw Error("unknown strategy");
}

Strategy strategy_from_string(const std::string& name) {
  for (Strategy s : all_strategies()) {
    if (to_string(s) == name) return s;
  }
  throw Error("unknown strategy '" + name + "'");
}

Strategy base_strategy(Strategy s) {
  switch (s) {
    case Strategy::real_to_bin: return Strategy::real;
    case Strategy::lottery_to_bin: return Strategy::lottery;
    case Strategy::bin_to_real: return Strategy::bin;
    case Strategy::random_to_bin: return Strategy::random;
    case Strategy::agnostic_to_real: return Strategy::agnostic;
    default: return s;
  }
}

VectorXd StrategyResult::effective_weights() const {
  validate();
  return real_weights ? *real_weights : mask->as_weights();
}

void StrategyResult::validate() const {
  if (!mask && !real_weights) throw Error("strategy result '" + to_string(strategy) + "' has neither mask nor weights");
}

std::array<double, 10> percentile_thresholds(const Eigen::Ref<const VectorXd>& w) {
  if (w.size() == 0) throw Error("percentile_thresholds: empty weight vector");
  std::vector<double> sorted(w.data(), w.data() + w.size());
  std::sort(sorted.begin(), sorted.end());
  const auto d = static_cast<double>(sorted.size());
  std::array<double, 10> out{};
  for (std::size_t i = 0; i < kThresholdPercentiles.size(); ++i) {
    const double rank = std::ceil(kThresholdPercentiles[i] / 100.0 * d);
    const auto idx = static_cast<std::size_t>(std::max(1.0, rank)) - 1;
    out[i] = sorted[idx];
  }
  return out;
}

ThresholdSearch percentile_threshold_search(const Eigen::Ref<const VectorXd>& w, const WeightObjective& objective) {
  if ((w.array() < 0.0).any()) throw Error("percentile_threshold_search: weights must be nonnegative");
  const auto thresholds = percentile_thresholds(w);
  ThresholdSearch best;
  best.loss = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const VectorXd shifted = w.array() - thresholds[i];
    BinaryMask candidate = hard_binarize(shifted);
    const double loss = objective(candidate.as_weights());
    best.candidate_losses[i] = loss;
    if (loss <= best.loss) {
      best.loss = loss;
      best.mask = std::move(candidate);
      best.percentile = kThresholdPercentiles[i];
    }
  }
  return best;
}

ThresholdSearch percentile_threshold_search(const Eigen::Ref<const VectorXd>& w, const ExampleSet& eval) {
  if (eval.empty()) throw Error("percentile_threshold_search: empty evaluation set");
  return percentile_threshold_search(w, [&](const VectorXd& weights) { return batch_loss(weights, eval); });
}

StrategyPair run_real(const ExampleSet& train, const TrainConfig& config) {
  const auto start = Clock::now();
  RealRun trained = train_real_nonneg(train, config);
  StrategyResult real = make_result(Strategy::real, config.seed);
  real.train_loss = batch_loss(trained.weights, train);
  real.wall_clock_seconds = seconds_since(start);
  const ThresholdSearch search = percentile_threshold_search(trained.weights, train);
  real.real_weights = std::move(trained.weights);
  return {std::move(real), mask_result(Strategy::real_to_bin, config.seed, search, seconds_since(start))};
}

LotterySequence lottery_sequence(const ExampleSet& train, const TrainConfig& config, int rounds, bool retrain) {
  if (rounds < 1) throw Error("lottery: rounds must be >= 1");
  LotterySequence seq;
  seq.weights.push_back(train_real_nonneg(train, config).weights);
  seq.losses.push_back(batch_loss(seq.weights.back(), train));
  for (int t = 2; t <= rounds; ++t) {
    const VectorXd& previous = seq.weights.back();
    const ThresholdSearch search = percentile_threshold_search(previous, train);
    VectorXd next = previous.cwiseProduct(search.mask.as_weights());
    if (retrain) next = train_real_nonneg(train, config, support(next)).weights;
    seq.losses.push_back(batch_loss(next, train));
    seq.weights.push_back(std::move(next));
  }
  seq.best = static_cast<std::size_t>(std::min_element(seq.losses.begin(), seq.losses.end()) - seq.losses.begin());
  return seq;
}

StrategyPair run_lottery(const ExampleSet& train, const TrainConfig& config, int rounds, bool retrain) {
  const auto start = Clock::now();
  LotterySequence seq = lottery_sequence(train, config, rounds, retrain);
  StrategyResult lottery = make_result(Strategy::lottery, config.seed);
  lottery.train_loss = seq.losses[seq.best];
  lottery.wall_clock_seconds = seconds_since(start);
  const VectorXd& best = seq.weights[seq.best];

  // Binary variant: threshold the best model once more, restricted to its support.
  const ThresholdSearch search = percentile_threshold_search(best, train);
  const BinaryMask alive = support(best);
  ThresholdSearch restricted = search;
  restricted.mask = BinaryMask(BinaryMask::Bits(search.mask.bits().cwiseProduct(alive.bits())));
  restricted.loss = batch_loss(restricted.mask.as_weights(), train);
  lottery.real_weights = best;
  return {std::move(lottery), mask_result(Strategy::lottery_to_bin, config.seed, restricted, seconds_since(start))};
}

StrategyPair run_bin(const ExampleSet& train, const TrainConfig& config) {
  const auto start = Clock::now();
  BinaryRun searched = train_binary(train, config);
  StrategyResult bin = make_result(Strategy::bin, config.seed);
  bin.train_loss = batch_loss(searched.mask.as_weights(), train);
  bin.wall_clock_seconds = seconds_since(start);
  bin.mask = searched.mask;

  RealRun tuned = train_real_nonneg(train, config, searched.mask);
  StrategyResult bin_real = make_result(Strategy::bin_to_real, config.seed);
  bin_real.train_loss = batch_loss(tuned.weights, train);
  bin_real.real_weights = std::move(tuned.weights);
  bin_real.mask = std::move(searched.mask);
  bin_real.wall_clock_seconds = seconds_since(start);
  return {std::move(bin), std::move(bin_real)};
}

StrategyPair run_random(const ExampleSet& train, const TrainConfig& config) {
  const auto start = Clock::now();
  const Index d = weight_count(train.width());
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXd w(d);
  for (Index i = 0; i < d; ++i) {
    const double u = normal(rng);
    w(i) = u * u;
  }
  StrategyResult random = make_result(Strategy::random, config.seed);
  random.train_loss = batch_loss(w, train);
  random.wall_clock_seconds = seconds_since(start);
  const ThresholdSearch search = percentile_threshold_search(w, train);
  random.real_weights = std::move(w);
  return {std::move(random), mask_result(Strategy::random_to_bin, config.seed, search, seconds_since(start))};
}

StrategyPair run_agnostic(const ExampleSet& train, const TrainConfig& config, int n_architectures,
                          int n_shared_samples) {
  if (n_architectures < 1 || n_shared_samples < 1) throw Error("agnostic: sample counts must be >= 1");
  if (train.empty()) throw Error("agnostic: empty training set");
  const auto start = Clock::now();
  const Index d = weight_count(train.width());
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, kThresholdPercentiles.size() - 1);

  double best_loss = std::numeric_limits<double>::infinity();
  BinaryMask best_mask;
  double best_u0 = 0.0;
  VectorXd w(d);
  for (int a = 0; a < n_architectures; ++a) {
    for (Index i = 0; i < d; ++i) {
      const double u = normal(rng);
      w(i) = u * u;
    }
    const double xi = percentile_thresholds(w)[pick(rng)];
    const VectorXd shifted = w.array() - xi;
    const BinaryMask mask = hard_binarize(shifted);
    const VectorXd mask_weights = mask.as_weights();
    for (int s = 0; s < n_shared_samples; ++s) {
      const double u0 = normal(rng);
      const double loss = batch_loss(u0 * mask_weights, train);
      if (loss < best_loss) {
        best_loss = loss;
        best_mask = mask;
        best_u0 = u0;
      }
    }
  }
  const double seconds = seconds_since(start);
  StrategyResult agnostic = make_result(Strategy::agnostic, config.seed);
  agnostic.mask = best_mask;
  agnostic.train_loss = batch_loss(best_mask.as_weights(), train);
  agnostic.wall_clock_seconds = seconds;
  StrategyResult shared = make_result(Strategy::agnostic_to_real, config.seed);
  shared.real_weights = best_u0 * best_mask.as_weights();
  shared.mask = std::move(best_mask);
  shared.shared_weight = best_u0;
  shared.train_loss = best_loss;
  shared.wall_clock_seconds = seconds;
  return {std::move(agnostic), std::move(shared)};
}

StrategyPair run_strategy_pair(Strategy s, const ExampleSet& train, const TrainConfig& config,
                               const StrategyOptions& options) {
  switch (base_strategy(s)) {
    case Strategy::real: return run_real(train, config);
    case Strategy::lottery: return run_lottery(train, config, options.lottery_rounds, options.lottery_retrain);
    case Strategy::bin: return run_bin(train, config);
    case Strategy::random: return run_random(train, config);
    case Strategy::agnostic:
      return run_agnostic(train, config, options.agnostic_architectures, options.agnostic_shared_samples);
    default: break;
  }
  throw Error("run_strategy_pair: unknown strategy");
}

}  // namespace wfnas
