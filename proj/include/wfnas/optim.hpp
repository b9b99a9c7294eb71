// Binary architecture search by relaxed SGD, and the nonnegative real-valued
// trainer used by the comparison strategies.
#ifndef WFNAS_OPTIM_HPP
#define WFNAS_OPTIM_HPP

#include "wfnas/model.hpp"
#include "wfnas/types.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace wfnas {

struct LrSchedule {
  enum class Kind { constant, inverse };
  Kind kind = Kind::constant;
  double value = 0.05;  // eta for constant, c for inverse (eta_t = c / t)

  static LrSchedule constant(double eta) { return {Kind::constant, eta}; }
  static LrSchedule inverse(double c) { return {Kind::inverse, c}; }
};

/// Learning rate at step t >= 1.
double lr_at(const LrSchedule& schedule, std::int64_t t);

struct TrainConfig {
  double m_hard = 50.0;
  double m_soft = 5.0;
  int epochs = 100;
  int batch_size = 10;
  LrSchedule lr = LrSchedule::constant(0.05);
  std::uint64_t seed = 0;
  // Initial unconstrained binary-search weights are N(init_mean, init_scale^2).
  double init_scale = 0.1;
  double init_mean = -0.15;
  // Real-valued trainers draw u ~ N(0, real_init_scale^2) and use w = u^2.
  double real_init_scale = 0.25;
  double real_lr = 0.5;
  // Steps (1-based) at which the full training loss is recorded in addition
  // to the per-epoch records.
  std::vector<std::int64_t> log_steps;

  /// Throws when a field is out of range or batch_size exceeds train_size.
  void validate(std::size_t train_size) const;
};

struct TracePoint {
  std::int64_t step = 0;  // number of SGD updates applied so far
  int epoch = 0;
  double loss = 0.0;      // objective on the full training set
  std::optional<double> residual_norm;
  double elapsed_seconds = 0.0;
};

struct TrainTrace {
  std::vector<TracePoint> points;

  double final_loss() const;
  /// CSV with columns step,loss,residual_norm,elapsed_seconds.
  void write_csv(std::ostream& os) const;
};

/// Passed to an observer after every SGD update.
struct StepInfo {
  std::int64_t t;  // 1-based step index
  const VectorXd& w_before;
  const VectorXd& w_after;
  std::span<const std::size_t> batch;  // indices into the training set
  double eta;
};
using StepObserver = std::function<void(const StepInfo&)>;

struct BinaryRun {
  VectorXd weights;  // final unconstrained w
  BinaryMask mask;   // hard_binarize(weights)
  TrainTrace trace;
};

struct RealRun {
  VectorXd weights;  // effective nonnegative weights u^2 (times the mask, if any)
  TrainTrace trace;
};

/// Relaxed SGD over unconstrained w: each step takes
///   v = B_{m_hard}(w),  g = mean_z grad f(v, z) * B'_{m_soft}(w),  w <- w - eta_t g.
/// The logged loss is the training objective at B_{m_hard}(w).
template <ScoreModel Model>
BinaryRun train_binary(const Model& model, const ExampleSet& train, const TrainConfig& config,
                       const StepObserver& observer = {});

BinaryRun train_binary(const ExampleSet& train, const TrainConfig& config, const StepObserver& observer = {});

/// SGD over u with w = u^2 (optionally times a fixed mask), so w >= 0 throughout.
RealRun train_real_nonneg(const ExampleSet& train, const TrainConfig& config,
                          const std::optional<BinaryMask>& mask = std::nullopt);

/// Initial unconstrained weights for train_binary, drawn from rng.
VectorXd initial_binary_weights(Index d, const TrainConfig& config, std::mt19937_64& rng);

}  // namespace wfnas

#endif  // WFNAS_OPTIM_HPP
