#include "wfnas/optim.hpp"

#include "wfnas/binarize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

namespace wfnas {

double lr_at(const LrSchedule& schedule, std::int64_t t) {
  if (t < 1) throw Error("lr_at: step index must be >= 1, got " + std::to_string(t));
  switch (schedule.kind) {
    case LrSchedule::Kind::constant:
      return schedule.value;
    case LrSchedule::Kind::inverse:
      return schedule.value / static_cast<double>(t);
  }
  throw Error("lr_at: unknown schedule");
}

void TrainConfig::validate(std::size_t train_size) const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(m_hard) || !positive(m_soft)) throw Error("train config: m_hard and m_soft must be positive");
  if (epochs < 1) throw Error("train config: epochs must be positive");
  if (batch_size < 1) throw Error("train config: batch_size must be positive");
  if (train_size == 0) throw Error("train config: empty training set");
  if (static_cast<std::size_t>(batch_size) > train_size) {
    throw Error("train config: batch_size " + std::to_string(batch_size) + " exceeds training-set size " +
                std::to_string(train_size));
  }
  if (!(lr.value >= 0.0) || !std::isfinite(lr.value)) throw Error("train config: learning rate must be >= 0");
  if (lr.kind == LrSchedule::Kind::inverse && lr.value <= 0.0) throw Error("train config: inverse schedule needs c > 0");
  if (!positive(init_scale) || !positive(real_init_scale)) throw Error("train config: init scales must be positive");
  if (!std::isfinite(init_mean)) throw Error("train config: init_mean must be finite");
  if (!(real_lr >= 0.0) || !std::isfinite(real_lr)) throw Error("train config: real_lr must be >= 0");
}

double TrainTrace::final_loss() const {
  if (points.empty()) throw Error("trace is empty");
  return points.back().loss;
}

void TrainTrace::write_csv(std::ostream& os) const {
  const auto old_precision = os.precision(17);
  os << "step,loss,residual_norm,elapsed_seconds\n";
  for (const auto& p : points) {
    os << p.step << ',' << p.loss << ',';
    if (p.residual_norm) os << *p.residual_norm;
    os << ',' << p.elapsed_seconds << '\n';
  }
  os.precision(old_precision);
}

VectorXd initial_binary_weights(Index d, const TrainConfig& config, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(config.init_mean, config.init_scale);
  VectorXd w(d);
  for (Index i = 0; i < d; ++i) w(i) = normal(rng);
  return w;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Per-epoch shuffled partition of the training set into minibatches.
class BatchSchedule {
 public:
  BatchSchedule(std::size_t n, int batch_size) : order_(n), batch_size_(static_cast<std::size_t>(batch_size)) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
  }

  void shuffle(std::mt19937_64& rng) { std::shuffle(order_.begin(), order_.end(), rng); }
  std::size_t batches() const { return (order_.size() + batch_size_ - 1) / batch_size_; }
  std::span<const std::size_t> batch(std::size_t b) const {
    const std::size_t begin = b * batch_size_;
    const std::size_t end = std::min(order_.size(), begin + batch_size_);
    return std::span<const std::size_t>(order_).subspan(begin, end - begin);
  }

 private:
  std::vector<std::size_t> order_;
  std::size_t batch_size_;
};

void gather(const ExampleSet& set, std::span<const std::size_t> rows, MatrixXd& inputs, std::vector<int>& labels) {
  inputs.resize(set.inputs.rows(), static_cast<Index>(rows.size()));
  labels.resize(rows.size());
  for (std::size_t c = 0; c < rows.size(); ++c) {
    inputs.col(static_cast<Index>(c)) = set.inputs.col(static_cast<Index>(rows[c]));
    labels[c] = set.labels[rows[c]];
  }
}

void check_finite_loss(double loss, std::int64_t t) {
  if (!std::isfinite(loss)) throw Error("training diverged: non-finite loss at step " + std::to_string(t));
}

bool wants_log(const std::vector<std::int64_t>& log_steps, std::int64_t t) {
  return std::binary_search(log_steps.begin(), log_steps.end(), t);
}

}  // namespace

template <ScoreModel Model>
BinaryRun train_binary(const Model& model, const ExampleSet& train, const TrainConfig& config,
                       const StepObserver& observer) {
  config.validate(train.size());
  std::vector<std::int64_t> log_steps = config.log_steps;
  std::sort(log_steps.begin(), log_steps.end());

  const Index d = weight_count(train.width());
  std::mt19937_64 rng(config.seed);
  VectorXd w = initial_binary_weights(d, config, rng);
  BatchSchedule schedule(train.size(), config.batch_size);

  const auto start = Clock::now();
  BinaryRun run;
  auto record = [&](std::int64_t t, int epoch) {
    const double loss = mean_loss(model, soft_binarize(w, config.m_hard), train);
    check_finite_loss(loss, t);
    run.trace.points.push_back({t, epoch, loss, std::nullopt, seconds_since(start)});
  };
  record(0, 0);

  MatrixXd batch_inputs;
  std::vector<int> batch_labels;
  VectorXd grad;
  VectorXd w_before;
  std::int64_t t = 0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    schedule.shuffle(rng);
    for (std::size_t b = 0; b < schedule.batches(); ++b) {
      ++t;
      const auto rows = schedule.batch(b);
      gather(train, rows, batch_inputs, batch_labels);
      const double eta = lr_at(config.lr, t);
      const VectorXd v = soft_binarize(w, config.m_hard);
      const double loss = model.loss_grad(v, batch_inputs, batch_labels, grad);
      check_finite_loss(loss, t);
      if (observer) w_before = w;
      w = w - eta * grad.cwiseProduct(soft_binarize_deriv(w, config.m_soft));
      if (observer) observer(StepInfo{t, w_before, w, rows, eta});
      if (wants_log(log_steps, t)) record(t, epoch);
    }
    if (!wants_log(log_steps, t)) record(t, epoch);
  }
  run.mask = hard_binarize(w);
  run.weights = std::move(w);
  return run;
}

template BinaryRun train_binary(const TwoLayerNetwork<double>&, const ExampleSet&, const TrainConfig&,
                                const StepObserver&);
template BinaryRun train_binary(const LinearSurrogate<double>&, const ExampleSet&, const TrainConfig&,
                                const StepObserver&);

BinaryRun train_binary(const ExampleSet& train, const TrainConfig& config, const StepObserver& observer) {
  return train_binary(TwoLayerNetwork<double>{}, train, config, observer);
}

RealRun train_real_nonneg(const ExampleSet& train, const TrainConfig& config, const std::optional<BinaryMask>& mask) {
  config.validate(train.size());
  const Index d = weight_count(train.width());
  if (mask && mask->size() != d) throw Error("train_real_nonneg: mask length does not match weight count");
  const VectorXd keep = mask ? mask->as_weights() : VectorXd::Ones(d);
  const LrSchedule lr{config.lr.kind, config.real_lr};
  const TwoLayerNetwork<double> model;

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, config.real_init_scale);
  VectorXd u(d);
  for (Index i = 0; i < d; ++i) u(i) = normal(rng);
  BatchSchedule schedule(train.size(), config.batch_size);

  auto effective = [&] { return VectorXd(u.cwiseProduct(u).cwiseProduct(keep)); };
  const auto start = Clock::now();
  RealRun run;
  auto record = [&](std::int64_t t, int epoch) {
    const double loss = mean_loss(model, effective(), train);
    check_finite_loss(loss, t);
    run.trace.points.push_back({t, epoch, loss, std::nullopt, seconds_since(start)});
  };
  record(0, 0);

  MatrixXd batch_inputs;
  std::vector<int> batch_labels;
  VectorXd grad;
  std::int64_t t = 0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    schedule.shuffle(rng);
    for (std::size_t b = 0; b < schedule.batches(); ++b) {
      ++t;
      gather(train, schedule.batch(b), batch_inputs, batch_labels);
      const double loss = model.loss_grad(effective(), batch_inputs, batch_labels, grad);
      check_finite_loss(loss, t);
      // d f(u^2 * m) / du = 2 u * m * grad_w f
      u = u - lr_at(lr, t) * (2.0 * u.cwiseProduct(keep).cwiseProduct(grad));
    }
    record(t, epoch);
  }
  run.weights = effective();
  return run;
}

}  // namespace wfnas
