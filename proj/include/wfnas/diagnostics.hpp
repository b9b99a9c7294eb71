// Empirical checks of the relaxed-SGD convergence theory: gradient-norm
// estimates, residuals between the relaxed and exact updates, convergence
// studies over (m_hard, m_soft), and the 1/t rate bound.
#ifndef WFNAS_DIAGNOSTICS_HPP
#define WFNAS_DIAGNOSTICS_HPP

#include "wfnas/binarize.hpp"
#include "wfnas/model.hpp"
#include "wfnas/optim.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace wfnas {

struct GEstimate {
  double g_hat = 0.0;
  std::size_t samples = 0;
};

/// Largest ||grad f(v, z)|| over n_samples draws of v ~ U[0,1]^d and z uniform
/// from the set. A lower estimate of the true bound G.
template <ScoreModel Model>
GEstimate estimate_G(const Model& model, const ExampleSet& set, std::size_t n_samples, std::uint64_t seed) {
  if (set.empty()) throw Error("estimate_G: empty example set");
  if (n_samples == 0) throw Error("estimate_G: need at least one sample");
  const Index d = weight_count(set.width());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, set.size() - 1);
  GEstimate out;
  VectorXd v(d);
  VectorXd grad;
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (Index i = 0; i < d; ++i) v(i) = unit(rng);
    const std::size_t z = pick(rng);
    const int label[1] = {set.labels[z]};
    model.loss_grad(v, set.inputs.col(static_cast<Index>(z)), label, grad);
    out.g_hat = std::max(out.g_hat, grad.norm());
  }
  out.samples = n_samples;
  return out;
}

GEstimate estimate_G(const ExampleSet& set, std::size_t n_samples, std::uint64_t seed);

/// C = 1 + m_hard * m_soft / 16.
double lemma2_constant(double m_hard, double m_soft);

struct ResidualRecord {
  std::int64_t t = 0;
  double residual_norm_sq = 0.0;
  double bound = 0.0;  // G^2 C^2
  double eta_t = 0.0;
  double grad_norm_sq = 0.0;  // ||grad f(v_t, z)||^2 at the step
};

/// r = (v_t - v_next) / eta - grad f(v_t, z) with v = B_{m_hard}(w).
template <ScoreModel Model>
VectorXd extract_residual(const Model& model, const VectorXd& w_t, const VectorXd& w_next, const Example& z,
                          double eta, double m_hard, VectorXd* grad_out = nullptr) {
  if (eta == 0.0) throw Error("extract_residual: zero learning rate");
  const VectorXd v_t = soft_binarize(w_t, m_hard);
  const VectorXd v_next = soft_binarize(w_next, m_hard);
  VectorXd grad;
  const int label[1] = {z.y};
  model.loss_grad(v_t, z.x, label, grad);
  VectorXd r = (v_t - v_next) / eta - grad;
  if (grad_out) *grad_out = std::move(grad);
  return r;
}

/// Collects residual records from a batch_size = 1 training run via the
/// trainer's step observer.
template <ScoreModel Model>
class ResidualRecorder {
 public:
  ResidualRecorder(const Model& model, const ExampleSet& train, const TrainConfig& config, double bound)
      : model_(model), train_(train), m_hard_(config.m_hard), bound_(bound) {
    if (config.batch_size != 1) throw Error("residual extraction needs batch_size = 1");
  }

  StepObserver observer() {
    return [this](const StepInfo& step) {
      if (step.batch.size() != 1) throw Error("residual extraction needs single-example steps");
      VectorXd grad;
      const VectorXd r = extract_residual(model_, step.w_before, step.w_after, train_.at(step.batch[0]), step.eta,
                                          m_hard_, &grad);
      records_.push_back({step.t, r.squaredNorm(), bound_, step.eta, grad.squaredNorm()});
      running_sum_ = running_sum_.size() == 0 ? r : VectorXd(running_sum_ + r);
    };
  }

  const std::vector<ResidualRecord>& records() const { return records_; }
  /// Per-coordinate mean of the residual vectors seen so far.
  VectorXd mean_residual() const {
    return records_.empty() ? VectorXd() : VectorXd(running_sum_ / static_cast<double>(records_.size()));
  }

 private:
  const Model& model_;
  const ExampleSet& train_;
  double m_hard_;
  double bound_;
  std::vector<ResidualRecord> records_;
  VectorXd running_sum_;
};

/// Fraction of records with residual_norm_sq <= bound.
double fraction_within_bound(const std::vector<ResidualRecord>& records);

struct ResidualStudy {
  GEstimate g;
  double inflation = 1.0;
  double big_c = 0.0;
  double bound = 0.0;  // (inflation * g_hat)^2 C^2
  std::vector<ResidualRecord> records;
  VectorXd mean_residual;
  double fraction_within = 0.0;
  double max_norm_sq = 0.0;
  double max_grad_norm = 0.0;       // largest ||grad f(v_t, z)|| met along the run
  double fraction_stepwise = 0.0;   // steps with ||r|| <= C ||grad f(v_t, z)||
};

/// Trains the two-layer network with single-example steps and records every
/// residual against the bound built from a sampled, inflated G estimate.
ResidualStudy residual_study(const ExampleSet& train, const TrainConfig& config, std::size_t g_samples,
                             double inflation);

struct EnvelopePoint {
  int epoch = 0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

struct ConvergenceCell {
  double m_hard = 0.0;
  double m_soft = 0.0;
  std::vector<TrainTrace> traces;  // one per seed
  std::vector<EnvelopePoint> envelope;

  std::vector<double> final_losses() const;
};

/// Median and quartile loss per epoch across traces that log once per epoch.
std::vector<EnvelopePoint> loss_envelope(const std::vector<TrainTrace>& traces);

/// Trains every (m_hard, m_soft) cell with seeds config.seed + i, i < n_seeds.
std::vector<ConvergenceCell> convergence_study(const ExampleSet& train,
                                               const std::vector<std::pair<double, double>>& grid,
                                               const TrainConfig& config, int n_seeds);

/// The default grid: m_hard in {5, 50} with m_soft = m_hard / 10 and m_soft = m_hard.
std::vector<std::pair<double, double>> default_convergence_grid();

/// G^2 c (1 + C^2) / 2 * (1 + log T) / T.
double rate_bound(double g, double c, double big_c, std::int64_t t);

struct RateRow {
  std::int64_t t = 0;
  double gap = 0.0;          // F(w^T) - F*
  double best_gap = 0.0;     // min_{s <= T} F(w^s) - F*, over logged points
  double bound = 0.0;
  bool violated = false;     // gap > bound
};

/// Builds the gap-vs-bound table from (T, F(w^T)) points; T = 0 entries are skipped.
std::vector<RateRow> rate_curve(const std::vector<std::pair<std::int64_t, double>>& losses, double c, double g,
                                double big_c, double f_star);

/// Exact infimum of the linear surrogate's F over the unit cube.
double linear_surrogate_infimum(const ExampleSet& train);

struct RateStudy {
  double g = 0.0;
  double c = 0.0;
  double big_c = 0.0;
  double f_star = 0.0;
  std::vector<std::vector<RateRow>> runs;  // one table per seed
  std::vector<RateRow> median;             // per-T medians of gap and best_gap
};

/// Trains the linear surrogate under the inverse schedule c/t for n_seeds
/// seeds, logging at config.log_steps, and tabulates gaps against the bound.
RateStudy rate_study(const ExampleSet& train, const TrainConfig& config, int n_seeds, std::size_t g_samples);

void write_residuals_csv(std::ostream& os, const std::vector<ResidualRecord>& records);
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceCell>& cells);
void write_rate_csv(std::ostream& os, const std::vector<RateRow>& rows);

}  // namespace wfnas

#endif  // WFNAS_DIAGNOSTICS_HPP
