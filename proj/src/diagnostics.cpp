#include "wfnas/diagnostics.hpp"

#include "wfnas/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace wfnas {

GEstimate estimate_G(const ExampleSet& set, std::size_t n_samples, std::uint64_t seed) {
  return estimate_G(TwoLayerNetwork<double>{}, set, n_samples, seed);
}

double lemma2_constant(double m_hard, double m_soft) {
  if (!(m_hard > 0.0) || !(m_soft > 0.0)) throw Error("lemma2_constant: sharpness values must be positive");
  return 1.0 + m_hard * m_soft / 16.0;
}

double fraction_within_bound(const std::vector<ResidualRecord>& records) {
  if (records.empty()) return 1.0;
  const auto ok = std::count_if(records.begin(), records.end(),
                                [](const ResidualRecord& r) { return r.residual_norm_sq <= r.bound; });
  return static_cast<double>(ok) / static_cast<double>(records.size());
}

ResidualStudy residual_study(const ExampleSet& train, const TrainConfig& config, std::size_t g_samples,
                             double inflation) {
  if (!(inflation >= 1.0)) throw Error("residual_study: inflation must be >= 1");
  const TwoLayerNetwork<double> model;
  ResidualStudy study;
  study.g = estimate_G(model, train, g_samples, config.seed);
  study.inflation = inflation;
  study.big_c = lemma2_constant(config.m_hard, config.m_soft);
  const double g = inflation * study.g.g_hat;
  study.bound = g * g * study.big_c * study.big_c;
  ResidualRecorder recorder(model, train, config, study.bound);
  train_binary(model, train, config, recorder.observer());
  study.records = recorder.records();
  study.mean_residual = recorder.mean_residual();
  study.fraction_within = fraction_within_bound(study.records);
  std::size_t stepwise = 0;
  for (const auto& r : study.records) {
    study.max_norm_sq = std::max(study.max_norm_sq, r.residual_norm_sq);
    study.max_grad_norm = std::max(study.max_grad_norm, std::sqrt(r.grad_norm_sq));
    if (r.residual_norm_sq <= study.big_c * study.big_c * r.grad_norm_sq * (1.0 + 1e-12)) ++stepwise;
  }
  if (!study.records.empty()) {
    study.fraction_stepwise = static_cast<double>(stepwise) / static_cast<double>(study.records.size());
  }
  return study;
}

std::vector<double> ConvergenceCell::final_losses() const {
  std::vector<double> out;
  for (const auto& trace : traces) out.push_back(trace.final_loss());
  return out;
}

std::vector<EnvelopePoint> loss_envelope(const std::vector<TrainTrace>& traces) {
  if (traces.empty()) throw Error("loss_envelope: no traces");
  const std::size_t points = traces.front().points.size();
  for (const auto& trace : traces) {
    if (trace.points.size() != points) throw Error("loss_envelope: traces have different lengths");
  }
  std::vector<EnvelopePoint> out;
  std::vector<double> column(traces.size());
  for (std::size_t p = 0; p < points; ++p) {
    for (std::size_t s = 0; s < traces.size(); ++s) column[s] = traces[s].points[p].loss;
    out.push_back({traces.front().points[p].epoch, median(column), quantile(column, 0.25), quantile(column, 0.75)});
  }
  return out;
}

std::vector<std::pair<double, double>> default_convergence_grid() {
  return {{5.0, 0.5}, {5.0, 5.0}, {50.0, 5.0}, {50.0, 50.0}};
}

std::vector<ConvergenceCell> convergence_study(const ExampleSet& train,
                                               const std::vector<std::pair<double, double>>& grid,
                                               const TrainConfig& config, int n_seeds) {
  if (grid.empty()) throw Error("convergence_study: empty grid");
  if (n_seeds < 1) throw Error("convergence_study: need at least one seed");
  std::vector<ConvergenceCell> cells;
  for (const auto& [m_hard, m_soft] : grid) {
    ConvergenceCell cell;
    cell.m_hard = m_hard;
    cell.m_soft = m_soft;
    for (int i = 0; i < n_seeds; ++i) {
      TrainConfig run = config;
      run.m_hard = m_hard;
      run.m_soft = m_soft;
      run.seed = config.seed + static_cast<std::uint64_t>(i);
      run.log_steps.clear();
      cell.traces.push_back(train_binary(train, run).trace);
    }
    cell.envelope = loss_envelope(cell.traces);
    cells.push_back(std::move(cell));
  }
  return cells;
}

double rate_bound(double g, double c, double big_c, std::int64_t t) {
  if (t < 1) throw Error("rate_bound: T must be >= 1");
  const double td = static_cast<double>(t);
  return g * g * c * (1.0 + big_c * big_c) / 2.0 * (1.0 + std::log(td)) / td;
}

std::vector<RateRow> rate_curve(const std::vector<std::pair<std::int64_t, double>>& losses, double c, double g,
                                double big_c, double f_star) {
  if (!std::isfinite(f_star)) throw Error("rate_curve: F* estimate is required");
  std::vector<RateRow> rows;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [t, loss] : losses) {
    best = std::min(best, loss);
    if (t < 1) continue;
    RateRow row;
    row.t = t;
    row.gap = loss - f_star;
    row.best_gap = best - f_star;
    row.bound = rate_bound(g, c, big_c, t);
    row.violated = row.gap > row.bound;
    rows.push_back(row);
  }
  return rows;
}

double linear_surrogate_infimum(const ExampleSet& train) {
  if (train.empty()) throw Error("linear_surrogate_infimum: empty training set");
  const Index d = weight_count(train.width());
  VectorXd grad;
  LinearSurrogate<double>{}.loss_grad(VectorXd::Zero(d), train.inputs, train.labels, grad);
  return grad.cwiseMin(0.0).sum();
}

RateStudy rate_study(const ExampleSet& train, const TrainConfig& config, int n_seeds, std::size_t g_samples) {
  if (config.lr.kind != LrSchedule::Kind::inverse) throw Error("rate_study: needs the inverse schedule c/t");
  if (n_seeds < 1) throw Error("rate_study: need at least one seed");
  const LinearSurrogate<double> model;
  RateStudy study;
  study.g = estimate_G(model, train, g_samples, config.seed).g_hat;
  study.c = config.lr.value;
  study.big_c = lemma2_constant(config.m_hard, config.m_soft);
  study.f_star = linear_surrogate_infimum(train);
  for (int i = 0; i < n_seeds; ++i) {
    TrainConfig run = config;
    run.seed = config.seed + static_cast<std::uint64_t>(i);
    const TrainTrace trace = train_binary(model, train, run).trace;
    std::map<std::int64_t, double> by_step;
    for (const auto& p : trace.points) by_step[p.step] = p.loss;
    study.runs.push_back(
        rate_curve({by_step.begin(), by_step.end()}, study.c, study.g, study.big_c, study.f_star));
  }
  const std::size_t n_rows = study.runs.front().size();
  for (std::size_t k = 0; k < n_rows; ++k) {
    std::vector<double> gaps, best;
    for (const auto& run : study.runs) {
      gaps.push_back(run[k].gap);
      best.push_back(run[k].best_gap);
    }
    RateRow row = study.runs.front()[k];
    row.gap = median(gaps);
    row.best_gap = median(best);
    row.violated = row.gap > row.bound;
    study.median.push_back(row);
  }
  return study;
}

void write_residuals_csv(std::ostream& os, const std::vector<ResidualRecord>& records) {
  const auto precision = os.precision(17);
  os << "t,norm_sq,bound\n";
  for (const auto& r : records) os << r.t << ',' << r.residual_norm_sq << ',' << r.bound << '\n';
  os.precision(precision);
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceCell>& cells) {
  const auto precision = os.precision(17);
  os << "cell,epoch,median,q25,q75\n";
  for (const auto& cell : cells) {
    std::ostringstream name;
    name << "mhard=" << cell.m_hard << ";msoft=" << cell.m_soft;
    for (const auto& p : cell.envelope) {
      os << name.str() << ',' << p.epoch << ',' << p.median << ',' << p.q25 << ',' << p.q75 << '\n';
    }
  }
  os.precision(precision);
}

void write_rate_csv(std::ostream& os, const std::vector<RateRow>& rows) {
  const auto precision = os.precision(17);
  os << "T,gap,bound,best_gap,violated\n";
  for (const auto& r : rows) {
    os << r.t << ',' << r.gap << ',' << r.bound << ',' << r.best_gap << ',' << (r.violated ? 1 : 0) << '\n';
  }
  os.precision(precision);
}

}  // namespace wfnas
