// Acceptance report: one PASS/FAIL line per criterion. Criteria passed with
// --known-failure still print FAIL but do not affect the exit status.
#include "wfnas/binarize.hpp"
#include "wfnas/data.hpp"
#include "wfnas/diagnostics.hpp"
#include "wfnas/model.hpp"
#include "wfnas/optim.hpp"
#include "wfnas/spectral.hpp"
#include "wfnas/stats.hpp"
#include "wfnas/strategies.hpp"

#include <CLI11.hpp>
#include <Eigen/LU>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

using namespace wfnas;
namespace fs = std::filesystem;

namespace {

const std::string kMnist = std::string(WFNAS_DATA_DIR) + "/mnist_5k.csv.gz";

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream ss;
  ss << std::setprecision(precision) << v;
  return ss.str();
}

void info(const std::string& text) { std::cout << "      info: " << text << '\n'; }

const ProcessedDataset& mnist() {
  static const ProcessedDataset data = preprocess_mnist(load_mnist_csv(kMnist));
  return data;
}

Task figure2_task() { return build_task(mnist(), {"1", "2", "3"}, {"4", "5", "6"}, 100, 50, 0); }

// 1 -------------------------------------------------------------------------
Outcome gradient_correctness() {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  const double h = 1e-6;
  double worst = 0.0;
  int draws = 0;
  for (const Index width : {2, 4, 8}) {
    for (int trial = 0; trial < 100; ++trial) {
      const Index d = weight_count(width);
      VectorXd w(d);
      for (Index i = 0; i < d; ++i) w(i) = 0.5 * normal(rng);
      VectorXd x(width);
      for (Index i = 0; i < width; ++i) x(i) = normal(rng);
      x.normalize();
      const Example z(x, coin(rng) ? 1 : 0);
      const VectorXd g = loss_grad(w, z);
      VectorXd fd(d);
      for (Index i = 0; i < d; ++i) {
        VectorXd up = w, down = w;
        up(i) += h;
        down(i) -= h;
        fd(i) = (example_loss(up, z) - example_loss(down, z)) / (2 * h);
      }
      const double scale = std::max({g.norm(), fd.norm(), 1e-12});
      worst = std::max(worst, (g - fd).norm() / scale);
      ++draws;
    }
  }
  return {worst < 1e-5, "max relative error " + fmt(worst) + " over " + std::to_string(draws) +
                            " draws at I in {2,4,8} (tolerance 1e-5)"};
}

// 2 -------------------------------------------------------------------------
Outcome binarization_suite() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> wdist(-2.0, 2.0);
  std::uniform_real_distribution<double> mdist(0.5, 100.0);
  std::vector<std::string> failures;

  double symmetry = 0.0;
  bool monotone = true;
  double identity = 0.0;
  double fd_worst = 0.0;
  double max_ratio = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double m = mdist(rng);
    VectorXd w(8);
    for (Index i = 0; i < w.size(); ++i) w(i) = wdist(rng);
    const VectorXd v = soft_binarize(w, m);
    const VectorXd vn = soft_binarize(VectorXd(-w), m);
    symmetry = std::max(symmetry, (vn.array() - (1.0 - v.array())).abs().maxCoeff());
    for (Index i = 0; i < w.size(); ++i) {
      for (Index j = 0; j < w.size(); ++j) {
        if (w(i) < w(j) && !(v(i) <= v(j))) monotone = false;
      }
    }
    const VectorXd dv = soft_binarize_deriv(w, m);
    identity = std::max(identity, (dv.array() - m * v.array() * (1.0 - v.array())).abs().maxCoeff());
    max_ratio = std::max(max_ratio, dv.maxCoeff() / (m / 4.0));
    // Finite differences away from saturation, where the derivative is resolvable.
    const double w0 = wdist(rng) / m * 4.0;
    const double h = 1e-6 / m;
    const double fd = (soft_binarize(Vector<double>::Constant(1, w0 + h), m)(0) -
                       soft_binarize(Vector<double>::Constant(1, w0 - h), m)(0)) /
                      (2 * h);
    const double an = soft_binarize_deriv(Vector<double>::Constant(1, w0), m)(0);
    fd_worst = std::max(fd_worst, std::abs(fd - an) / an);
  }
  // Strict monotonicity where the logistic is not saturated.
  const VectorXd ramp = VectorXd::LinSpaced(201, -1.0, 1.0);
  const VectorXd vr = soft_binarize(ramp, 5.0);
  for (Index i = 1; i < ramp.size(); ++i) {
    if (!(vr(i) > vr(i - 1))) monotone = false;
  }
  const double at_zero_50 = soft_binarize_deriv(VectorXd::Zero(1), 50.0)(0);
  const double at_zero_5 = soft_binarize_deriv(VectorXd::Zero(1), 5.0)(0);
  VectorXd tie(3);
  tie << 0.3, -0.2, 0.0;
  const bool tie_ok = hard_binarize(tie).to_string() == "101";
  VectorXd extreme(2);
  extreme << -1e4 / 500.0, 1e4 / 500.0;
  const VectorXd ve = soft_binarize(extreme, 500.0);
  const bool finite_extremes = ve.allFinite() && ve(0) >= 0.0 && ve(1) <= 1.0;

  if (!(symmetry <= 1e-15)) failures.push_back("symmetry");
  if (!monotone) failures.push_back("monotonicity");
  if (!(identity <= 1e-12)) failures.push_back("derivative identity");
  if (!(at_zero_50 == 12.5 && at_zero_5 == 1.25 && max_ratio <= 1.0)) failures.push_back("derivative max");
  if (!tie_ok) failures.push_back("tie rule");
  if (!(fd_worst < 1e-5)) failures.push_back("finite differences");
  if (!finite_extremes) failures.push_back("overflow handling");
  std::string detail = "symmetry " + fmt(symmetry) + " (<=1e-15), derivative identity " + fmt(identity) +
                       ", deriv(0)=" + fmt(at_zero_50) + "/" + fmt(at_zero_5) + " for M=50/5, B_inf(0)=1 " +
                       (tie_ok ? "ok" : "broken") + ", derivative FD rel err " + fmt(fd_worst);
  for (const auto& f : failures) detail += "; failed: " + f;
  return {failures.empty(), detail};
}

// 3 -------------------------------------------------------------------------
ExampleSet toy_task(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  // Planted mask with both layers active.
  const VectorXd planted = BinaryMask::from_string("10111101").as_weights();
  const int n = 40;
  std::vector<VectorXd> xs;
  std::vector<double> scores;
  for (int i = 0; i < n; ++i) {
    VectorXd x(2);
    x << normal(rng), normal(rng);
    x.normalize();
    xs.push_back(x);
    scores.push_back(forward(planted, x));
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] < scores[b]; });
  std::vector<Example> examples;
  std::vector<int> labels(n, 0);
  for (int r = n / 2; r < n; ++r) labels[order[r]] = 1;
  for (int i = 0; i < n; ++i) examples.emplace_back(xs[i], labels[i]);
  return ExampleSet::from_examples(examples);
}

Outcome exhaustive_oracle() {
  const ExampleSet train = toy_task(3);
  std::vector<double> all_losses;
  for (int code = 0; code < 256; ++code) {
    VectorXd w(8);
    for (int b = 0; b < 8; ++b) w(b) = (code >> b) & 1;
    all_losses.push_back(batch_loss(w, train));
  }
  std::vector<double> sorted = all_losses;
  std::sort(sorted.begin(), sorted.end());
  const double decile = quantile(all_losses, 0.1);
  int hits = 0;
  std::string finals;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    TrainConfig config;
    config.m_hard = 50;
    config.m_soft = 5;
    config.epochs = 200;
    config.seed = seed;
    const BinaryRun run = train_binary(train, config);
    const double f = batch_loss(run.mask.as_weights(), train);
    const auto rank = std::lower_bound(sorted.begin(), sorted.end(), f - 1e-12) - sorted.begin() + 1;
    if (f <= decile) ++hits;
    finals += (finals.empty() ? "" : ",") + std::to_string(rank);
  }
  return {hits >= 8, std::to_string(hits) + "/10 seeds within the best decile (F <= " + fmt(decile) +
                         ", exhaustive min " + fmt(sorted.front()) + "); ranks of the found masks among 256: " +
                         finals};
}

// 4 -------------------------------------------------------------------------
Outcome lemma2_bound() {
  const Task task = figure2_task();
  TrainConfig config;
  config.batch_size = 1;
  config.epochs = 10;
  const ResidualStudy study = residual_study(task.train, config, 10000, 2.0);
  info("G estimate " + fmt(study.g.g_hat) + " from " + std::to_string(study.g.samples) +
       " samples of v ~ U[0,1]^d; largest gradient norm met along the run " + fmt(study.max_grad_norm));
  info("per-step check ||r|| <= C ||grad f(v_t, z)|| holds on " + fmt(100.0 * study.fraction_stepwise, 6) +
       "% of steps");
  info("mean residual over the run: norm " + fmt(study.mean_residual.norm()) + ", max |coordinate| " +
       fmt(study.mean_residual.cwiseAbs().maxCoeff()));
  return {study.fraction_within == 1.0 && !study.records.empty(),
          fmt(100.0 * study.fraction_within, 6) + "% of " + std::to_string(study.records.size()) +
              " residuals satisfy ||r||^2 <= (2G)^2 C^2 = " + fmt(study.bound) + " with C = " +
              fmt(study.big_c, 6) + "; largest ||r||^2 = " + fmt(study.max_norm_sq)};
}

// 5 -------------------------------------------------------------------------
Outcome theorem1_rate() {
  const Task task = figure2_task();
  TrainConfig config;
  config.lr = LrSchedule::inverse(10.0);
  config.epochs = 100;
  for (std::int64_t t = 10; t <= 6000; t *= 2) config.log_steps.push_back(t);
  const RateStudy study = rate_study(task.train, config, 10, 1000);
  bool ok = !study.median.empty();
  double worst_ratio = 0.0;
  std::size_t rows = 0;
  double last_best = 0.0;
  for (const auto& r : study.median) {
    if (r.t < 10) continue;
    ++rows;
    ok = ok && !r.violated;
    worst_ratio = std::max(worst_ratio, r.gap / r.bound);
    last_best = r.best_gap;
  }
  info("running-best median gap at the last T: " + fmt(last_best));
  return {ok && rows > 0, "median gap below the bound at all " + std::to_string(rows) +
                              " logged T >= 10 (T up to " + std::to_string(study.median.back().t) +
                              "), largest gap/bound " + fmt(worst_ratio) + "; c = " + fmt(study.c) +
                              ", G = " + fmt(study.g) + ", F* = " + fmt(study.f_star) + " (exact infimum)"};
}

// 6 -------------------------------------------------------------------------
Outcome figure2_ordering() {
  const Task task = figure2_task();
  TrainConfig config;
  const auto cells = convergence_study(task.train, default_convergence_grid(), config, 10);
  std::map<std::pair<double, double>, std::vector<double>> finals;
  for (const auto& cell : cells) finals[{cell.m_hard, cell.m_soft}] = cell.final_losses();
  const auto& low = finals.at({50.0, 5.0});
  const auto& high = finals.at({50.0, 50.0});
  const MannWhitney mw = mann_whitney_less(low, high);
  const auto& small_low = finals.at({5.0, 0.5});
  const auto& small_high = finals.at({5.0, 5.0});
  info("M_hard=5 (not asserted): median final loss " + fmt(median(small_low), 6) + " with M_soft=0.5, " +
       fmt(median(small_high), 6) + " with M_soft=5");
  const bool ordered = median(low) <= median(high);
  return {ordered && mw.p_value < 0.1, "M_hard=50: median final loss " + fmt(median(low), 6) + " (M_soft=5) vs " +
                                           fmt(median(high), 6) + " (M_soft=50), one-sided Mann-Whitney p = " +
                                           fmt(mw.p_value) + " (need ordering and p < 0.1)"};
}

// 7 and 9 -------------------------------------------------------------------
struct CliRuns {
  bool ran = false;
  std::string error;
  fs::path first, second;
};

CliRuns run_figure3_twice(const std::string& cli, const fs::path& workdir) {
  CliRuns runs;
  runs.first = workdir / "run1";
  runs.second = workdir / "run2";
  fs::remove_all(workdir);
  for (const auto& dir : {runs.first, runs.second}) {
    const std::string cmd = "\"" + cli + "\" reproduce-figure 3 --set data_path=" + kMnist +
                            " --set output_dir=" + dir.string() + " > " + (dir.string() + ".log") + " 2>&1";
    fs::create_directories(dir.parent_path());
    if (std::system(cmd.c_str()) != 0) {
      runs.error = "command failed: " + cmd;
      return runs;
    }
  }
  runs.ran = true;
  return runs;
}

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome figure3_properties(const CliRuns& runs) {
  if (!runs.ran) return {false, runs.error};
  std::ifstream in(runs.first / "results.csv");
  std::string line;
  std::getline(in, line);
  std::map<std::string, std::vector<double>> aucs;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) cols.push_back(item);
    if (cols.size() < 4 || cols[2] != "150") continue;
    aucs[cols[0]].push_back(std::stod(cols[3]));
  }
  std::map<std::string, double> med;
  for (const auto& [name, values] : aucs) med[name] = median(values);
  for (const auto& [name, m] : med) info(name + " median AUC " + fmt(m) + " over " + std::to_string(aucs[name].size()) + " seeds");
  if (!med.count("bin") || !med.count("random") || !med.count("random->bin")) return {false, "missing strategies"};
  const bool a = med["bin"] >= 0.90;
  const bool b = med["bin"] >= med["random->bin"];
  bool c = true;
  std::string losers;
  for (const auto& [name, m] : med) {
    if (name == "random") continue;
    if (!(m > med["random"])) {
      c = false;
      losers += " " + name;
    }
  }
  bool counts = true;
  for (const auto& [name, values] : aucs) counts = counts && values.size() == 10;
  return {a && b && c && counts, std::string("(a) bin ") + fmt(med["bin"]) + " >= 0.90 " + (a ? "ok" : "no") +
                                     "; (b) bin >= random->bin " + fmt(med["random->bin"]) + " " + (b ? "ok" : "no") +
                                     "; (c) every trained strategy > random " + fmt(med["random"]) + " " +
                                     (c ? "ok" : "no:" + losers)};
}

Outcome determinism(const CliRuns& runs) {
  if (!runs.ran) return {false, runs.error};
  const std::string a = read_all(runs.first / "results.csv");
  const std::string b = read_all(runs.second / "results.csv");
  const std::string agg_a = read_all(runs.first / "aggregate.csv");
  const std::string agg_b = read_all(runs.second / "aggregate.csv");
  const bool same = !a.empty() && a == b;
  info(std::string("aggregate.csv ") + (agg_a == agg_b ? "also byte-identical" : "differs"));
  return {same, "results.csv " + std::string(same ? "byte-identical" : "differs") + " across two invocations (" +
                    std::to_string(a.size()) + " bytes, sha256 " + sha256_hex(a).substr(0, 16) + ")"};
}

// 8 -------------------------------------------------------------------------
Outcome spectral_suite() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Index width = 64;
  const Index d = weight_count(width);

  double lo = 1e300, hi = -1e300, perm_worst = 0.0;
  for (int net = 0; net < 6; ++net) {
    VectorXd w(d);
    for (Index i = 0; i < d; ++i) {
      w(i) = net % 2 == 0 ? (unit(rng) < 0.3 ? 1.0 : 0.0) : unit(rng) * unit(rng);
    }
    const SpectralSignature sig = spectral_signature(w, "net");
    lo = std::min(lo, sig.eigenvalues.minCoeff());
    hi = std::max(hi, sig.eigenvalues.maxCoeff());

    std::vector<Index> perm(static_cast<std::size_t>(width));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    VectorXd permuted(d);
    auto w1 = w1_view(w.data(), width);
    auto w2 = w2_view(w.data(), width);
    auto p1 = w1_view(permuted.data(), width);
    auto p2 = w2_view(permuted.data(), width);
    for (Index j = 0; j < width; ++j) {
      const Index pj = perm[static_cast<std::size_t>(j)];
      p1.row(j) = w1.row(pj);
      p2.col(j) = w2.col(pj);
    }
    const SpectralSignature psig = spectral_signature(permuted, "perm");
    perm_worst = std::max(perm_worst, (psig.eigenvalues - sig.eigenvalues).cwiseAbs().maxCoeff());
  }

  double trace_worst = 0.0, det_worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    MatrixXd m(20, 20);
    for (Index i = 0; i < 20; ++i) {
      for (Index j = 0; j < 20; ++j) m(i, j) = normal(rng);
    }
    const MatrixXd s = (m + m.transpose()) / 2.0;
    const VectorXd values = eigenvalues_symmetric(s);
    const double trace = s.trace();
    const double det = s.fullPivLu().determinant();
    trace_worst = std::max(trace_worst, std::abs(values.sum() - trace) / std::max(1.0, std::abs(trace)));
    det_worst = std::max(det_worst, std::abs(values.prod() - det) / std::abs(det));
  }
  const bool range = lo >= -1e-9 && hi <= 2.0 + 1e-9;
  const bool ok = range && perm_worst < 1e-8 && trace_worst < 1e-9 && det_worst < 1e-6;
  return {ok, "signatures in [" + fmt(lo) + ", " + fmt(hi) + "] (need [0, 2+1e-9]); permutation change " +
                  fmt(perm_worst) + " (<1e-8); trace rel err " + fmt(trace_worst) + " (<1e-9); det rel err " +
                  fmt(det_worst) + " (<1e-6) on 50 random 20x20 matrices"};
}

// 10 ------------------------------------------------------------------------
std::vector<double> naive_preprocess(const RawDataset& raw, Index row) {
  std::vector<double> pooled(64, 0.0);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) {
      double sum = 0.0;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) sum += raw.features(row, (2 + 3 * r + i) * 28 + (2 + 3 * c + j));
      }
      pooled[static_cast<std::size_t>(r * 8 + c)] = sum / 9.0;
    }
  }
  double sum_sq = 0.0;
  for (double v : pooled) sum_sq += v * v;
  const double norm = std::sqrt(sum_sq);
  for (double& v : pooled) v /= norm;
  return pooled;
}

Outcome data_pipeline() {
  const RawDataset raw = load_mnist_csv(kMnist);
  const ProcessedDataset& data = mnist();
  int mismatches = 0;
  for (std::size_t k = 0; k < 100; ++k) {
    const auto expected = naive_preprocess(raw, static_cast<Index>(data.source_rows[k]));
    for (Index i = 0; i < 64; ++i) {
      if (data.vectors(i, static_cast<Index>(k)) != expected[static_cast<std::size_t>(i)]) ++mismatches;
    }
  }

  // PCA through both code paths: covariance form on raw MNIST pixels, Gram form
  // on a sparse synthetic bag-of-words corpus wider than it is tall.
  std::mt19937_64 rng(10);
  std::poisson_distribution<int> sparse_count(0.02);
  MatrixXd bow(600, 3703);
  for (Index i = 0; i < bow.rows(); ++i) {
    for (Index j = 0; j < bow.cols(); ++j) bow(i, j) = sparse_count(rng);
  }
  double ortho = 0.0;
  for (const MatrixXd* m : {&raw.features, static_cast<const MatrixXd*>(&bow)}) {
    const PcaProjection pca = pca_project(*m, 64);
    ortho = std::max(ortho, (pca.basis.transpose() * pca.basis - MatrixXd::Identity(64, 64)).cwiseAbs().maxCoeff());
  }

  double unit_worst = 0.0;
  std::size_t vectors = 0;
  auto check = [&](const ExampleSet& set) {
    for (Index c = 0; c < set.inputs.cols(); ++c) {
      unit_worst = std::max(unit_worst, std::abs(set.inputs.col(c).norm() - 1.0));
      ++vectors;
    }
  };
  const Task t2 = figure2_task();
  const Task t3 = build_task(data, {"1"}, {"2"}, 150, 50, 0);
  check(t2.train);
  check(t2.test);
  check(t3.train);
  check(t3.test);
  return {mismatches == 0 && ortho < 1e-8 && unit_worst <= 1e-9,
          std::to_string(mismatches) + " mismatching values against the naive pooling loop on 100 images; "
          "PCA basis orthonormality error " + fmt(ortho) + " (<1e-8); largest | ||x|| - 1 | " + fmt(unit_worst) +
          " over " + std::to_string(vectors) + " task vectors (<=1e-9)"};
}

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;  // 0 = none
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance report"};
  std::string cli;
  std::string workdir = (fs::temp_directory_path() / "wfnas_acceptance").string();
  std::vector<int> known_failures;
  std::vector<int> only;
  app.add_option("--cli", cli, "path to the wfnas executable")->required();
  app.add_option("--workdir", workdir, "scratch directory for the CLI runs");
  app.add_option("--known-failure", known_failures, "criteria whose failure does not fail the run");
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  CliRuns runs;
  bool cli_done = false;
  auto ensure_runs = [&]() -> const CliRuns& {
    if (!cli_done) {
      runs = run_figure3_twice(cli, workdir);
      cli_done = true;
    }
    return runs;
  };

  const std::vector<Criterion> criteria{
      {1, "gradient correctness", 60, gradient_correctness},
      {2, "binarization suite", 0, binarization_suite},
      {3, "exhaustive-oracle optimality", 120, exhaustive_oracle},
      {4, "residual bound", 600, lemma2_bound},
      {5, "1/t rate on the convex surrogate", 600, theorem1_rate},
      {6, "soft/hard sharpness ordering", 900, figure2_ordering},
      {7, "strategy AUC properties", 1800, [&] { return figure3_properties(ensure_runs()); }},
      {8, "spectral suite", 120, spectral_suite},
      {9, "determinism", 0, [&] { return determinism(ensure_runs()); }},
      {10, "data pipeline", 0, data_pipeline},
  };

  int unexpected = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && seconds > c.limit_seconds) {
      out.pass = false;
      out.detail += "; over the " + fmt(c.limit_seconds) + " s budget";
    }
    const bool known = std::find(known_failures.begin(), known_failures.end(), c.id) != known_failures.end();
    std::cout << (out.pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << ": " << out.detail << " ("
              << fmt(seconds, 3) << " s)" << (known && !out.pass ? " [known failure]" : "") << std::endl;
    if (!out.pass && !known) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
