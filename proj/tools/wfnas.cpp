// wfnas: ingest datasets, run the strategy grid, evaluate, compute spectra and
// convergence diagnostics, and regenerate the figure data.
#include "wfnas/config.hpp"
#include "wfnas/data.hpp"
#include "wfnas/diagnostics.hpp"
#include "wfnas/experiment.hpp"
#include "wfnas/io.hpp"
#include "wfnas/stats.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

using namespace wfnas;
namespace fs = std::filesystem;

namespace {

const std::set<std::string> kKnownKeys{
    "dataset", "data_path", "group_a", "group_b", "train_sizes", "n_test_per_class", "n_runs", "base_seed",
    "strategies", "m_hard", "m_soft", "epochs", "batch_size", "lr_schedule", "lr", "seed", "init_scale",
    "init_mean", "real_init_scale", "real_lr", "lottery_rounds", "lottery_retrain", "agnostic_architectures",
    "agnostic_shared_samples", "pooling", "citeseer_rows", "output_dir", "jobs", "n_seeds", "g_samples",
    "g_inflation", "grid", "log_steps"};

struct ConfigArgs {
  std::string path;
  std::vector<std::string> overrides;
};

void add_config_options(CLI::App* cmd, ConfigArgs& args) {
  cmd->add_option("-c,--config", args.path, "key = value config file");
  cmd->add_option("--set", args.overrides, "override a config key (key=value), repeatable");
}

// Bundled MNIST subset, preset defaults, then the config file, then --set overrides.
KeyValueConfig build_config(const ConfigArgs& args, const std::map<std::string, std::string>& preset) {
  KeyValueConfig config;
  config.set("data_path", WFNAS_DEFAULT_MNIST);
  for (const auto& [k, v] : preset) config.set(k, v);
  if (!args.path.empty()) {
    const KeyValueConfig file = KeyValueConfig::load(args.path);
    for (const auto& [k, v] : file.values()) config.set(k, v);
  }
  for (const auto& o : args.overrides) config.apply_override(o);
  for (const auto& [k, v] : config.values()) {
    if (!kKnownKeys.count(k)) throw Error("unknown config key '" + k + "'");
  }
  return config;
}

std::string dataset_hash(const ProcessedDataset& data) {
  std::ostringstream ss;
  write_processed(ss, data);
  return sha256_hex(ss.str());
}

void write_file(const fs::path& path, const std::string& text) {
  write_text_file(path.string(), text);
  std::cerr << "wrote " << path.string() << '\n';
}

template <typename Writer, typename Data>
void write_csv(const fs::path& path, Writer writer, const Data& data) {
  std::ostringstream ss;
  writer(ss, data);
  write_file(path, ss.str());
}

Task diagnostic_task(const ExperimentConfig& e, const ProcessedDataset& data) {
  return build_task(data, e.group_a, e.group_b, e.train_sizes.front(), e.n_test_per_class, e.base_seed);
}

std::vector<std::pair<double, double>> grid_from(const KeyValueConfig& c) {
  if (!c.has("grid")) return default_convergence_grid();
  std::vector<std::pair<double, double>> grid;
  for (const auto& cell : c.get_list("grid", {})) {
    const auto colon = cell.find(':');
    if (colon == std::string::npos) throw Error("grid cells are m_hard:m_soft, got '" + cell + "'");
    grid.emplace_back(std::stod(cell.substr(0, colon)), std::stod(cell.substr(colon + 1)));
  }
  return grid;
}

int run_train(const KeyValueConfig& raw) {
  const ExperimentConfig e = ExperimentConfig::from_config(raw);
  const ProcessedDataset data = load_dataset(e);
  const ExperimentOutput out = run_experiment(e, data);
  persist_experiment(e, raw, dataset_hash(data), out);
  std::cerr << out.records.size() << " records, " << out.failures.size() << " failed cells -> " << e.output_dir
            << '\n';
  for (const auto& f : out.failures) std::cerr << "failed: " << f << '\n';
  return out.failures.empty() ? 0 : 1;
}

int run_evaluate(const KeyValueConfig& raw) {
  const ExperimentConfig e = ExperimentConfig::from_config(raw);
  const ProcessedDataset data = load_dataset(e);
  const auto stored = load_stored_results(e.output_dir);
  const auto records = evaluate_stored(e, data, stored);
  const fs::path dir(e.output_dir);
  write_csv(dir / "results.csv", write_results_csv, records);
  write_csv(dir / "timings.csv", write_timings_csv, records);
  write_csv(dir / "aggregate.csv", write_aggregate_csv, records);
  write_csv(dir / "runtime_aggregate.csv", write_runtime_aggregate_csv, records);
  return 0;
}

int run_spectra(const std::string& results_dir, const std::string& output_dir) {
  const SpectraReport report = run_spectra_report(load_stored_results(results_dir));
  const fs::path dir(output_dir.empty() ? results_dir : output_dir);
  write_csv(dir / "spectra.csv", write_spectra_csv, report);
  write_csv(dir / "spectra_summary.csv", write_spectra_summary_csv, report);
  if (report.pca.rows() > 0) {
    write_csv(dir / "pca.csv", write_pca_csv, report);
  } else {
    std::cerr << "fewer than 3 networks, no PCA embedding written\n";
  }
  return 0;
}

int run_residuals(const KeyValueConfig& raw) {
  const ExperimentConfig e = ExperimentConfig::from_config(raw);
  const ProcessedDataset data = load_dataset(e);
  const Task task = diagnostic_task(e, data);
  const ResidualStudy study = residual_study(task.train, e.train, static_cast<std::size_t>(raw.get_int("g_samples", 10000)),
                                             raw.get_double("g_inflation", 2.0));
  const fs::path dir(e.output_dir);
  write_csv(dir / "residuals.csv", write_residuals_csv, study.records);
  std::cout << "g_hat=" << study.g.g_hat << " (" << study.g.samples << " samples) inflation=" << study.inflation
            << " C=" << study.big_c << " bound=" << study.bound << '\n'
            << "steps=" << study.records.size() << " within_bound=" << study.fraction_within
            << " max_residual_norm_sq=" << study.max_norm_sq << " max_step_grad_norm=" << study.max_grad_norm
            << " within_stepwise=" << study.fraction_stepwise << '\n'
            << "mean_residual_norm=" << study.mean_residual.norm()
            << " mean_residual_max_abs=" << study.mean_residual.cwiseAbs().maxCoeff() << '\n';
  return 0;
}

int run_rate(const KeyValueConfig& raw) {
  const ExperimentConfig e = ExperimentConfig::from_config(raw);
  const ProcessedDataset data = load_dataset(e);
  const Task task = diagnostic_task(e, data);
  TrainConfig train = e.train;
  for (const auto& s : raw.get_list("log_steps", {})) train.log_steps.push_back(std::stoll(s));
  const RateStudy study = rate_study(task.train, train, static_cast<int>(raw.get_int("n_seeds", 10)),
                                     static_cast<std::size_t>(raw.get_int("g_samples", 1000)));
  write_csv(fs::path(e.output_dir) / "rate.csv", write_rate_csv, study.median);
  std::size_t violated = 0;
  for (const auto& r : study.median) violated += (r.t >= 10 && r.violated) ? 1 : 0;
  std::cout << "G=" << study.g << " c=" << study.c << " C=" << study.big_c << " F*=" << study.f_star
            << " rows=" << study.median.size() << " violations(T>=10)=" << violated << '\n';
  return 0;
}

int run_convergence(const KeyValueConfig& raw) {
  const ExperimentConfig e = ExperimentConfig::from_config(raw);
  const ProcessedDataset data = load_dataset(e);
  const Task task = diagnostic_task(e, data);
  const int n_seeds = static_cast<int>(raw.get_int("n_seeds", 10));
  const auto cells = convergence_study(task.train, grid_from(raw), e.train, n_seeds);
  const fs::path dir(e.output_dir);
  write_csv(dir / "convergence.csv", write_convergence_csv, cells);

  std::ostringstream finals;
  finals.precision(17);
  finals << "m_hard,m_soft,seed,final_loss\n";
  for (const auto& cell : cells) {
    const auto losses = cell.final_losses();
    for (std::size_t i = 0; i < losses.size(); ++i) {
      finals << cell.m_hard << ',' << cell.m_soft << ',' << e.train.seed + i << ',' << losses[i] << '\n';
    }
  }
  write_file(dir / "final_losses.csv", finals.str());

  // Pairwise one-sided tests between cells sharing m_hard: is the smaller m_soft's final loss lower?
  for (const auto& a : cells) {
    for (const auto& b : cells) {
      if (a.m_hard != b.m_hard || !(a.m_soft < b.m_soft)) continue;
      const auto la = a.final_losses();
      const auto lb = b.final_losses();
      const MannWhitney mw = mann_whitney_less(la, lb);
      std::cout << "m_hard=" << a.m_hard << ": median final loss m_soft=" << a.m_soft << " -> " << median(la)
                << ", m_soft=" << b.m_soft << " -> " << median(lb) << ", Mann-Whitney p=" << mw.p_value << '\n';
    }
  }
  return 0;
}

std::map<std::string, std::string> figure2_preset() {
  return {{"group_a", "1,2,3"}, {"group_b", "4,5,6"}, {"train_sizes", "100"}, {"output_dir", "results/figure2"}};
}

std::map<std::string, std::string> figure3_preset(const std::string& dir) {
  return {{"output_dir", dir}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weight-free network search: training strategies, evaluation and diagnostics"};
  app.require_subcommand(1);

  std::string ingest_dataset = "mnist", ingest_input, ingest_output, ingest_pooling = "average";
  auto* ingest = app.add_subcommand("ingest", "Preprocess a raw dataset into unit-norm 64-d vectors");
  ingest->add_option("--dataset", ingest_dataset, "mnist or citeseer")->check(CLI::IsMember({"mnist", "citeseer"}));
  ingest->add_option("--input", ingest_input, "raw dataset file")->required();
  ingest->add_option("--output", ingest_output, "processed CSV")->required();
  ingest->add_option("--pooling", ingest_pooling, "MNIST pooling")->check(CLI::IsMember({"average", "max"}));

  ConfigArgs train_args, eval_args, diag_args, fig_args;
  auto* train = app.add_subcommand("train", "Run every (train size, strategy, seed) cell and persist results");
  add_config_options(train, train_args);
  auto* evaluate = app.add_subcommand("evaluate", "Recompute AUC tables from stored results");
  add_config_options(evaluate, eval_args);

  std::string spectra_results = "results", spectra_output;
  auto* spectra = app.add_subcommand("spectra", "Laplacian spectra and PCA embedding of stored networks");
  spectra->add_option("--results", spectra_results, "directory holding artifacts/");
  spectra->add_option("--output", spectra_output, "output directory (defaults to --results)");

  std::string diag_kind;
  auto* diagnose = app.add_subcommand("diagnose", "Convergence diagnostics");
  diagnose->add_option("kind", diag_kind, "residuals, rate or convergence")
      ->required()
      ->check(CLI::IsMember({"residuals", "rate", "convergence"}));
  add_config_options(diagnose, diag_args);

  int figure = 0;
  auto* reproduce = app.add_subcommand("reproduce-figure", "Regenerate the data behind a figure");
  reproduce->add_option("figure", figure, "2, 3 or 4")->required()->check(CLI::IsMember({2, 3, 4}));
  add_config_options(reproduce, fig_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      const auto start = std::chrono::steady_clock::now();
      ProcessedDataset data;
      if (ingest_dataset == "mnist") {
        data = preprocess_mnist(load_mnist_csv(ingest_input), ingest_pooling == "max" ? Pooling::max : Pooling::average);
      } else {
        data = preprocess_citeseer(load_citeseer(ingest_input));
      }
      std::ostringstream ss;
      write_processed(ss, data);
      write_file(ingest_output, ss.str());
      std::cout << data.size() << " vectors, " << data.excluded_rows.size() << " excluded rows, sha256 "
                << sha256_hex(ss.str()) << ", "
                << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() << " s\n";
      return 0;
    }
    if (*train) return run_train(build_config(train_args, {}));
    if (*evaluate) return run_evaluate(build_config(eval_args, {}));
    if (*spectra) return run_spectra(spectra_results, spectra_output);
    if (*diagnose) {
      if (diag_kind == "residuals") {
        auto preset = figure2_preset();
        preset["batch_size"] = "1";
        preset["epochs"] = "3";
        preset["output_dir"] = "results/residuals";
        return run_residuals(build_config(diag_args, preset));
      }
      if (diag_kind == "rate") {
        auto preset = figure2_preset();
        preset["lr_schedule"] = "inverse";
        preset["lr"] = "10";
        preset["log_steps"] = "10,20,40,80,160,320,640,1280,2560,5120";
        preset["output_dir"] = "results/rate";
        return run_rate(build_config(diag_args, preset));
      }
      return run_convergence(build_config(diag_args, figure2_preset()));
    }
    if (*reproduce) {
      if (figure == 2) return run_convergence(build_config(fig_args, figure2_preset()));
      if (figure == 3) return run_train(build_config(fig_args, figure3_preset("results/figure3")));
      const KeyValueConfig raw = build_config(fig_args, figure3_preset("results/figure4"));
      const int status = run_train(raw);
      run_spectra(ExperimentConfig::from_config(raw).output_dir, "");
      return status;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
