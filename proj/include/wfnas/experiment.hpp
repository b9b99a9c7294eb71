// End-to-end experiment runner: task sampling, strategy runs, AUC evaluation,
// persisted results and aggregate reports, and spectra reports.
#ifndef WFNAS_EXPERIMENT_HPP
#define WFNAS_EXPERIMENT_HPP

#include "wfnas/config.hpp"
#include "wfnas/data.hpp"
#include "wfnas/optim.hpp"
#include "wfnas/spectral.hpp"
#include "wfnas/strategies.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace wfnas {

struct ExperimentConfig {
  std::string dataset = "mnist";  // mnist or citeseer
  std::string data_path;
  std::set<std::string> group_a{"1"};
  std::set<std::string> group_b{"2"};
  std::vector<std::size_t> train_sizes{50, 100, 150};
  std::size_t n_test_per_class = 50;
  int n_runs = 10;
  std::uint64_t base_seed = 0;
  std::vector<Strategy> strategies{all_strategies().begin(), all_strategies().end()};
  TrainConfig train;
  StrategyOptions options;
  Pooling pooling = Pooling::average;
  std::optional<std::size_t> citeseer_rows;
  std::string output_dir = "results";
  int jobs = 1;

  /// Reads every known key; unset keys keep the defaults above.
  static ExperimentConfig from_config(const KeyValueConfig& config);
  void validate() const;
};

/// Applies the training keys of a config on top of a TrainConfig.
TrainConfig train_config_from(const KeyValueConfig& config, TrainConfig base = {});

struct EvalRecord {
  Strategy strategy = Strategy::real;
  std::uint64_t seed = 0;
  std::size_t train_size = 0;
  double auc = 0.0;
  double wall_clock_seconds = 0.0;
  std::optional<double> mask_density;
  double train_loss = 0.0;
};

struct StoredResult {
  std::size_t train_size = 0;
  StrategyResult result;

  std::string network_id() const;
};

struct ExperimentOutput {
  std::vector<EvalRecord> records;     // sorted by (train_size, strategy, seed)
  std::vector<StoredResult> results;   // same order as records
  std::vector<std::string> failures;   // one message per failed cell
};

/// AUC of a strategy's network on a test set; positives are y = 1.
double evaluate_auc(const StrategyResult& result, const ExampleSet& test);

/// Loads and preprocesses the configured dataset.
ProcessedDataset load_dataset(const ExperimentConfig& config);

/// Runs every (train size, strategy pair, run) cell; run i uses seed base_seed + i
/// for both task sampling and training. Failed cells are reported, not thrown.
ExperimentOutput run_experiment(const ExperimentConfig& config, const ProcessedDataset& data);

/// Rebuilds each stored result's task from its seed and recomputes its record.
std::vector<EvalRecord> evaluate_stored(const ExperimentConfig& config, const ProcessedDataset& data,
                                        const std::vector<StoredResult>& results);

/// results.csv: the deterministic columns of each EvalRecord.
void write_results_csv(std::ostream& os, const std::vector<EvalRecord>& records);
/// timings.csv: wall-clock seconds per record.
void write_timings_csv(std::ostream& os, const std::vector<EvalRecord>& records);
/// aggregate.csv: median and quartiles of AUC (and mask density) per cell.
void write_aggregate_csv(std::ostream& os, const std::vector<EvalRecord>& records);
/// runtime_aggregate.csv: median and quartiles of wall-clock seconds per cell.
void write_runtime_aggregate_csv(std::ostream& os, const std::vector<EvalRecord>& records);

/// Writes results.csv, timings.csv, the aggregates, one JSON artifact per
/// result, failures.json (if any) and manifest.json under config.output_dir.
void persist_experiment(const ExperimentConfig& config, const KeyValueConfig& raw_config,
                        const std::string& dataset_hash, const ExperimentOutput& output);

/// Loads every JSON artifact under dir/artifacts, sorted by network id.
std::vector<StoredResult> load_stored_results(const std::string& dir);

struct SpectrumSummaryRow {
  std::string strategy;
  Index index = 0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

struct SpectraReport {
  std::vector<SpectralSignature> signatures;
  std::vector<std::string> strategies;  // per signature
  MatrixXd pca;                          // one 2-d row per signature
  std::vector<SpectrumSummaryRow> summary;
};

/// Mask networks use their {0,1} entries; real networks use |weights|.
SpectraReport run_spectra_report(const std::vector<StoredResult>& results);

void write_spectra_csv(std::ostream& os, const SpectraReport& report);
void write_spectra_summary_csv(std::ostream& os, const SpectraReport& report);
void write_pca_csv(std::ostream& os, const SpectraReport& report);

}  // namespace wfnas

#endif  // WFNAS_EXPERIMENT_HPP
