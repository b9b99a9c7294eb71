#include "wfnas/experiment.hpp"

#include "wfnas/io.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace wfnas;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config(const std::string& out) {
  ExperimentConfig e;
  e.data_path = testutil::kMnist;
  e.train_sizes = {20, 30};
  e.n_test_per_class = 10;
  e.n_runs = 2;
  e.train.epochs = 5;
  e.options.lottery_rounds = 3;
  e.options.agnostic_architectures = 4;
  e.options.agnostic_shared_samples = 2;
  e.output_dir = out;
  return e;
}

const ProcessedDataset& data() {
  static const ProcessedDataset d = preprocess_mnist(load_mnist_csv(testutil::kMnist));
  return d;
}

std::string results_text(const ExperimentOutput& out) {
  std::ostringstream ss;
  write_results_csv(ss, out.records);
  write_aggregate_csv(ss, out.records);
  return ss.str();
}

}  // namespace

TEST_CASE("config from key-value text") {
  KeyValueConfig raw;
  raw.set("group_a", "1,2,3");
  raw.set("group_b", "4");
  raw.set("strategies", "bin, random->bin");
  raw.set("train_sizes", "10,20");
  raw.set("lr_schedule", "inverse");
  raw.set("lr", "2");
  const ExperimentConfig e = ExperimentConfig::from_config(raw);
  CHECK(e.group_a.size() == 3);
  CHECK(e.strategies == std::vector<Strategy>{Strategy::bin, Strategy::random_to_bin});
  CHECK(e.train.lr.kind == LrSchedule::Kind::inverse);
  CHECK(e.n_runs == 10);
  raw.set("group_b", "3");
  CHECK_THROWS_AS(ExperimentConfig::from_config(raw), Error);
  raw.set("group_b", "4");
  raw.set("n_runs", "0");
  CHECK_THROWS_AS(ExperimentConfig::from_config(raw), Error);
}

TEST_CASE("record counting and sorting") {
  ExperimentConfig e = small_config("unused");
  e.strategies = {Strategy::random};
  const ExperimentOutput out = run_experiment(e, data());
  CHECK(out.records.size() == 2 * e.train_sizes.size());
  CHECK(out.failures.empty());
  for (const auto& r : out.records) {
    CHECK(r.strategy == Strategy::random);
    CHECK(r.auc >= 0.0);
    CHECK(r.auc <= 1.0);
  }
  CHECK(out.records.front().train_size == 20);
  CHECK(out.records.back().seed == 1);
}

TEST_CASE("full grid is deterministic, persisted and recomputable") {
  const fs::path dir = fs::temp_directory_path() / "wfnas_unit_experiment";
  fs::remove_all(dir);
  ExperimentConfig e = small_config(dir.string());
  const ExperimentOutput a = run_experiment(e, data());
  CHECK(a.records.size() == 2 * 2 * 10);
  e.jobs = 3;
  const ExperimentOutput b = run_experiment(e, data());
  CHECK(results_text(a) == results_text(b));

  KeyValueConfig raw;
  raw.set("data_path", e.data_path);
  persist_experiment(e, raw, "hash", a);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "artifacts" / "n20_bin_to_real_seed1.json"));
  const auto stored = load_stored_results(dir.string());
  CHECK(stored.size() == a.records.size());
  const auto again = evaluate_stored(e, data(), stored);
  for (std::size_t i = 0; i < again.size(); ++i) {
    CHECK(again[i].auc == a.records[i].auc);
    CHECK(again[i].train_loss == a.records[i].train_loss);
    if (a.records[i].mask_density) CHECK(*again[i].mask_density == *a.records[i].mask_density);
  }
  // Stored train losses are reproducible from the stored weights.
  const auto test = build_task(data(), e.group_a, e.group_b, 20, 10, 0);
  for (const auto& s : stored) {
    if (s.train_size != 20 || s.result.seed != 0) continue;
    CHECK(batch_loss(s.result.effective_weights(), test.train) ==
          doctest::Approx(s.result.train_loss).epsilon(1e-12));
  }

  const SpectraReport report = run_spectra_report(stored);
  CHECK(report.signatures.size() == stored.size());
  CHECK(report.pca.rows() == static_cast<Index>(stored.size()));
  for (const auto& sig : report.signatures) {
    CHECK(sig.eigenvalues.minCoeff() >= -1e-9);
    CHECK(sig.eigenvalues.maxCoeff() <= 2.0 + 1e-9);
  }
  // real vs its own ->bin network differ
  std::size_t real_i = 0, bin_i = 0;
  for (std::size_t i = 0; i < stored.size(); ++i) {
    if (stored[i].network_id() == "real/n=20/seed=0") real_i = i;
    if (stored[i].network_id() == "real->bin/n=20/seed=0") bin_i = i;
  }
  CHECK(spectral_distance(report.signatures[real_i], report.signatures[bin_i]) > 0.0);
}

TEST_CASE("failed cells are reported, not thrown") {
  ExperimentConfig e = small_config("unused");
  e.strategies = {Strategy::bin};
  e.train_sizes = {20, 1000};
  const ExperimentOutput out = run_experiment(e, data());
  CHECK(out.records.size() == 2);
  CHECK(out.failures.size() == 2);
}

TEST_CASE("auc evaluation uses the score ranking") {
  StrategyResult r;
  r.mask = BinaryMask::ones(weight_count(64));
  const Task t = build_task(data(), {"1"}, {"2"}, 5, 10, 0);
  const double a = evaluate_auc(r, t.test);
  CHECK(a >= 0.0);
  CHECK(a <= 1.0);
}
