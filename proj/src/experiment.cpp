#include "wfnas/experiment.hpp"

#include "wfnas/io.hpp"
#include "wfnas/model.hpp"
#include "wfnas/stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

namespace wfnas {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::set<std::string> to_set(const std::vector<std::string>& items) { return {items.begin(), items.end()}; }

std::string file_safe(Strategy s) {
  std::string name = to_string(s);
  const auto arrow = name.find("->");
  if (arrow != std::string::npos) name.replace(arrow, 2, "_to_");
  return name;
}

auto record_key(const EvalRecord& r) {
  return std::make_tuple(r.train_size, static_cast<int>(r.strategy), r.seed);
}

template <typename Getter>
void write_quantile_table(std::ostream& os, const std::vector<EvalRecord>& records, const std::string& metric,
                          Getter value) {
  std::map<std::pair<std::size_t, int>, std::vector<double>> cells;
  for (const auto& r : records) {
    if (const auto v = value(r)) cells[{r.train_size, static_cast<int>(r.strategy)}].push_back(*v);
  }
  for (const auto& [key, values] : cells) {
    os << "n=" << key.first << ';' << to_string(static_cast<Strategy>(key.second)) << ',' << key.first << ','
       << to_string(static_cast<Strategy>(key.second)) << ',' << metric << ',' << values.size() << ','
       << num(median(values)) << ',' << num(quantile(values, 0.25)) << ',' << num(quantile(values, 0.75)) << '\n';
  }
}

EvalRecord make_record(const StrategyResult& r, std::size_t train_size, const ExampleSet& test) {
  EvalRecord rec;
  rec.strategy = r.strategy;
  rec.seed = r.seed;
  rec.train_size = train_size;
  rec.auc = evaluate_auc(r, test);
  rec.wall_clock_seconds = r.wall_clock_seconds;
  if (r.mask && !r.real_weights) rec.mask_density = r.mask->density();
  rec.train_loss = r.train_loss;
  return rec;
}

}  // namespace

TrainConfig train_config_from(const KeyValueConfig& c, TrainConfig t) {
  t.m_hard = c.get_double("m_hard", t.m_hard);
  t.m_soft = c.get_double("m_soft", t.m_soft);
  t.epochs = static_cast<int>(c.get_int("epochs", t.epochs));
  t.batch_size = static_cast<int>(c.get_int("batch_size", t.batch_size));
  const std::string schedule =
      c.get_string("lr_schedule", t.lr.kind == LrSchedule::Kind::constant ? "constant" : "inverse");
  if (schedule != "constant" && schedule != "inverse") throw Error("lr_schedule must be constant or inverse");
  t.lr.kind = schedule == "constant" ? LrSchedule::Kind::constant : LrSchedule::Kind::inverse;
  t.lr.value = c.get_double("lr", t.lr.value);
  t.seed = static_cast<std::uint64_t>(c.get_int("seed", static_cast<long long>(t.seed)));
  t.init_scale = c.get_double("init_scale", t.init_scale);
  t.init_mean = c.get_double("init_mean", t.init_mean);
  t.real_init_scale = c.get_double("real_init_scale", t.real_init_scale);
  t.real_lr = c.get_double("real_lr", t.real_lr);
  return t;
}

ExperimentConfig ExperimentConfig::from_config(const KeyValueConfig& c) {
  ExperimentConfig e;
  e.dataset = c.get_string("dataset", e.dataset);
  e.data_path = c.get_string("data_path", e.data_path);
  e.group_a = to_set(c.get_list("group_a", {e.group_a.begin(), e.group_a.end()}));
  e.group_b = to_set(c.get_list("group_b", {e.group_b.begin(), e.group_b.end()}));
  if (c.has("train_sizes")) {
    e.train_sizes.clear();
    for (const auto& s : c.get_list("train_sizes", {})) e.train_sizes.push_back(std::stoul(s));
  }
  e.n_test_per_class = static_cast<std::size_t>(c.get_int("n_test_per_class", static_cast<long long>(e.n_test_per_class)));
  e.n_runs = static_cast<int>(c.get_int("n_runs", e.n_runs));
  e.base_seed = static_cast<std::uint64_t>(c.get_int("base_seed", static_cast<long long>(e.base_seed)));
  const auto names = c.get_list("strategies", {"all"});
  if (!(names.size() == 1 && names[0] == "all")) {
    e.strategies.clear();
    for (const auto& n : names) e.strategies.push_back(strategy_from_string(n));
  }
  e.train = train_config_from(c, e.train);
  e.options.lottery_rounds = static_cast<int>(c.get_int("lottery_rounds", e.options.lottery_rounds));
  e.options.lottery_retrain = c.get_bool("lottery_retrain", e.options.lottery_retrain);
  e.options.agnostic_architectures =
      static_cast<int>(c.get_int("agnostic_architectures", e.options.agnostic_architectures));
  e.options.agnostic_shared_samples =
      static_cast<int>(c.get_int("agnostic_shared_samples", e.options.agnostic_shared_samples));
  const std::string pooling = c.get_string("pooling", "average");
  if (pooling != "average" && pooling != "max") throw Error("pooling must be average or max");
  e.pooling = pooling == "average" ? Pooling::average : Pooling::max;
  if (c.has("citeseer_rows")) e.citeseer_rows = static_cast<std::size_t>(c.get_int("citeseer_rows", 0));
  e.output_dir = c.get_string("output_dir", e.output_dir);
  e.jobs = static_cast<int>(c.get_int("jobs", e.jobs));
  e.validate();
  return e;
}

void ExperimentConfig::validate() const {
  if (dataset != "mnist" && dataset != "citeseer") throw Error("dataset must be mnist or citeseer");
  if (group_a.empty() || group_b.empty()) throw Error("experiment: both groups must be nonempty");
  for (const auto& g : group_a) {
    if (group_b.count(g)) throw Error("experiment: class '" + g + "' is in both groups");
  }
  if (train_sizes.empty()) throw Error("experiment: no training sizes");
  if (n_runs < 1) throw Error("experiment: n_runs must be >= 1");
  if (strategies.empty()) throw Error("experiment: no strategies");
  if (jobs < 1) throw Error("experiment: jobs must be >= 1");
}

std::string StoredResult::network_id() const {
  return to_string(result.strategy) + "/n=" + std::to_string(train_size) + "/seed=" + std::to_string(result.seed);
}

double evaluate_auc(const StrategyResult& result, const ExampleSet& test) {
  const VectorXd scores = TwoLayerNetwork<double>{}.scores(result.effective_weights(), test.inputs);
  std::vector<double> pos, neg;
  for (std::size_t i = 0; i < test.size(); ++i) {
    (test.labels[i] == 1 ? pos : neg).push_back(scores(static_cast<Index>(i)));
  }
  return auc(pos, neg);
}

ProcessedDataset load_dataset(const ExperimentConfig& config) {
  if (config.data_path.empty()) throw Error("data_path is not set");
  if (config.dataset == "mnist") return preprocess_mnist(load_mnist_csv(config.data_path), config.pooling);
  return preprocess_citeseer(load_citeseer(config.data_path, config.citeseer_rows));
}

ExperimentOutput run_experiment(const ExperimentConfig& config, const ProcessedDataset& data) {
  config.validate();
  std::vector<Strategy> bases;
  for (Strategy s : config.strategies) {
    if (std::find(bases.begin(), bases.end(), base_strategy(s)) == bases.end()) bases.push_back(base_strategy(s));
  }
  auto wanted = [&](Strategy s) {
    return std::find(config.strategies.begin(), config.strategies.end(), s) != config.strategies.end();
  };

  struct Cell {
    std::size_t train_size;
    Strategy base;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t size : config.train_sizes)
    for (Strategy base : bases)
      for (int i = 0; i < config.n_runs; ++i) cells.push_back({size, base, config.base_seed + static_cast<std::uint64_t>(i)});

  struct CellOutput {
    std::vector<std::pair<EvalRecord, StoredResult>> rows;
    std::string failure;
  };
  std::vector<CellOutput> outputs(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      const Cell& cell = cells[c];
      try {
        const Task task = build_task(data, config.group_a, config.group_b, cell.train_size, config.n_test_per_class,
                                     cell.seed);
        TrainConfig train = config.train;
        train.seed = cell.seed;
        auto [first, second] = run_strategy_pair(cell.base, task.train, train, config.options);
        for (StrategyResult* r : {&first, &second}) {
          if (!wanted(r->strategy)) continue;
          EvalRecord rec = make_record(*r, cell.train_size, task.test);
          outputs[c].rows.push_back({rec, StoredResult{cell.train_size, std::move(*r)}});
        }
      } catch (const std::exception& e) {
        outputs[c].failure = to_string(cell.base) + " n=" + std::to_string(cell.train_size) +
                             " seed=" + std::to_string(cell.seed) + ": " + e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = std::min<int>(config.jobs, static_cast<int>(std::max<std::size_t>(cells.size(), 1)));
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<std::pair<EvalRecord, StoredResult>> rows;
  ExperimentOutput out;
  for (auto& o : outputs) {
    for (auto& row : o.rows) rows.push_back(std::move(row));
    if (!o.failure.empty()) out.failures.push_back(o.failure);
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return record_key(a.first) < record_key(b.first); });
  for (auto& [rec, stored] : rows) {
    out.records.push_back(rec);
    out.results.push_back(std::move(stored));
  }
  return out;
}

std::vector<EvalRecord> evaluate_stored(const ExperimentConfig& config, const ProcessedDataset& data,
                                        const std::vector<StoredResult>& results) {
  std::map<std::pair<std::size_t, std::uint64_t>, ExampleSet> tests;
  std::vector<EvalRecord> records;
  for (const auto& stored : results) {
    const auto key = std::make_pair(stored.train_size, stored.result.seed);
    auto it = tests.find(key);
    if (it == tests.end()) {
      it = tests
               .emplace(key, build_task(data, config.group_a, config.group_b, stored.train_size,
                                        config.n_test_per_class, stored.result.seed)
                                 .test)
               .first;
    }
    records.push_back(make_record(stored.result, stored.train_size, it->second));
  }
  std::sort(records.begin(), records.end(),
            [](const EvalRecord& a, const EvalRecord& b) { return record_key(a) < record_key(b); });
  return records;
}

void write_results_csv(std::ostream& os, const std::vector<EvalRecord>& records) {
  os << "strategy,seed,train_size,auc,mask_density,train_loss\n";
  for (const auto& r : records) {
    os << to_string(r.strategy) << ',' << r.seed << ',' << r.train_size << ',' << num(r.auc) << ','
       << (r.mask_density ? num(*r.mask_density) : "") << ',' << num(r.train_loss) << '\n';
  }
}

void write_timings_csv(std::ostream& os, const std::vector<EvalRecord>& records) {
  os << "strategy,seed,train_size,wall_clock_seconds\n";
  for (const auto& r : records) {
    os << to_string(r.strategy) << ',' << r.seed << ',' << r.train_size << ',' << num(r.wall_clock_seconds) << '\n';
  }
}

void write_aggregate_csv(std::ostream& os, const std::vector<EvalRecord>& records) {
  os << "cell,train_size,strategy,metric,count,median,q25,q75\n";
  write_quantile_table(os, records, "auc", [](const EvalRecord& r) { return std::optional<double>(r.auc); });
  write_quantile_table(os, records, "mask_density", [](const EvalRecord& r) { return r.mask_density; });
  write_quantile_table(os, records, "train_loss",
                       [](const EvalRecord& r) { return std::optional<double>(r.train_loss); });
}

void write_runtime_aggregate_csv(std::ostream& os, const std::vector<EvalRecord>& records) {
  os << "cell,train_size,strategy,metric,count,median,q25,q75\n";
  write_quantile_table(os, records, "wall_clock_seconds",
                       [](const EvalRecord& r) { return std::optional<double>(r.wall_clock_seconds); });
}

void persist_experiment(const ExperimentConfig& config, const KeyValueConfig& raw_config,
                        const std::string& dataset_hash, const ExperimentOutput& output) {
  const fs::path dir(config.output_dir);
  fs::create_directories(dir / "artifacts");
  auto write = [&](const std::string& name, auto writer) {
    std::ostringstream ss;
    writer(ss, output.records);
    write_text_file((dir / name).string(), ss.str());
  };
  write("results.csv", write_results_csv);
  write("timings.csv", write_timings_csv);
  write("aggregate.csv", write_aggregate_csv);
  write("runtime_aggregate.csv", write_runtime_aggregate_csv);
  for (const auto& stored : output.results) {
    const std::string name = "n" + std::to_string(stored.train_size) + "_" + file_safe(stored.result.strategy) +
                             "_seed" + std::to_string(stored.result.seed) + ".json";
    write_text_file((dir / "artifacts" / name).string(), result_to_json(stored.result, stored.train_size));
  }
  if (!output.failures.empty()) {
    write_text_file((dir / "failures.json").string(), nlohmann::json(output.failures).dump(2) + "\n");
  }
  nlohmann::json manifest;
  manifest["tool"] = "wfnas";
  manifest["version"] = "0.1.0";
  manifest["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                              std::to_string(EIGEN_MINOR_VERSION);
  manifest["config"] = raw_config.values();
  manifest["config_hash"] = sha256_hex(raw_config.canonical());
  manifest["dataset"] = config.dataset;
  manifest["dataset_hash"] = dataset_hash;
  manifest["records"] = output.records.size();
  manifest["failures"] = output.failures.size();
  if (!config.data_path.empty() && fs::exists(config.data_path)) {
    manifest["source_file_hash"] = sha256_file(config.data_path);
  }
  std::vector<std::string> strategy_names;
  for (Strategy s : config.strategies) strategy_names.push_back(to_string(s));
  const TrainConfig& t = config.train;
  manifest["effective"] = {
      {"group_a", config.group_a},
      {"group_b", config.group_b},
      {"train_sizes", config.train_sizes},
      {"n_test_per_class", config.n_test_per_class},
      {"n_runs", config.n_runs},
      {"base_seed", config.base_seed},
      {"strategies", strategy_names},
      {"m_hard", t.m_hard},
      {"m_soft", t.m_soft},
      {"epochs", t.epochs},
      {"batch_size", t.batch_size},
      {"lr_schedule", t.lr.kind == LrSchedule::Kind::constant ? "constant" : "inverse"},
      {"lr", t.lr.value},
      {"init_mean", t.init_mean},
      {"init_scale", t.init_scale},
      {"real_init_scale", t.real_init_scale},
      {"real_lr", t.real_lr},
      {"lottery_rounds", config.options.lottery_rounds},
      {"lottery_retrain", config.options.lottery_retrain},
      {"agnostic_architectures", config.options.agnostic_architectures},
      {"agnostic_shared_samples", config.options.agnostic_shared_samples},
      {"pooling", config.pooling == Pooling::average ? "average" : "max"},
  };
  using Period = std::chrono::steady_clock::period;
  manifest["timer"] = {{"clock", "steady_clock"},
                       {"resolution_seconds", static_cast<double>(Period::num) / static_cast<double>(Period::den)},
                       {"scope", "training and threshold search only; ingestion and evaluation excluded"}};
  write_text_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");
}

std::vector<StoredResult> load_stored_results(const std::string& dir) {
  const fs::path artifacts = fs::path(dir) / "artifacts";
  if (!fs::is_directory(artifacts)) throw Error("no artifacts directory under " + dir);
  std::vector<StoredResult> out;
  for (const auto& entry : fs::directory_iterator(artifacts)) {
    if (entry.path().extension() != ".json") continue;
    StoredResult stored;
    stored.result = result_from_json(read_text_file(entry.path().string()), &stored.train_size);
    out.push_back(std::move(stored));
  }
  std::sort(out.begin(), out.end(), [](const StoredResult& a, const StoredResult& b) {
    return std::make_tuple(a.train_size, static_cast<int>(a.result.strategy), a.result.seed) <
           std::make_tuple(b.train_size, static_cast<int>(b.result.strategy), b.result.seed);
  });
  return out;
}

SpectraReport run_spectra_report(const std::vector<StoredResult>& results) {
  SpectraReport report;
  for (const auto& stored : results) {
    const VectorXd weights = stored.result.effective_weights().cwiseAbs();
    report.signatures.push_back(spectral_signature(weights, stored.network_id()));
    report.strategies.push_back(to_string(stored.result.strategy));
  }
  if (report.signatures.size() >= 3) report.pca = spectra_pca(report.signatures);

  std::map<std::string, std::vector<const SpectralSignature*>> by_strategy;
  for (std::size_t i = 0; i < report.signatures.size(); ++i) {
    by_strategy[report.strategies[i]].push_back(&report.signatures[i]);
  }
  for (const auto& [strategy, sigs] : by_strategy) {
    const Index n = sigs.front()->eigenvalues.size();
    std::vector<double> column(sigs.size());
    for (Index k = 0; k < n; ++k) {
      for (std::size_t s = 0; s < sigs.size(); ++s) column[s] = sigs[s]->eigenvalues(k);
      report.summary.push_back({strategy, k, median(column), quantile(column, 0.25), quantile(column, 0.75)});
    }
  }
  return report;
}

void write_spectra_csv(std::ostream& os, const SpectraReport& report) {
  os << "network_id,strategy";
  const Index n = report.signatures.empty() ? 0 : report.signatures.front().eigenvalues.size();
  for (Index k = 0; k < n; ++k) os << ",lambda" << k;
  os << '\n';
  for (std::size_t i = 0; i < report.signatures.size(); ++i) {
    os << report.signatures[i].network_id << ',' << report.strategies[i];
    for (Index k = 0; k < report.signatures[i].eigenvalues.size(); ++k) os << ',' << num(report.signatures[i].eigenvalues(k));
    os << '\n';
  }
}

void write_spectra_summary_csv(std::ostream& os, const SpectraReport& report) {
  os << "strategy,index,median,q25,q75\n";
  for (const auto& row : report.summary) {
    os << row.strategy << ',' << row.index << ',' << num(row.median) << ',' << num(row.q25) << ',' << num(row.q75)
       << '\n';
  }
}

void write_pca_csv(std::ostream& os, const SpectraReport& report) {
  os << "network_id,strategy,pc1,pc2\n";
  for (Index i = 0; i < report.pca.rows(); ++i) {
    const auto s = static_cast<std::size_t>(i);
    os << report.signatures[s].network_id << ',' << report.strategies[s] << ',' << num(report.pca(i, 0)) << ','
       << num(report.pca(i, 1)) << '\n';
  }
}

}  // namespace wfnas
