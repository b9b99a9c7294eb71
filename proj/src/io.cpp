#include "wfnas/io.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace wfnas {

using nlohmann::json;

namespace {

json vector_to_json(const VectorXd& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

VectorXd vector_from_json(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const VectorXd>(values.data(), static_cast<Index>(values.size()));
}

}  // namespace

std::string model_to_json(const WeightVector& w) {
  json j;
  j["width"] = w.width();
  j["layout"] = kWeightLayoutTag;
  j["values"] = vector_to_json(w.data());
  return j.dump();
}

WeightVector model_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.at("layout").get<std::string>() != kWeightLayoutTag) throw Error("model json: unsupported layout tag");
  WeightVector w(vector_from_json(j.at("values")));
  if (w.width() != j.at("width").get<Index>()) throw Error("model json: width does not match value count");
  return w;
}

std::string result_to_json(const StrategyResult& result, std::size_t train_size) {
  result.validate();
  json j;
  j["strategy"] = to_string(result.strategy);
  j["seed"] = result.seed;
  j["train_size"] = train_size;
  j["train_loss"] = result.train_loss;
  j["wall_clock_seconds"] = result.wall_clock_seconds;
  j["mask"] = result.mask ? json(result.mask->to_string()) : json(nullptr);
  j["real_weights"] = result.real_weights ? vector_to_json(*result.real_weights) : json(nullptr);
  j["percentile"] = result.percentile ? json(*result.percentile) : json(nullptr);
  j["shared_weight"] = result.shared_weight ? json(*result.shared_weight) : json(nullptr);
  j["layout"] = kWeightLayoutTag;
  return j.dump();
}

StrategyResult result_from_json(const std::string& text, std::size_t* train_size) {
  const json j = json::parse(text);
  StrategyResult r;
  r.strategy = strategy_from_string(j.at("strategy").get<std::string>());
  r.seed = j.at("seed").get<std::uint64_t>();
  r.train_loss = j.at("train_loss").get<double>();
  r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
  if (!j.at("mask").is_null()) r.mask = BinaryMask::from_string(j.at("mask").get<std::string>());
  if (!j.at("real_weights").is_null()) r.real_weights = vector_from_json(j.at("real_weights"));
  if (j.contains("percentile") && !j["percentile"].is_null()) r.percentile = j["percentile"].get<int>();
  if (j.contains("shared_weight") && !j["shared_weight"].is_null()) r.shared_weight = j["shared_weight"].get<double>();
  if (train_size) *train_size = j.value("train_size", std::size_t{0});
  r.validate();
  return r;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

}  // namespace wfnas
