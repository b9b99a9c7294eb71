// JSON records for models and strategy results.
#ifndef WFNAS_IO_HPP
#define WFNAS_IO_HPP

#include "wfnas/strategies.hpp"
#include "wfnas/types.hpp"

#include <string>

namespace wfnas {

inline constexpr const char* kWeightLayoutTag = "w1-row-major,w2-row-major";

/// {"width": I, "layout": ..., "values": [d doubles]}; values round-trip exactly.
std::string model_to_json(const WeightVector& w);
WeightVector model_from_json(const std::string& text);

/// Strategy result with the mask as a '0'/'1' string and weights as a double array.
std::string result_to_json(const StrategyResult& result, std::size_t train_size);
StrategyResult result_from_json(const std::string& text, std::size_t* train_size = nullptr);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace wfnas

#endif  // WFNAS_IO_HPP
