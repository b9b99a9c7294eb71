#ifndef WFNAS_TEST_HELPERS_HPP
#define WFNAS_TEST_HELPERS_HPP

#include "wfnas/model.hpp"

#include <random>
#include <string>
#include <vector>

namespace testutil {

inline const std::string kMnist = std::string(WFNAS_DATA_DIR) + "/mnist_5k.csv.gz";

inline wfnas::VectorXd random_vector(wfnas::Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  wfnas::VectorXd v(n);
  for (wfnas::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

inline wfnas::VectorXd random_unit(wfnas::Index n, std::mt19937_64& rng) {
  wfnas::VectorXd v = random_vector(n, rng);
  return v / v.norm();
}

// Balanced random task of unit vectors.
inline wfnas::ExampleSet random_set(wfnas::Index width, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<wfnas::Example> examples;
  for (int i = 0; i < n; ++i) examples.emplace_back(random_unit(width, rng), i % 2);
  return wfnas::ExampleSet::from_examples(examples);
}

}  // namespace testutil

#endif
