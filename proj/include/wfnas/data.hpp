// Dataset ingestion and preprocessing into unit-norm 64-dimensional vectors,
// and construction of two-group binary tasks.
#ifndef WFNAS_DATA_HPP
#define WFNAS_DATA_HPP

#include "wfnas/model.hpp"
#include "wfnas/types.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace wfnas {

enum class SourceTag { mnist_csv, citeseer_bow };

struct RawDataset {
  SourceTag source = SourceTag::mnist_csv;
  std::vector<std::string> labels;  // one per row
  MatrixXd features;                // rows x feature-length
  std::vector<std::string> row_ids; // document ids for citeseer, empty for mnist
  std::vector<std::size_t> empty_rows;  // rows whose feature vector is all zero

  std::size_t size() const { return labels.size(); }
};

/// Labelled unit vectors, one column per retained source row.
struct ProcessedDataset {
  std::vector<std::string> labels;
  MatrixXd vectors;                       // width x n
  std::vector<std::size_t> source_rows;   // row index in the raw dataset
  std::vector<std::size_t> excluded_rows; // raw rows dropped because they became all zero

  std::size_t size() const { return labels.size(); }
  Index width() const { return vectors.rows(); }
};

inline constexpr int kMnistSide = 28;
inline constexpr int kMnistPixels = kMnistSide * kMnistSide;
inline constexpr int kMnistCrop = 2;
inline constexpr int kMnistWindow = 3;
inline constexpr int kPooledSide = 8;
inline constexpr int kCiteseerVocabulary = 3703;

/// The six Citeseer class labels.
const std::array<std::string, 6>& citeseer_classes();

/// Reads "label,p0,...,p783" rows (plain or gzip-compressed). Throws with the
/// offending line number on a malformed row.
RawDataset load_mnist_csv(const std::string& path);

enum class Pooling { average, max };

/// Crops 2 pixels per side (28x28 -> 24x24) and pools the 8x8 grid of 3x3
/// windows. Output is row-major over the grid and not normalized.
std::array<double, 64> pool_mnist_image(std::span<const double> pixels, Pooling pooling = Pooling::average);

/// Pools and L2-normalizes every image; images that pool to zero are excluded.
ProcessedDataset preprocess_mnist(const RawDataset& raw, Pooling pooling = Pooling::average);

/// Reads the tab-separated content format: "<doc id> <vocabulary counts...> <class>".
/// If expected_rows is given, the row count must match it.
RawDataset load_citeseer(const std::string& path, std::optional<std::size_t> expected_rows = std::nullopt,
                         std::optional<Index> vocabulary = std::nullopt);

struct PcaProjection {
  MatrixXd projected;   // n x k, each row L2-normalized (zero rows stay zero)
  MatrixXd scores;      // n x k centred coordinates before normalization
  MatrixXd basis;       // p x k, orthonormal columns
  VectorXd mean;        // p
  VectorXd variances;   // k, descending covariance eigenvalues
  double total_variance = 0.0;
};

/// Projects the rows of data (n x p) onto the top-k principal components.
PcaProjection pca_project(const MatrixXd& data, Index k);

/// PCA-reduces the whole corpus to k dimensions and normalizes each document.
ProcessedDataset preprocess_citeseer(const RawDataset& raw, Index k = 64);

struct Task {
  ExampleSet train;
  ExampleSet test;
  std::set<std::string> group_a;  // label y = 0
  std::set<std::string> group_b;  // label y = 1
  std::size_t n_train_per_class = 0;
  std::size_t n_test_per_class = 0;
};

/// Seeded sampling without replacement: per class, the test examples are drawn
/// first and the training examples from the remainder.
Task build_task(const ProcessedDataset& data, const std::set<std::string>& group_a,
                const std::set<std::string>& group_b, std::size_t n_train_per_class,
                std::size_t n_test_per_class, std::uint64_t seed);

/// Canonical processed-dataset CSV: header then "label,x0,...,x{I-1}" rows
/// with round-trip precision.
void write_processed(std::ostream& os, const ProcessedDataset& data);
ProcessedDataset read_processed(const std::string& path);

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::string& path);

}  // namespace wfnas

#endif  // WFNAS_DATA_HPP
