#include "wfnas/data.hpp"

#include "wfnas/spectral.hpp"

#include <openssl/evp.h>
#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace wfnas {

namespace {

// Line reader over plain or gzip-compressed files.
class LineReader {
 public:
  explicit LineReader(const std::string& path) : file_(gzopen(path.c_str(), "rb"), &gzclose) {
    if (!file_) throw Error("cannot open " + path);
  }

  bool next(std::string& line) {
    line.clear();
    char buf[8192];
    while (gzgets(file_.get(), buf, sizeof buf) != nullptr) {
      line += buf;
      if (!line.empty() && line.back() == '\n') break;
    }
    if (line.empty()) return false;
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
    ++line_number_;
    return true;
  }

  std::size_t line_number() const { return line_number_; }

 private:
  std::unique_ptr<gzFile_s, decltype(&gzclose)> file_;
  std::size_t line_number_ = 0;
};

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t end = s.find(sep, begin);
    out.push_back(s.substr(begin, end == std::string_view::npos ? std::string_view::npos : end - begin));
    if (end == std::string_view::npos) break;
    begin = end + 1;
  }
  return out;
}

bool parse_int(std::string_view s, long& out) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

double parse_double(std::string_view s, std::size_t line) {
  std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) {
    throw Error("line " + std::to_string(line) + ": cannot parse number '" + tmp + "'");
  }
  return v;
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

const std::array<std::string, 6>& citeseer_classes() {
  static const std::array<std::string, 6> classes{"AI", "Agents", "DB", "HCI", "IR", "ML"};
  return classes;
}

RawDataset load_mnist_csv(const std::string& path) {
  LineReader reader(path);
  RawDataset raw;
  raw.source = SourceTag::mnist_csv;
  std::vector<double> values;
  std::string line;
  while (reader.next(line)) {
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    const std::size_t ln = reader.line_number();
    if (cols.size() != kMnistPixels + 1) {
      throw Error("line " + std::to_string(ln) + ": expected 785 columns, found " + std::to_string(cols.size()));
    }
    long label = 0;
    if (!parse_int(cols[0], label)) {
      // a header row is tolerated on the first line only
      if (ln == 1) continue;
      throw Error("line " + std::to_string(ln) + ": malformed label");
    }
    if (label < 0 || label > 9) throw Error("line " + std::to_string(ln) + ": label out of range 0..9");
    for (std::size_t c = 1; c < cols.size(); ++c) {
      long px = 0;
      if (!parse_int(cols[c], px) || px < 0 || px > 255) {
        throw Error("line " + std::to_string(ln) + ": malformed pixel in column " + std::to_string(c + 1));
      }
      values.push_back(static_cast<double>(px));
    }
    raw.labels.push_back(std::to_string(label));
  }
  const auto n = static_cast<Index>(raw.labels.size());
  raw.features = Eigen::Map<const RowMajorMatrix<double>>(values.data(), n, kMnistPixels);
  for (Index r = 0; r < n; ++r) {
    if ((raw.features.row(r).array() == 0.0).all()) raw.empty_rows.push_back(static_cast<std::size_t>(r));
  }
  return raw;
}

std::array<double, 64> pool_mnist_image(std::span<const double> pixels, Pooling pooling) {
  if (pixels.size() != kMnistPixels) throw Error("pool_mnist_image: expected 784 pixels");
  const Eigen::Map<const RowMajorMatrix<double>> image(pixels.data(), kMnistSide, kMnistSide);
  const auto cropped = image.block(kMnistCrop, kMnistCrop, kPooledSide * kMnistWindow, kPooledSide * kMnistWindow);
  std::array<double, 64> out{};
  for (int r = 0; r < kPooledSide; ++r) {
    for (int c = 0; c < kPooledSide; ++c) {
      const auto window = cropped.block(r * kMnistWindow, c * kMnistWindow, kMnistWindow, kMnistWindow);
      out[static_cast<std::size_t>(r * kPooledSide + c)] =
          pooling == Pooling::average ? window.sum() / double(kMnistWindow * kMnistWindow) : window.maxCoeff();
    }
  }
  return out;
}

ProcessedDataset preprocess_mnist(const RawDataset& raw, Pooling pooling) {
  if (raw.features.cols() != kMnistPixels) throw Error("preprocess_mnist: expected 28x28 images");
  ProcessedDataset out;
  const auto n = static_cast<Index>(raw.size());
  out.vectors.resize(kPooledSide * kPooledSide, n);
  Index kept = 0;
  std::vector<double> pixels(kMnistPixels);
  for (Index r = 0; r < n; ++r) {
    Eigen::Map<RowMajorMatrix<double>>(pixels.data(), 1, kMnistPixels) = raw.features.row(r);
    const auto pooled = pool_mnist_image(pixels, pooling);
    const Eigen::Map<const VectorXd> x(pooled.data(), 64);
    double sum_sq = 0.0;
    for (const double v : pooled) sum_sq += v * v;
    const double norm = std::sqrt(sum_sq);
    if (norm == 0.0) {
      out.excluded_rows.push_back(static_cast<std::size_t>(r));
      continue;
    }
    out.vectors.col(kept++) = x / norm;
    out.labels.push_back(raw.labels[static_cast<std::size_t>(r)]);
    out.source_rows.push_back(static_cast<std::size_t>(r));
  }
  out.vectors.conservativeResize(Eigen::NoChange, kept);
  return out;
}

RawDataset load_citeseer(const std::string& path, std::optional<std::size_t> expected_rows,
                         std::optional<Index> vocabulary) {
  LineReader reader(path);
  RawDataset raw;
  raw.source = SourceTag::citeseer_bow;
  const auto& classes = citeseer_classes();
  std::vector<double> values;
  bool have_width = vocabulary.has_value();
  std::size_t width = vocabulary ? static_cast<std::size_t>(*vocabulary) : 0;
  std::string line;
  while (reader.next(line)) {
    if (line.empty()) continue;
    const std::size_t ln = reader.line_number();
    const auto cols = split(line, '\t');
    if (cols.size() < 2) throw Error("line " + std::to_string(ln) + ": expected id, counts and class");
    const std::size_t n_features = cols.size() - 2;
    if (!have_width) {
      width = n_features;
      have_width = true;
    }
    if (n_features != width) {
      throw Error("line " + std::to_string(ln) + ": ragged row with " + std::to_string(n_features) +
                  " features, expected " + std::to_string(width));
    }
    const std::string label(cols.back());
    if (std::find(classes.begin(), classes.end(), label) == classes.end()) {
      throw Error("line " + std::to_string(ln) + ": unknown class label '" + label + "'");
    }
    for (std::size_t c = 1; c + 1 < cols.size(); ++c) {
      long count = 0;
      if (!parse_int(cols[c], count) || count < 0) {
        throw Error("line " + std::to_string(ln) + ": malformed count in column " + std::to_string(c + 1));
      }
      values.push_back(static_cast<double>(count));
    }
    raw.row_ids.emplace_back(cols.front());
    raw.labels.push_back(label);
  }
  if (expected_rows && *expected_rows != raw.size()) {
    throw Error("citeseer: expected " + std::to_string(*expected_rows) + " rows, found " + std::to_string(raw.size()));
  }
  const auto n = static_cast<Index>(raw.size());
  const auto p = static_cast<Index>(width);
  raw.features = Eigen::Map<const RowMajorMatrix<double>>(values.data(), n, p);
  for (Index r = 0; r < n; ++r) {
    if ((raw.features.row(r).array() == 0.0).all()) raw.empty_rows.push_back(static_cast<std::size_t>(r));
  }
  return raw;
}

PcaProjection pca_project(const MatrixXd& data, Index k) {
  const Index n = data.rows();
  const Index p = data.cols();
  if (k < 1 || n <= k || p < k) {
    throw Error("pca_project: need n > k and p >= k (n=" + std::to_string(n) + ", p=" + std::to_string(p) +
                ", k=" + std::to_string(k) + ")");
  }
  PcaProjection out;
  out.mean = data.colwise().mean().transpose();
  const MatrixXd centred = data.rowwise() - out.mean.transpose();
  const double scale = 1.0 / static_cast<double>(n - 1);

  // Eigen-decompose whichever of the covariance (p x p) or Gram (n x n) form is smaller.
  const bool gram = n < p;
  const MatrixXd form = gram ? MatrixXd(centred * centred.transpose() * scale)
                             : MatrixXd(centred.transpose() * centred * scale);
  const Index m = form.rows();
  VectorXd values;
  MatrixXd vectors;
  JacobiOptions options;
  if (m <= options.max_size) {
    auto eig = jacobi_eigen(form, true, options);
    values = std::move(eig.values);
    vectors = std::move(eig.vectors);
  } else {
    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(form);
    if (solver.info() != Eigen::Success) throw Error("pca_project: eigensolver failed");
    values = solver.eigenvalues();
    vectors = solver.eigenvectors();
  }
  out.total_variance = std::max(0.0, values.sum());

  const double tol = std::max(1.0, values.cwiseAbs().maxCoeff()) * 1e-12 * static_cast<double>(m);
  Index rank = 0;
  for (Index i = 0; i < m; ++i) rank += values(i) > tol ? 1 : 0;
  if (rank < k) throw Error("pca_project: data rank " + std::to_string(rank) + " is below k=" + std::to_string(k));

  out.variances.resize(k);
  out.basis.resize(p, k);
  for (Index c = 0; c < k; ++c) {
    const Index src = m - 1 - c;
    out.variances(c) = values(src);
    VectorXd axis = gram ? VectorXd(centred.transpose() * vectors.col(src)) : VectorXd(vectors.col(src));
    axis.normalize();
    Index arg = 0;
    axis.cwiseAbs().maxCoeff(&arg);
    if (axis(arg) < 0.0) axis = -axis;
    out.basis.col(c) = axis;
  }
  out.scores = centred * out.basis;
  out.projected = out.scores;
  for (Index r = 0; r < n; ++r) {
    const double norm = out.projected.row(r).norm();
    if (norm > 0.0) out.projected.row(r) /= norm;
  }
  return out;
}

ProcessedDataset preprocess_citeseer(const RawDataset& raw, Index k) {
  const PcaProjection pca = pca_project(raw.features, k);
  ProcessedDataset out;
  const auto n = static_cast<Index>(raw.size());
  out.vectors.resize(k, n);
  Index kept = 0;
  for (Index r = 0; r < n; ++r) {
    if (pca.projected.row(r).squaredNorm() == 0.0) {
      out.excluded_rows.push_back(static_cast<std::size_t>(r));
      continue;
    }
    out.vectors.col(kept++) = pca.projected.row(r).transpose();
    out.labels.push_back(raw.labels[static_cast<std::size_t>(r)]);
    out.source_rows.push_back(static_cast<std::size_t>(r));
  }
  out.vectors.conservativeResize(Eigen::NoChange, kept);
  return out;
}

Task build_task(const ProcessedDataset& data, const std::set<std::string>& group_a,
                const std::set<std::string>& group_b, std::size_t n_train_per_class, std::size_t n_test_per_class,
                std::uint64_t seed) {
  if (group_a.empty() || group_b.empty()) throw Error("build_task: both groups must be nonempty");
  for (const auto& label : group_a) {
    if (group_b.count(label)) throw Error("build_task: class '" + label + "' is in both groups");
  }
  if (n_train_per_class == 0 || n_test_per_class == 0) throw Error("build_task: per-class counts must be positive");

  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < data.size(); ++i) by_class[data.labels[i]].push_back(i);

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> train_cols, test_cols;
  std::vector<int> train_y, test_y;
  auto draw = [&](const std::set<std::string>& group, int y) {
    for (const auto& label : group) {
      auto rows = by_class[label];
      if (rows.size() < n_train_per_class + n_test_per_class) {
        throw Error("build_task: class '" + label + "' has " + std::to_string(rows.size()) + " examples, need " +
                    std::to_string(n_train_per_class + n_test_per_class));
      }
      std::shuffle(rows.begin(), rows.end(), rng);
      for (std::size_t i = 0; i < n_test_per_class; ++i) {
        test_cols.push_back(rows[i]);
        test_y.push_back(y);
      }
      for (std::size_t i = 0; i < n_train_per_class; ++i) {
        train_cols.push_back(rows[n_test_per_class + i]);
        train_y.push_back(y);
      }
    }
  };
  draw(group_a, 0);
  draw(group_b, 1);

  auto assemble = [&](const std::vector<std::size_t>& cols, const std::vector<int>& ys) {
    ExampleSet set;
    set.inputs.resize(data.width(), static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      set.inputs.col(static_cast<Index>(c)) = data.vectors.col(static_cast<Index>(cols[c]));
      set.ids.push_back(data.source_rows.empty() ? cols[c] : data.source_rows[cols[c]]);
    }
    set.labels = ys;
    set.validate();
    return set;
  };
  Task task;
  task.train = assemble(train_cols, train_y);
  task.test = assemble(test_cols, test_y);
  task.group_a = group_a;
  task.group_b = group_b;
  task.n_train_per_class = n_train_per_class;
  task.n_test_per_class = n_test_per_class;
  return task;
}

void write_processed(std::ostream& os, const ProcessedDataset& data) {
  os << "label";
  for (Index j = 0; j < data.width(); ++j) os << ",x" << j;
  os << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    os << data.labels[i];
    for (Index j = 0; j < data.width(); ++j) os << ',' << format_double(data.vectors(j, static_cast<Index>(i)));
    os << '\n';
  }
}

ProcessedDataset read_processed(const std::string& path) {
  LineReader reader(path);
  std::string line;
  if (!reader.next(line)) throw Error(path + ": empty processed dataset");
  const auto header = split(line, ',');
  if (header.empty() || header[0] != "label") throw Error(path + ": missing 'label' header");
  const auto width = static_cast<Index>(header.size() - 1);
  ProcessedDataset out;
  std::vector<double> values;
  while (reader.next(line)) {
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (static_cast<Index>(cols.size()) != width + 1) {
      throw Error(path + ": line " + std::to_string(reader.line_number()) + " has wrong column count");
    }
    out.labels.emplace_back(cols[0]);
    for (std::size_t c = 1; c < cols.size(); ++c) values.push_back(parse_double(cols[c], reader.line_number()));
    out.source_rows.push_back(out.labels.size() - 1);
  }
  out.vectors = Eigen::Map<const MatrixXd>(values.data(), width, static_cast<Index>(out.labels.size()));
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

}  // namespace wfnas
