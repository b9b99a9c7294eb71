// Common dense types, the weight layout, and the binary mask type.
#ifndef WFNAS_TYPES_HPP
#define WFNAS_TYPES_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wfnas {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RowMajorMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using VectorXd = Vector<double>;
using MatrixXd = Matrix<double>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of weights for a network of the given width: two width x width blocks.
constexpr Index weight_count(Index width) { return 2 * width * width; }

/// Width I such that weight_count(I) == d; throws if d is not of that form.
Index width_from_weight_count(Index d);

/// Fixed layout of a weight vector: w1 (input -> hidden, rows = hidden units)
/// first in row-major order, then w2 (hidden -> output summands, rows = output
/// units) in row-major order. Entry [w1](j,k) lives at j*I + k and
/// [w2](i,j) at I*I + i*I + j.
template <typename Scalar>
Eigen::Map<const RowMajorMatrix<Scalar>> w1_view(const Scalar* data, Index width) {
  return Eigen::Map<const RowMajorMatrix<Scalar>>(data, width, width);
}
template <typename Scalar>
Eigen::Map<const RowMajorMatrix<Scalar>> w2_view(const Scalar* data, Index width) {
  return Eigen::Map<const RowMajorMatrix<Scalar>>(data + width * width, width, width);
}
template <typename Scalar>
Eigen::Map<RowMajorMatrix<Scalar>> w1_view(Scalar* data, Index width) {
  return Eigen::Map<RowMajorMatrix<Scalar>>(data, width, width);
}
template <typename Scalar>
Eigen::Map<RowMajorMatrix<Scalar>> w2_view(Scalar* data, Index width) {
  return Eigen::Map<RowMajorMatrix<Scalar>>(data + width * width, width, width);
}

/// Unconstrained or effective weights of a width-I network, stored flat.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(Index width) : width_(width), data_(VectorXd::Zero(weight_count(width))) {}
  explicit WeightVector(VectorXd data) : width_(width_from_weight_count(data.size())), data_(std::move(data)) {}

  Index width() const { return width_; }
  Index size() const { return data_.size(); }
  const VectorXd& data() const { return data_; }
  VectorXd& data() { return data_; }

  auto w1() const { return w1_view(data_.data(), width_); }
  auto w2() const { return w2_view(data_.data(), width_); }
  auto w1() { return w1_view(data_.data(), width_); }
  auto w2() { return w2_view(data_.data(), width_); }

  friend bool operator==(const WeightVector& a, const WeightVector& b) {
    return a.width_ == b.width_ && a.data_ == b.data_;
  }

 private:
  Index width_ = 0;
  VectorXd data_;
};

/// A {0,1} vector selecting which of the d possible connections exist.
class BinaryMask {
 public:
  using Bits = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>;

  BinaryMask() = default;
  explicit BinaryMask(Bits bits);
  static BinaryMask ones(Index d) { return BinaryMask(Bits::Ones(d)); }
  static BinaryMask zeros(Index d) { return BinaryMask(Bits::Zero(d)); }
  /// Parses a string of '0'/'1' characters.
  static BinaryMask from_string(const std::string& bits);

  Index size() const { return bits_.size(); }
  const Bits& bits() const { return bits_; }
  bool operator[](Index i) const { return bits_[i] != 0; }
  Index count() const;
  double density() const;
  VectorXd as_weights() const { return bits_.cast<double>(); }
  std::string to_string() const;

  friend bool operator==(const BinaryMask& a, const BinaryMask& b) { return a.bits_ == b.bits_; }

 private:
  Bits bits_;
};

}  // namespace wfnas

#endif  // WFNAS_TYPES_HPP
