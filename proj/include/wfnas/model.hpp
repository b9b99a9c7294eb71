// The two-layer classifier, its sign-weighted loss, and exact gradients.
//
//   score(w, x) = softplus( sum_i tanh( sum_j [w2]_ij tanh( sum_k [w1]_jk x_k ) ) )
//   f(w, (x, y)) = score(w, x) * (1 - 2y)
//
// The outer nonlinearity is softplus, log(1 + e^s), even though the original
// formulation calls it ReLU. A linear-in-weights surrogate with the same
// interface is provided for convex-setting experiments.
#ifndef WFNAS_MODEL_HPP
#define WFNAS_MODEL_HPP

#include "wfnas/types.hpp"

#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace wfnas {

/// One labelled input; x has unit L2 norm, y is 0 or 1.
struct Example {
  VectorXd x;
  int y = 0;

  Example() = default;
  Example(VectorXd input, int label);
};

/// A column-major collection of examples: inputs is I x n.
struct ExampleSet {
  MatrixXd inputs;
  std::vector<int> labels;
  std::vector<std::size_t> ids;  // source-row identity, used for disjointness checks

  Index width() const { return inputs.rows(); }
  std::size_t size() const { return labels.size(); }
  bool empty() const { return labels.empty(); }
  Example at(std::size_t i) const { return Example(inputs.col(static_cast<Index>(i)), labels[i]); }
  /// Copies the selected examples, in order.
  ExampleSet subset(std::span<const std::size_t> rows) const;
  static ExampleSet from_examples(std::span<const Example> examples);
  /// Throws unless every label is 0/1 and every column has unit norm within tol.
  void validate(double tol = 1e-9) const;
};

namespace detail {

template <typename Scalar>
Scalar softplus(Scalar s) {
  return s <= Scalar(0) ? std::log1p(std::exp(s)) : s + std::log1p(std::exp(-s));
}

template <typename Scalar>
Scalar logistic(Scalar s) {
  if (s >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-s));
  const Scalar e = std::exp(s);
  return e / (Scalar(1) + e);
}

void check_dims(Index weights, Index width, Index inputs_rows, std::size_t n_labels, Index n_cols);

}  // namespace detail

/// Concept satisfied by the score models the trainers accept.
template <typename M>
concept ScoreModel = requires(const M& m, const VectorXd& w, const MatrixXd& X, std::span<const int> y,
                              VectorXd& g) {
  { m.scores(w, X) } -> std::convertible_to<VectorXd>;
  { m.loss(w, X, y) } -> std::convertible_to<double>;
  { m.loss_grad(w, X, y, g) } -> std::convertible_to<double>;
};

template <typename Scalar>
class TwoLayerNetwork {
 public:
  using VectorType = Vector<Scalar>;
  using MatrixType = Matrix<Scalar>;

  static std::string name() { return "two-layer"; }

  /// Scores of every column of X.
  VectorType scores(const Eigen::Ref<const VectorType>& w, const Eigen::Ref<const MatrixType>& X) const {
    const Index I = X.rows();
    detail::check_dims(w.size(), I, X.rows(), static_cast<std::size_t>(X.cols()), X.cols());
    const MatrixType H1 = (w1_view(w.data(), I) * X).array().tanh().matrix();
    const MatrixType H2 = (w2_view(w.data(), I) * H1).array().tanh().matrix();
    const VectorType s = H2.colwise().sum().transpose();
    return s.unaryExpr([](Scalar v) { return detail::softplus(v); });
  }

  Scalar score(const Eigen::Ref<const VectorType>& w, const Eigen::Ref<const VectorType>& x) const {
    return scores(w, x)(0);
  }

  /// Mean of score * (1 - 2y) over the columns.
  Scalar loss(const Eigen::Ref<const VectorType>& w, const Eigen::Ref<const MatrixType>& X,
              std::span<const int> y) const {
    detail::check_dims(w.size(), X.rows(), X.rows(), y.size(), X.cols());
    const VectorType s = scores(w, X);
    Scalar total(0);
    for (Index b = 0; b < X.cols(); ++b) total += s(b) * sign(y[static_cast<std::size_t>(b)]);
    return total / static_cast<Scalar>(X.cols());
  }

  /// Mean loss; writes the mean gradient with respect to w into grad.
  Scalar loss_grad(const Eigen::Ref<const VectorType>& w, const Eigen::Ref<const MatrixType>& X,
                   std::span<const int> y, VectorType& grad) const {
    const Index I = X.rows();
    const Index n = X.cols();
    detail::check_dims(w.size(), I, X.rows(), y.size(), n);
    const auto W1 = w1_view(w.data(), I);
    const auto W2 = w2_view(w.data(), I);

    const MatrixType H1 = (W1 * X).array().tanh().matrix();
    const MatrixType H2 = (W2 * H1).array().tanh().matrix();
    const VectorType s = H2.colwise().sum().transpose();

    // d loss / d s for each column, already divided by the batch size.
    VectorType coeff(n);
    Scalar total(0);
    for (Index b = 0; b < n; ++b) {
      const Scalar sg = sign(y[static_cast<std::size_t>(b)]);
      total += detail::softplus(s(b)) * sg;
      coeff(b) = sg * detail::logistic(s(b)) / static_cast<Scalar>(n);
    }

    const MatrixType delta2 = (Scalar(1) - H2.array().square()).matrix() * coeff.asDiagonal();
    const MatrixType delta1 = ((W2.transpose() * delta2).array() * (Scalar(1) - H1.array().square())).matrix();

    grad.resize(w.size());
    w2_view(grad.data(), I).noalias() = delta2 * H1.transpose();
    w1_view(grad.data(), I).noalias() = delta1 * X.transpose();
    return total / static_cast<Scalar>(n);
  }

 private:
  static Scalar sign(int y) { return y == 0 ? Scalar(1) : Scalar(-1); }
};

/// Linear-in-weights score x^T (W1 + W2) x. Its sign-weighted loss is linear,
/// hence convex, in the weights; gradients are bounded by sqrt(2) for unit x.
template <typename Scalar>
class LinearSurrogate {
 public:
  using VectorType = Vector<Scalar>;
  using MatrixType = Matrix<Scalar>;

  static std::string name() { return "linear-surrogate"; }

  VectorType scores(const Eigen::Ref<const VectorType>& w, const Eigen::Ref<const MatrixType>& X) const {
    const Index I = X.rows();
    detail::check_dims(w.size(), I, X.rows(), static_cast<std::size_t>(X.cols()), X.cols());
    const MatrixType S = w1_view(w.data(), I) + w2_view(w.data(), I);
    return (X.array() * (S * X).array()).colwise().sum().transpose();
  }

  Scalar loss(const Eigen::Ref<const VectorType>& w, const Eigen::Ref<const MatrixType>& X,
              std::span<const int> y) const {
    detail::check_dims(w.size(), X.rows(), X.rows(), y.size(), X.cols());
    const VectorType s = scores(w, X);
    Scalar total(0);
    for (Index b = 0; b < X.cols(); ++b) total += s(b) * (y[static_cast<std::size_t>(b)] == 0 ? 1 : -1);
    return total / static_cast<Scalar>(X.cols());
  }

  Scalar loss_grad(const Eigen::Ref<const VectorType>& w, const Eigen::Ref<const MatrixType>& X,
                   std::span<const int> y, VectorType& grad) const {
    const Index I = X.rows();
    const Index n = X.cols();
    detail::check_dims(w.size(), I, X.rows(), y.size(), n);
    VectorType coeff(n);
    for (Index b = 0; b < n; ++b) {
      coeff(b) = Scalar(y[static_cast<std::size_t>(b)] == 0 ? 1 : -1) / static_cast<Scalar>(n);
    }
    const MatrixType outer = X * coeff.asDiagonal() * X.transpose();
    grad.resize(w.size());
    w1_view(grad.data(), I) = outer;
    w2_view(grad.data(), I) = outer;
    return loss(w, X, y);
  }
};

// Convenience entry points for the two-layer network in double precision.

double forward(const Eigen::Ref<const VectorXd>& w, const Eigen::Ref<const VectorXd>& x);
double example_loss(const Eigen::Ref<const VectorXd>& w, const Example& z);
double batch_loss(const Eigen::Ref<const VectorXd>& w, const ExampleSet& batch);
double batch_loss(const Eigen::Ref<const VectorXd>& w, std::span<const Example> batch);
VectorXd loss_grad(const Eigen::Ref<const VectorXd>& w, const Example& z);

/// Model-generic mean loss over a set; throws on an empty set.
template <ScoreModel Model>
double mean_loss(const Model& model, const Eigen::Ref<const VectorXd>& w, const ExampleSet& set) {
  if (set.empty()) throw Error("mean_loss: empty example set");
  return model.loss(w, set.inputs, set.labels);
}

}  // namespace wfnas

#endif  // WFNAS_MODEL_HPP
