#include "wfnas/model.hpp"

#include <string>

namespace wfnas {

Example::Example(VectorXd input, int label) : x(std::move(input)), y(label) {
  if (y != 0 && y != 1) throw Error("example label must be 0 or 1, got " + std::to_string(y));
}

ExampleSet ExampleSet::subset(std::span<const std::size_t> rows) const {
  ExampleSet out;
  out.inputs.resize(inputs.rows(), static_cast<Index>(rows.size()));
  out.labels.reserve(rows.size());
  out.ids.reserve(rows.size());
  for (std::size_t c = 0; c < rows.size(); ++c) {
    out.inputs.col(static_cast<Index>(c)) = inputs.col(static_cast<Index>(rows[c]));
    out.labels.push_back(labels[rows[c]]);
    out.ids.push_back(ids.empty() ? rows[c] : ids[rows[c]]);
  }
  return out;
}

ExampleSet ExampleSet::from_examples(std::span<const Example> examples) {
  ExampleSet out;
  if (examples.empty()) return out;
  out.inputs.resize(examples.front().x.size(), static_cast<Index>(examples.size()));
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (examples[i].x.size() != out.inputs.rows()) throw Error("examples have differing input widths");
    out.inputs.col(static_cast<Index>(i)) = examples[i].x;
    out.labels.push_back(examples[i].y);
    out.ids.push_back(i);
  }
  return out;
}

void ExampleSet::validate(double tol) const {
  if (static_cast<std::size_t>(inputs.cols()) != labels.size()) throw Error("example set: label count mismatch");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw Error("example set: label at " + std::to_string(i) + " not 0/1");
    const double norm = inputs.col(static_cast<Index>(i)).norm();
    if (std::abs(norm - 1.0) >= tol) {
      throw Error("example set: input " + std::to_string(i) + " has norm " + std::to_string(norm));
    }
  }
}

namespace detail {

void check_dims(Index weights, Index width, Index inputs_rows, std::size_t n_labels, Index n_cols) {
  if (n_cols <= 0) throw Error("model: empty batch");
  if (inputs_rows != width || weights != weight_count(width)) {
    throw Error("model: dimension mismatch, " + std::to_string(weights) + " weights for input width " +
                std::to_string(inputs_rows));
  }
  if (n_labels != static_cast<std::size_t>(n_cols)) throw Error("model: label count does not match batch");
}

}  // namespace detail

double forward(const Eigen::Ref<const VectorXd>& w, const Eigen::Ref<const VectorXd>& x) {
  return TwoLayerNetwork<double>{}.score(w, x);
}

double example_loss(const Eigen::Ref<const VectorXd>& w, const Example& z) {
  return forward(w, z.x) * (1.0 - 2.0 * z.y);
}

double batch_loss(const Eigen::Ref<const VectorXd>& w, const ExampleSet& batch) {
  if (batch.empty()) throw Error("batch_loss: empty batch");
  return TwoLayerNetwork<double>{}.loss(w, batch.inputs, batch.labels);
}

double batch_loss(const Eigen::Ref<const VectorXd>& w, std::span<const Example> batch) {
  if (batch.empty()) throw Error("batch_loss: empty batch");
  return batch_loss(w, ExampleSet::from_examples(batch));
}

VectorXd loss_grad(const Eigen::Ref<const VectorXd>& w, const Example& z) {
  VectorXd grad;
  const int labels[1] = {z.y};
  TwoLayerNetwork<double>{}.loss_grad(w, z.x, labels, grad);
  return grad;
}

}  // namespace wfnas
