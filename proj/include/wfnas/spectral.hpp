// Normalized-Laplacian spectra of networks and their low-dimensional comparison.
#ifndef WFNAS_SPECTRAL_HPP
#define WFNAS_SPECTRAL_HPP

#include "wfnas/types.hpp"

#include <Eigen/Jacobi>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace wfnas {

struct JacobiOptions {
  Index max_size = 1024;
  int max_sweeps = 100;
  double relative_tolerance = 1e-12;  // target off-diagonal norm relative to ||M||_F
  double symmetry_tolerance = 1e-10;
};

template <typename Scalar>
struct SymmetricEigen {
  Vector<Scalar> values;   // ascending
  Matrix<Scalar> vectors;  // column i belongs to values(i); empty unless requested
  int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for symmetric matrices.
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> jacobi_eigen(const Eigen::MatrixBase<Derived>& input,
                                                      bool compute_vectors = false,
                                                      const JacobiOptions& options = {}) {
  using Scalar = typename Derived::Scalar;
  const Index n = input.rows();
  if (input.cols() != n) throw Error("jacobi_eigen: matrix is not square");
  if (n > options.max_size) {
    throw Error("jacobi_eigen: size " + std::to_string(n) + " exceeds cap " + std::to_string(options.max_size));
  }
  Matrix<Scalar> a = input;
  if (!a.allFinite()) throw Error("jacobi_eigen: non-finite entry");
  const Scalar asym = n == 0 ? Scalar(0) : (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym >= Scalar(options.symmetry_tolerance)) {
    throw Error("jacobi_eigen: matrix is not symmetric (max asymmetry " + std::to_string(double(asym)) + ")");
  }
  a = (a + a.transpose()) / Scalar(2);

  Matrix<Scalar> v;
  if (compute_vectors) v = Matrix<Scalar>::Identity(n, n);

  auto off_norm = [&] {
    Scalar sum(0);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i)
        if (i != j) sum += a(i, j) * a(i, j);
    return std::sqrt(sum);
  };
  const Scalar target = Scalar(options.relative_tolerance) * a.norm();

  SymmetricEigen<Scalar> out;
  Scalar off = off_norm();
  while (off > target) {
    if (out.sweeps == options.max_sweeps) {
      throw Error("jacobi_eigen: no convergence after " + std::to_string(options.max_sweeps) +
                  " sweeps, off-diagonal norm " + std::to_string(double(off)));
    }
    ++out.sweeps;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (a(p, q) == Scalar(0)) continue;
        Eigen::JacobiRotation<Scalar> rot;
        rot.makeJacobi(a, p, q);
        a.applyOnTheLeft(p, q, rot.adjoint());
        a.applyOnTheRight(p, q, rot);
        a(p, q) = a(q, p) = Scalar(0);
        if (compute_vectors) v.applyOnTheRight(p, q, rot);
      }
    }
    off = off_norm();
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return a(i, i) < a(j, j); });
  out.values.resize(n);
  if (compute_vectors) out.vectors.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    out.values(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
    if (compute_vectors) out.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

/// Ascending eigenvalues of a symmetric matrix.
template <typename Derived>
Vector<typename Derived::Scalar> eigenvalues_symmetric(const Eigen::MatrixBase<Derived>& m,
                                                       const JacobiOptions& options = {}) {
  return jacobi_eigen(m, false, options).values;
}

/// Symmetric block adjacency of the output/hidden/input layers with self-loops:
///   [ 1    W2   0  ]
///   [ W2^T 1    W1 ]
///   [ 0    W1^T 1  ]
template <typename D1, typename D2>
Matrix<typename D1::Scalar> assemble_adjacency(const Eigen::MatrixBase<D1>& w1, const Eigen::MatrixBase<D2>& w2) {
  using Scalar = typename D1::Scalar;
  const Index I = w1.rows();
  if (w1.cols() != I || w2.rows() != I || w2.cols() != I) throw Error("assemble_adjacency: blocks must be I x I");
  if ((w1.array() < Scalar(0)).any() || (w2.array() < Scalar(0)).any()) {
    throw Error("assemble_adjacency: negative weight");
  }
  Matrix<Scalar> a = Matrix<Scalar>::Identity(3 * I, 3 * I);
  a.block(0, I, I, I) = w2;
  a.block(I, 0, I, I) = w2.transpose();
  a.block(I, 2 * I, I, I) = w1;
  a.block(2 * I, I, I, I) = w1.transpose();
  return a;
}

/// L = Id - D^{-1/2} A D^{-1/2} with D the diagonal of row sums.
template <typename Derived>
Matrix<typename Derived::Scalar> normalized_laplacian(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const Index n = a.rows();
  if (a.cols() != n) throw Error("normalized_laplacian: matrix is not square");
  const Vector<Scalar> degree = a.rowwise().sum();
  if ((degree.array() <= Scalar(0)).any()) throw Error("normalized_laplacian: nonpositive degree");
  const Vector<Scalar> inv_sqrt = degree.array().rsqrt();
  Matrix<Scalar> l = -(inv_sqrt.asDiagonal() * a * inv_sqrt.asDiagonal());
  l.diagonal().array() += Scalar(1);
  return l;
}

struct SpectralSignature {
  std::string network_id;
  VectorXd eigenvalues;  // ascending, length 3I
};

/// Signature of a network given its (nonnegative) effective weights in the
/// standard w1-then-w2 layout.
SpectralSignature spectral_signature(const Eigen::Ref<const VectorXd>& weights, std::string network_id);

double spectral_distance(const SpectralSignature& a, const SpectralSignature& b);

/// 2-d PCA coordinates of the signatures (one row each). The largest-magnitude
/// coordinate of each principal axis is made positive.
MatrixXd spectra_pca(const std::vector<SpectralSignature>& signatures);

}  // namespace wfnas

#endif  // WFNAS_SPECTRAL_HPP
