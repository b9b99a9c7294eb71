#include "wfnas/spectral.hpp"

#include "helpers.hpp"

#include <doctest.h>
#include <Eigen/LU>

#include <numeric>

using namespace wfnas;

TEST_CASE("Jacobi eigenvalues match trace, determinant and a library solver") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 2 + trial % 19;
    MatrixXd m(n, n);
    for (Index i = 0; i < n; ++i) m.row(i) = testutil::random_vector(n, rng).transpose();
    const MatrixXd s = (m + m.transpose()) / 2;
    const auto eig = jacobi_eigen(s, true);
    CHECK(eig.values.sum() == doctest::Approx(s.trace()).epsilon(1e-9).scale(1.0));
    CHECK(eig.values.prod() == doctest::Approx(s.fullPivLu().determinant()).epsilon(1e-6));
    for (Index i = 1; i < n; ++i) CHECK(eig.values(i) >= eig.values(i - 1));
    CHECK((s * eig.vectors - eig.vectors * eig.values.asDiagonal()).cwiseAbs().maxCoeff() < 1e-9);
    Eigen::SelfAdjointEigenSolver<MatrixXd> oracle(s);
    CHECK((oracle.eigenvalues() - eig.values).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("Jacobi input errors") {
  CHECK_THROWS_AS(jacobi_eigen(MatrixXd::Zero(2, 3)), Error);
  MatrixXd a = MatrixXd::Identity(3, 3);
  a(0, 1) = 1.0;
  CHECK_THROWS_AS(jacobi_eigen(a), Error);
  a(0, 1) = NAN;
  CHECK_THROWS_AS(jacobi_eigen(a), Error);
  JacobiOptions small;
  small.max_size = 2;
  CHECK_THROWS_AS(jacobi_eigen(MatrixXd::Identity(3, 3), false, small), Error);
}

TEST_CASE("adjacency and Laplacian") {
  const MatrixXd w1 = MatrixXd::Constant(2, 2, 0.5);
  const MatrixXd w2 = MatrixXd::Ones(2, 2);
  const MatrixXd a = assemble_adjacency(w1, w2);
  CHECK(a.rows() == 6);
  CHECK(a.block(0, 2, 2, 2) == w2);
  CHECK(a.block(2, 4, 2, 2) == w1);
  CHECK(a.block(0, 4, 2, 2).isZero());
  CHECK(a.diagonal() == VectorXd::Ones(6));
  const MatrixXd l = normalized_laplacian(a);
  CHECK((l - l.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(assemble_adjacency(MatrixXd(-w1), w2), Error);
}

TEST_CASE("signatures: range, determinism, known graphs") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  VectorXd w(weight_count(8));
  for (Index i = 0; i < w.size(); ++i) w(i) = u(rng) < 0.4 ? 1.0 : 0.0;
  const auto a = spectral_signature(w, "a");
  const auto b = spectral_signature(w, "b");
  CHECK(spectral_distance(a, b) == 0.0);
  CHECK(a.eigenvalues.minCoeff() >= -1e-12);
  CHECK(a.eigenvalues.maxCoeff() <= 2.0 + 1e-9);
  CHECK(a.eigenvalues.size() == 24);

  // All-zero weights: only self loops, L = 0.
  CHECK(spectral_signature(VectorXd::Zero(8), "z").eigenvalues.cwiseAbs().maxCoeff() < 1e-15);
  // All-ones I = 1: path graph with self loops, degrees 2,3,2.
  const auto ones = spectral_signature(VectorXd::Ones(2), "o");
  MatrixXd adj(3, 3);
  adj << 1, 1, 0, 1, 1, 1, 0, 1, 1;
  const VectorXd dinv = adj.rowwise().sum().cwiseSqrt().cwiseInverse();
  const MatrixXd lap = MatrixXd::Identity(3, 3) - dinv.asDiagonal() * adj * dinv.asDiagonal();
  Eigen::SelfAdjointEigenSolver<MatrixXd> oracle(lap);
  CHECK((ones.eigenvalues - oracle.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
  const auto dense = spectral_signature(VectorXd::Ones(weight_count(8)), "d");
  CHECK(spectral_distance(dense, spectral_signature(VectorXd::Ones(weight_count(8)), "d2")) == 0.0);

  VectorXd real = w.cwiseProduct(VectorXd::Constant(w.size(), 0.37));
  CHECK(spectral_distance(a, spectral_signature(real + VectorXd::Constant(w.size(), 0.01).cwiseProduct(w), "r")) > 0);
  CHECK_THROWS_AS(spectral_distance(a, ones), Error);
}

TEST_CASE("hidden-node permutation leaves the signature unchanged") {
  std::mt19937_64 rng(3);
  const Index I = 16;
  const VectorXd w = testutil::random_vector(weight_count(I), rng).cwiseAbs();
  std::vector<Index> perm(static_cast<std::size_t>(I));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  VectorXd p(w.size());
  auto p1 = w1_view(p.data(), I);
  auto p2 = w2_view(p.data(), I);
  for (Index j = 0; j < I; ++j) {
    p1.row(j) = w1_view(w.data(), I).row(perm[static_cast<std::size_t>(j)]);
    p2.col(j) = w2_view(w.data(), I).col(perm[static_cast<std::size_t>(j)]);
  }
  CHECK((spectral_signature(w, "w").eigenvalues - spectral_signature(p, "p").eigenvalues).cwiseAbs().maxCoeff() <
        1e-8);
}

TEST_CASE("spectra PCA") {
  std::mt19937_64 rng(4);
  std::vector<SpectralSignature> sigs;
  for (int i = 0; i < 6; ++i) sigs.push_back(spectral_signature(testutil::random_vector(32, rng).cwiseAbs(), "n"));
  const MatrixXd pcs = spectra_pca(sigs);
  CHECK(pcs.rows() == 6);
  CHECK(pcs.cols() == 2);
  CHECK(pcs.colwise().sum().cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(spectra_pca({sigs[0], sigs[1]}), Error);
}
