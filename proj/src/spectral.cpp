#include "wfnas/spectral.hpp"

namespace wfnas {

SpectralSignature spectral_signature(const Eigen::Ref<const VectorXd>& weights, std::string network_id) {
  const Index width = width_from_weight_count(weights.size());
  const MatrixXd a = assemble_adjacency(w1_view(weights.data(), width), w2_view(weights.data(), width));
  return {std::move(network_id), eigenvalues_symmetric(normalized_laplacian(a))};
}

double spectral_distance(const SpectralSignature& a, const SpectralSignature& b) {
  if (a.eigenvalues.size() != b.eigenvalues.size()) throw Error("spectral_distance: signature lengths differ");
  return (a.eigenvalues - b.eigenvalues).norm();
}

MatrixXd spectra_pca(const std::vector<SpectralSignature>& signatures) {
  if (signatures.size() < 3) throw Error("spectra_pca: need at least 3 signatures");
  const Index n = static_cast<Index>(signatures.size());
  const Index p = signatures.front().eigenvalues.size();
  MatrixXd x(n, p);
  for (Index i = 0; i < n; ++i) {
    const auto& s = signatures[static_cast<std::size_t>(i)].eigenvalues;
    if (s.size() != p) throw Error("spectra_pca: signature lengths differ");
    x.row(i) = s.transpose();
  }
  x.rowwise() -= x.colwise().mean();
  const MatrixXd cov = (x.transpose() * x) / static_cast<double>(n);
  const auto eig = jacobi_eigen(cov, true);

  MatrixXd axes(p, 2);
  for (Index c = 0; c < 2 && c < p; ++c) {
    VectorXd axis = eig.vectors.col(p - 1 - c);
    Index arg = 0;
    axis.cwiseAbs().maxCoeff(&arg);
    if (axis(arg) < 0.0) axis = -axis;
    axes.col(c) = axis;
  }
  return x * axes;
}

}  // namespace wfnas
