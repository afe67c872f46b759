#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "grafield/eigensolver.hpp"
#include "grafield/error.hpp"
#include "grafield/spectral.hpp"

namespace grafield {
namespace {

constexpr double kClusterGap = 1e-9;

bool is_diagonal(const Eigen::MatrixXd& s) {
  for (Eigen::Index j = 0; j < s.cols(); ++j) {
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      if (i != j && s(i, j) != 0.0) return false;
    }
  }
  return true;
}

// Rotates the columns of `vectors` listed in `cluster` (an eigenspace) so the
// first of them is the normalised projection of `direction`.
void align_cluster(Eigen::MatrixXd& vectors, const std::vector<Eigen::Index>& cluster, const Eigen::VectorXd& direction) {
  const auto k = Eigen::Index(cluster.size());
  Eigen::MatrixXd block(vectors.rows(), k);
  for (Eigen::Index c = 0; c < k; ++c) block.col(c) = vectors.col(cluster[std::size_t(c)]);
  const Eigen::VectorXd coeff = block.transpose() * direction;
  if (coeff.norm() == 0.0) return;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(coeff);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(k, k);
  if (Q.col(0).dot(coeff) < 0.0) Q.col(0) = -Q.col(0);
  block = block * Q;
  for (Eigen::Index c = 0; c < k; ++c) vectors.col(cluster[std::size_t(c)]) = block.col(c);
}

}  // namespace

SpectralDecomposition solve_spectrum(const GMatrix& gm, std::size_t m, const SolverOptions& options) {
  const Eigen::Index n = gm.M.rows();
  if (n < 2) throw ValidationError("a spectrum needs at least two vertices");
  if (gm.M.cols() != n || gm.S.rows() != n || gm.S.cols() != n) throw ValidationError("G-matrix and Gram matrix sizes differ");

  SpectralDecomposition dec;
  dec.basis_kind = gm.basis.kind();
  dec.weights = gm.basis.pmf();

  std::size_t wanted = m == 0 ? std::size_t(n - 1) : m;
  if (wanted > std::size_t(n - 1)) {
    dec.warnings.push_back("requested " + std::to_string(m) + " eigenpairs but only " + std::to_string(n - 1) +
                           " nontrivial pairs exist; clamped");
    wanted = std::size_t(n - 1);
  }

  const bool diagonal_gram = is_diagonal(gm.S);
  Eigen::VectorXd s_inv_sqrt;
  Eigen::VectorXd s_sqrt;
  if (diagonal_gram) {
    s_sqrt = gm.S.diagonal().cwiseSqrt();
    if ((s_sqrt.array() <= 0.0).any()) throw NumericalError("Gram matrix is not positive definite");
    s_inv_sqrt = s_sqrt.cwiseInverse();
  }

  // Unit constant-function direction in the reduced (S^{1/2}-scaled) space.
  Eigen::VectorXd trivial = gm.basis.constant_coefficients();
  trivial /= std::sqrt(trivial.dot(gm.S * trivial));
  const Eigen::VectorXd trivial_reduced = diagonal_gram ? Eigen::VectorXd(s_sqrt.cwiseProduct(trivial))
                                                        : Eigen::VectorXd(gm.S * trivial);

  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // reduced-space unit vectors (or S-orthonormal theta for a full Gram)
  const bool use_lanczos = diagonal_gram && std::size_t(n) > options.dense_limit;
  if (use_lanczos) {
    const Eigen::MatrixXd reduced = s_inv_sqrt.asDiagonal() * gm.M * s_inv_sqrt.asDiagonal();
    const auto count = std::min<std::size_t>(std::size_t(n), wanted + 1);
    auto pairs = lanczos_largest_magnitude(0.5 * (reduced + reduced.transpose()), count, options.lanczos_tolerance);
    values = std::move(pairs.values);
    vectors = std::move(pairs.vectors);
  } else if (diagonal_gram) {
    const Eigen::MatrixXd reduced = s_inv_sqrt.asDiagonal() * gm.M * s_inv_sqrt.asDiagonal();
    auto pairs = dense_symmetric_eigen(0.5 * (reduced + reduced.transpose()));
    values = std::move(pairs.values);
    vectors = std::move(pairs.vectors);
  } else {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(gm.M, gm.S);
    if (solver.info() != Eigen::Success) throw NumericalError("generalized eigensolver did not converge");
    values = solver.eigenvalues();
    vectors = solver.eigenvectors();
  }

  // In the full-Gram case the overlap uses theta^T S t directly.
  auto overlap = [&](Eigen::Index i) {
    return diagonal_gram ? std::abs(vectors.col(i).dot(trivial_reduced)) : std::abs(vectors.col(i).dot(gm.S * trivial));
  };

  const auto computed = values.size();
  Eigen::Index trivial_index = -1;
  double best = -1.0;
  for (Eigen::Index i = 0; i < computed; ++i) {
    const double o = overlap(i);
    if (o > best) {
      best = o;
      trivial_index = i;
    }
  }

  if (!use_lanczos) {
    // Every pair is available; if the constant direction sits inside a
    // repeated eigenvalue, rotate that eigenspace so one vector carries it.
    std::vector<Eigen::Index> cluster;
    for (Eigen::Index i = 0; i < computed; ++i) {
      if (std::abs(values[i] - values[trivial_index]) < kClusterGap) cluster.push_back(i);
    }
    if (cluster.size() > 1) {
      // For a full Gram the columns are S-orthonormal theta; an orthogonal
      // rotation keeps them so.
      align_cluster(vectors, cluster, diagonal_gram ? trivial_reduced : Eigen::VectorXd(gm.S * trivial));
      trivial_index = cluster.front();
    }
  } else if (best < std::sqrt(0.5)) {
    // The constant-like pair is not among the largest-magnitude ones.
    trivial_index = -1;
  }

  dec.trivial_eigenvalue = trivial_index >= 0 ? values[trivial_index] : trivial.dot(gm.M * trivial);

  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < computed; ++i) {
    if (i != trivial_index) keep.push_back(i);
  }
  const auto order = order_by_magnitude(values, keep);
  const auto count = Eigen::Index(std::min(wanted, order.size()));

  dec.eigenvalues.resize(count);
  dec.theta.resize(n, count);
  dec.phi.resize(n, count);
  for (Eigen::Index c = 0; c < count; ++c) {
    const Eigen::Index idx = order[std::size_t(c)];
    dec.eigenvalues[c] = values[idx];
    Eigen::VectorXd theta =
        diagonal_gram ? Eigen::VectorXd(s_inv_sqrt.cwiseProduct(vectors.col(idx))) : Eigen::VectorXd(vectors.col(idx));
    Eigen::VectorXd phi = gm.basis.vertex_values(theta);
    Eigen::Index arg = 0;
    phi.cwiseAbs().maxCoeff(&arg);
    if (phi[arg] < 0.0) {
      theta = -theta;
      phi = -phi;
    }
    dec.theta.col(c) = theta;
    dec.phi.col(c) = phi;
  }
  return dec;
}

GMatrix g_matrix_for(const Graph& g, OperatorKind kind, const OperatorParams& params) {
  switch (kind) {
    case OperatorKind::Laplacian:
    case OperatorKind::CenteredLaplacian:
    case OperatorKind::RandomWalk: {
      const VertexPmf p = vertex_pmf_mle(g);
      return g_matrix(network_pmf_mle(g), p, build_basis(p, BasisKind::BlockPulse));
    }
    case OperatorKind::Modularity: {
      const VertexPmf p = vertex_pmf_mle(g);
      return g_matrix(network_pmf_mle(g), p, build_basis(p, BasisKind::Characteristic));
    }
    case OperatorKind::RegLaplacianI:
    case OperatorKind::RegLaplacianII: {
      if (!(params.tau > 0.0)) throw ValidationError(to_string(kind) + " needs tau > 0");
      const VertexPmf p = smooth_vertex_pmf(g, params.tau);
      const NetworkPmf P =
          kind == OperatorKind::RegLaplacianI ? network_pmf_mle(g) : smooth_network_pmf(g, params.tau);
      return g_matrix(P, p, build_basis(p, BasisKind::RegularizedBlockPulse, params.tau));
    }
    case OperatorKind::PageRank:
      throw ValidationError("pagerank is not symmetric and has no G-matrix form; use the operator route");
  }
  throw ValidationError("unknown operator kind");
}

SpectralDecomposition graph_spectrum(const Graph& g, OperatorKind kind, const OperatorParams& params, std::size_t m,
                                     const SolverOptions& options) {
  const GMatrix gm = g_matrix_for(g, kind, params);
  SpectralDecomposition dec = solve_spectrum(gm, m, options);
  switch (kind) {
    case OperatorKind::RegLaplacianI:
    case OperatorKind::RegLaplacianII: dec.weight_source = PmfSource::Laplace; break;
    default: dec.weight_source = PmfSource::Mle; break;
  }
  return dec;
}

}  // namespace grafield
