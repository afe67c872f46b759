#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "grafield/graph.hpp"
#include "grafield/smoothing.hpp"

namespace grafield {

// ---------------------------------------------------------------------------
// Quantile-domain basis functions
// ---------------------------------------------------------------------------

enum class BasisKind { BlockPulse, Characteristic, RegularizedBlockPulse };
std::string to_string(BasisKind kind);

/// n piecewise-constant functions on [0, 1]. Function j is nonzero only on
/// (u_{j-1}, u_j], where u is the cumulative grid of the generating vertex mass
/// function, and takes the value `amplitude(j)` there.
class BasisFamily {
 public:
  BasisFamily(BasisKind kind, Eigen::VectorXd pmf, double tau);

  BasisKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return std::size_t(pmf_.size()); }
  double tau() const noexcept { return tau_; }
  /// Vertex mass function that defines the grid (smoothed for the
  /// regularized family).
  const Eigen::VectorXd& pmf() const noexcept { return pmf_; }
  /// u_0 = 0 < u_1 < ... < u_n = 1.
  const Eigen::VectorXd& grid() const noexcept { return grid_; }
  const Eigen::VectorXd& amplitudes() const noexcept { return amplitudes_; }

  /// eta_j(u) for 0-based j.
  double evaluate(std::size_t j, double u) const;
  /// Gram matrix <eta_j, eta_k> on L2[0,1]; diagonal for every family here.
  Eigen::MatrixXd gram() const;
  /// Coefficients c with sum_j c_j eta_j = 1 (the constant function).
  Eigen::VectorXd constant_coefficients() const;
  /// Values at the vertices of sum_j theta_j eta_j, i.e. amplitude .* theta.
  Eigen::VectorXd vertex_values(const Eigen::VectorXd& theta) const;

 private:
  BasisKind kind_;
  Eigen::VectorXd pmf_;
  Eigen::VectorXd grid_;
  Eigen::VectorXd amplitudes_;
  double tau_;
};

/// Block-pulse amplitudes p^{-1/2}, characteristic amplitudes 1, or the
/// regularized block-pulse built on a smoothed mass function. For the
/// regularized family `p` must already be the smoothed estimate; `tau` is
/// checked against it when the estimate records one.
BasisFamily build_basis(const VertexPmf& p, BasisKind kind, std::optional<double> tau = std::nullopt);

// ---------------------------------------------------------------------------
// G-matrix and the generalized eigenproblem
// ---------------------------------------------------------------------------

/// Transform coefficients M[j,k] = <eta_j, int (C - 1) eta_k> together with the
/// Gram matrix S of the basis.
struct GMatrix {
  Eigen::MatrixXd M;
  Eigen::MatrixXd S;
  BasisFamily basis;
};

/// Assembles the G-matrix of a joint/vertex mass pair in the given basis.
/// The basis must have been built from `p`.
GMatrix g_matrix(const NetworkPmf& P, const VertexPmf& p, const BasisFamily& basis);

struct SolverOptions {
  /// Dense solver up to this size, Lanczos above.
  std::size_t dense_limit = 2000;
  double lanczos_tolerance = 1e-10;
};

/// Nontrivial eigenpairs of M theta = lambda S theta.
struct SpectralDecomposition {
  /// Signed, ordered by decreasing |lambda|.
  Eigen::VectorXd eigenvalues;
  /// Basis coefficients, one column per eigenpair, S-orthonormal.
  Eigen::MatrixXd theta;
  /// Vertex-domain basis, phi_k(x) = amplitude(x) theta(x, k).
  Eigen::MatrixXd phi;
  BasisKind basis_kind = BasisKind::BlockPulse;
  /// Weights under which the phi columns are orthonormal (the basis pmf).
  Eigen::VectorXd weights;
  /// Source of the vertex mass that generated the basis.
  PmfSource weight_source = PmfSource::Mle;
  /// Eigenvalue of the excluded constant-function direction.
  double trivial_eigenvalue = 0.0;
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return std::size_t(eigenvalues.size()); }
  Eigen::VectorXd magnitudes() const { return eigenvalues.cwiseAbs(); }
};

/// Solves the pencil, drops the pair aligned with the constant function and
/// returns the top `m` remaining pairs by |lambda| (m = 0 means all n - 1).
/// Requests beyond n - 1 are clamped with a warning. Each phi column is
/// oriented so its largest-magnitude entry is positive.
SpectralDecomposition solve_spectrum(const GMatrix& gm, std::size_t m, const SolverOptions& options = {});

/// Convenience: full pipeline from a graph for the named route.
enum class OperatorKind {
  Laplacian,
  CenteredLaplacian,
  Modularity,
  RandomWalk,
  RegLaplacianI,
  RegLaplacianII,
  PageRank,
};
std::string to_string(OperatorKind kind);
std::optional<OperatorKind> parse_operator(const std::string& name);

struct OperatorParams {
  double tau = 0.0;
  double alpha = 0.15;
};

/// G-matrix whose pencil carries the spectrum of `kind`:
///   laplacian, centered, rw -> block-pulse on maximum-likelihood masses
///   modularity              -> characteristic basis on maximum-likelihood masses
///   reg1                    -> tau-regularized block-pulse, empirical joint mass
///   reg2                    -> tau-regularized block-pulse, smoothed joint mass
/// PageRank has no symmetric G-matrix form and is rejected here.
GMatrix g_matrix_for(const Graph& g, OperatorKind kind, const OperatorParams& params);

/// Runs g_matrix_for + solve_spectrum.
SpectralDecomposition graph_spectrum(const Graph& g, OperatorKind kind, const OperatorParams& params, std::size_t m,
                                     const SolverOptions& options = {});

// ---------------------------------------------------------------------------
// Classical shift operators (closed forms)
// ---------------------------------------------------------------------------

struct ShiftOperator {
  OperatorKind kind;
  Eigen::MatrixXd matrix;
  OperatorParams params;
  bool symmetric() const noexcept { return kind != OperatorKind::RandomWalk && kind != OperatorKind::PageRank; }
};

/// L = D^{-1/2} A D^{-1/2};  L* = L - sqrt(p) sqrt(p)^T;  B = A - d d^T / N;
/// T = D^{-1} A;  Type-I = D_tau^{-1/2} A D_tau^{-1/2};
/// Type-II = D_tau^{-1/2} A_tau D_tau^{-1/2};  PageRank = global teleport T_alpha.
ShiftOperator shift_operator(const Graph& g, OperatorKind kind, const OperatorParams& params = {});

/// Eigenpairs of the operator matrix itself, ordered by decreasing |lambda|.
/// Row-stochastic operators return right eigenvectors (real parts).
struct OperatorSpectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd vectors;
};
OperatorSpectrum operator_spectrum(const ShiftOperator& op, std::size_t m = 0);

// ---------------------------------------------------------------------------
// Graph Fourier transform and diffusion geometry
// ---------------------------------------------------------------------------

enum class GftWeighting { Weighted, Unweighted };

/// yhat_k = sum_x y(x) phi_k(x) p(x); `Unweighted` drops the p(x) factor.
Eigen::VectorXd gft(const Eigen::VectorXd& y, const SpectralDecomposition& dec, const VertexPmf& p,
                    GftWeighting weighting = GftWeighting::Weighted);

/// Inverse of the weighted transform restricted to the retained pairs:
/// mean + sum_k yhat_k phi_k.
Eigen::VectorXd inverse_gft(const Eigen::VectorXd& coefficients, double mean, const SpectralDecomposition& dec);

struct DiffusionEmbedding {
  Eigen::MatrixXd coords;  // n x k
  std::vector<std::string> warnings;
};

/// Row x is (lambda_1^t phi_1(x), ..., lambda_k^t phi_k(x)). k = 0 uses all
/// retained pairs. Requires a block-pulse decomposition.
DiffusionEmbedding diffusion_coords(const SpectralDecomposition& dec, unsigned t, std::size_t k = 0);

/// Euclidean distance between diffusion coordinates of two vertices, using
/// every retained pair.
double diffusion_distance(const SpectralDecomposition& dec, std::size_t x, std::size_t x_prime, unsigned t);

}  // namespace grafield
