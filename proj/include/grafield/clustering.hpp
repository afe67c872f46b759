#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grafield/graph.hpp"
#include "grafield/spectral.hpp"

namespace grafield {

struct ClusterResult {
  std::vector<int> labels;  // 1..k
  double wcss = 0.0;
  std::uint64_t seed = 0;
  std::size_t restarts = 0;
  /// Eigenvalues of the embedding, ordered as solved.
  Eigen::VectorXd eigenvalues;
  std::vector<std::string> warnings;
};

struct ClusterOptions {
  std::size_t restarts = 50;
  std::size_t max_iterations = 100;
  /// Scale every embedded row to unit length before k-means.
  bool row_normalize = false;
  /// Embed in k dimensions instead of k - 1.
  bool full_dimension = false;
  SolverOptions solver{};
};

/// Embeds the vertices with the top nontrivial eigenvectors of `kind` and
/// clusters the rows with k-means.
ClusterResult spectral_cluster(const Graph& g, std::size_t k, OperatorKind kind, const OperatorParams& params,
                               std::uint64_t seed, const ClusterOptions& options = {});

/// Smallest fraction of disagreeing vertices over all matchings of predicted to
/// true class ids.
double misclassification(const std::vector<int>& labels, const std::vector<int>& truth);

/// Largest drop between consecutive magnitudes |lambda_j| of the nontrivial
/// spectrum (ordered as returned); k = j + 1 for 1-based j, ties to the smaller k.
std::size_t choose_k_spectral_gap(const Eigen::VectorXd& eigenvalues);

}  // namespace grafield
