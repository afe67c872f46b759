#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace grafield {

struct KMeansOptions {
  std::size_t max_iterations = 100;
  std::size_t restarts = 50;
  std::uint64_t seed = 20240601;
};

struct KMeansResult {
  std::vector<std::size_t> labels;  // 0-based, renumbered by first appearance
  Eigen::MatrixXd centers;          // k x d, row c is cluster c
  double wcss = 0.0;
  std::size_t best_restart = 0;
  std::size_t iterations = 0;
};

/// Lloyd iterations from k-means++ seeds, best of `restarts` by within-cluster
/// sum of squares (earlier restart wins ties). Rows of `points` are
/// observations. Deterministic for a fixed seed.
KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, const KMeansOptions& options = {});

/// Minimum-cost perfect assignment on a rectangular cost matrix (Hungarian
/// method). Returns, for each row, the assigned column or -1 when there are
/// more rows than columns.
std::vector<long> solve_assignment(const Eigen::MatrixXd& cost);

}  // namespace grafield
