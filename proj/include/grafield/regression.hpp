#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "grafield/graph.hpp"
#include "grafield/lasso.hpp"
#include "grafield/smoothing.hpp"
#include "grafield/spectral.hpp"

namespace grafield {

struct SpatialDataset {
  Eigen::MatrixXd coords;  // n x 2
  Eigen::VectorXd y;
  Eigen::MatrixXd X;  // n x p
  std::vector<std::string> names;
  std::vector<bool> categorical;
  std::string response;

  std::size_t size() const noexcept { return std::size_t(y.size()); }
};

struct SpatialColumns {
  std::string x = "x";
  std::string y = "y";
  std::string response = "zinc";
  std::vector<std::string> covariates{"ffreq", "dist", "soil"};
  std::vector<std::string> categorical{"ffreq", "soil"};
};

/// Reads a comma-separated table with a header row. Rejects missing columns,
/// unparsable numbers and coincident locations.
SpatialDataset parse_spatial_csv(std::istream& in, const SpatialColumns& columns = {});
SpatialDataset read_spatial_csv(const std::filesystem::path& path, const SpatialColumns& columns = {});

/// Largest nearest-neighbour distance.
double coverage_radius(const Eigen::MatrixXd& coords);

enum class EdgeWeighting { Binary, Gaussian };

/// Joins every pair closer than the coverage radius (inclusive). Binary weights
/// by default; Gaussian uses exp(-d^2 / (2 r^2)).
Graph build_spatial_graph(const Eigen::MatrixXd& coords, EdgeWeighting weighting = EdgeWeighting::Binary);

struct RegressionOptions {
  /// Number of graph basis columns; 0 fits the covariates alone.
  std::size_t k = 25;
  OperatorKind kind = OperatorKind::RegLaplacianI;
  TauPolicy tau = TauPolicy::minimax();
  /// Fixed penalty; cross-validated when empty.
  std::optional<double> lambda;
  bool log_y = false;
  bool one_hot = false;
  EdgeWeighting weighting = EdgeWeighting::Binary;
  LassoOptions lasso{};
  CrossValidationOptions cv{};
  SolverOptions solver{};
};

struct RegressionFit {
  Eigen::VectorXd beta;  // graph basis columns first, then covariates
  double intercept = 0.0;
  std::vector<std::string> names;
  double lambda = 0.0;
  double r2 = 0.0;     // in-sample
  double r2_cv = 0.0;  // from held-out fold predictions at the same lambda
  std::vector<std::size_t> selected;
  double objective = 0.0;
  double tau = 0.0;
  /// sqrt(N)/n of the constructed graph.
  double minimax_tau = 0.0;
  double radius = 0.0;
  Eigen::MatrixXd phi;
  Eigen::VectorXd eigenvalues;
  std::vector<std::string> warnings;
};

RegressionFit spectral_regression(const SpatialDataset& data, const RegressionOptions& options = {});

/// 1 - SSE / SST.
double r_squared(const Eigen::VectorXd& y, const Eigen::VectorXd& fitted);

}  // namespace grafield
