#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

namespace grafield {

struct LassoOptions {
  /// Scale columns to unit variance (and centre them when fitting an
  /// intercept) before solving; coefficients are reported on the input scale.
  bool standardize = true;
  /// Fit an unpenalized intercept.
  bool intercept = true;
  /// Stop when no standardized coefficient moves by more than this in a sweep.
  double tolerance = 1e-8;
  std::size_t max_sweeps = 10000;
  /// Keep the objective after every sweep.
  bool record_objective = false;
};

/// Minimizer of ||y - b0 - X beta||^2 + lambda ||gamma||_1, where gamma are the
/// coefficients of the internally standardized columns (gamma = beta when
/// standardization is off).
struct LassoFit {
  Eigen::VectorXd beta;
  double intercept = 0.0;
  double lambda = 0.0;
  /// Objective on the standardized problem at exit.
  double objective = 0.0;
  std::size_t sweeps = 0;
  bool converged = false;
  std::vector<double> objective_trace;
  /// Coefficients on the standardized scale; used for warm starts.
  Eigen::VectorXd standardized_beta;
};

LassoFit lasso_solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda, const LassoOptions& options = {},
                     const std::optional<Eigen::VectorXd>& warm_start = std::nullopt);

/// Smallest lambda at which every coefficient is zero.
double lasso_lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const LassoOptions& options = {});

struct CrossValidationOptions {
  std::size_t folds = 10;
  std::size_t grid_size = 50;
  /// Smallest grid value as a fraction of lambda_max.
  double min_ratio = 1e-4;
  std::uint64_t seed = 20240601;
  /// Explicit decreasing grid; replaces the generated one when non-empty.
  std::vector<double> lambdas;
};

struct LassoPath {
  std::vector<double> lambdas;     // decreasing
  std::vector<double> cv_error;    // mean squared prediction error per lambda
  std::size_t best = 0;            // index of the smallest cv_error
  Eigen::VectorXd cv_predictions;  // held-out predictions at the chosen lambda
};

/// K-fold cross-validation over a log-spaced grid, warm-started along the
/// path. Each fold solves with lambda scaled by its share of the rows so the
/// penalty keeps the same weight relative to the loss.
LassoPath lasso_cross_validate(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const LassoOptions& options = {},
                               const CrossValidationOptions& cv = {});

}  // namespace grafield
