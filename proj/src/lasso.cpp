#include "grafield/lasso.hpp"

#include <cassert>
#include <cmath>
#include <random>
#include <span>

#include "grafield/error.hpp"
#include "grafield/simd/kernels.hpp"

namespace grafield {
namespace {

struct Standardized {
  Eigen::MatrixXd Z;
  Eigen::VectorXd center;
  Eigen::VectorXd scale;  // 0 marks a constant column, held at zero
  Eigen::VectorXd y;
  double y_mean = 0.0;
};

Standardized standardize(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const LassoOptions& options) {
  const auto m = X.rows();
  const auto q = X.cols();
  Standardized s;
  s.center = options.intercept ? Eigen::VectorXd(X.colwise().mean().transpose()) : Eigen::VectorXd::Zero(q);
  s.scale = Eigen::VectorXd::Ones(q);
  s.Z = X.rowwise() - s.center.transpose();
  for (Eigen::Index j = 0; j < q; ++j) {
    const double rms = std::sqrt(s.Z.col(j).squaredNorm() / double(m));
    if (rms == 0.0) {
      s.scale[j] = 0.0;
      s.Z.col(j).setZero();
    } else if (options.standardize) {
      s.scale[j] = rms;
      s.Z.col(j) /= rms;
    }
  }
  s.y_mean = options.intercept ? y.mean() : 0.0;
  s.y = y.array() - s.y_mean;
  return s;
}

void check_inputs(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() != y.size()) throw ValidationError("design has " + std::to_string(X.rows()) + " rows but the response has " +
                                                  std::to_string(y.size()));
  if (y.size() == 0) throw ValidationError("regression needs at least one observation");
  if (!X.allFinite() || !y.allFinite()) throw ValidationError("regression inputs contain non-finite values");
}

std::span<const double> col(const Eigen::MatrixXd& a, Eigen::Index j) { return {a.col(j).data(), std::size_t(a.rows())}; }

double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

// Fisher-Yates driven by raw generator bits, so fold membership does not
// depend on the standard library's shuffle.
std::vector<std::size_t> permutation(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const auto j = std::min(i - 1, std::size_t(double(gen() >> 11) * 0x1.0p-53 * double(i)));
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& a, const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd out(Eigen::Index(rows.size()), a.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(Eigen::Index(r)) = a.row(Eigen::Index(rows[r]));
  return out;
}

Eigen::VectorXd take(const Eigen::VectorXd& v, const std::vector<std::size_t>& rows) {
  Eigen::VectorXd out(Eigen::Index(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) out[Eigen::Index(r)] = v[Eigen::Index(rows[r])];
  return out;
}

}  // namespace

LassoFit lasso_solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda, const LassoOptions& options,
                     const std::optional<Eigen::VectorXd>& warm_start) {
  check_inputs(X, y);
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("lasso penalty must be a finite value >= 0");
  const auto q = X.cols();
  const Standardized s = standardize(X, y, options);

  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(q);
  if (warm_start) {
    if (warm_start->size() != q) throw ValidationError("warm start has the wrong length");
    gamma = *warm_start;
    for (Eigen::Index j = 0; j < q; ++j) {
      if (s.scale[j] == 0.0) gamma[j] = 0.0;
    }
  }
  Eigen::VectorXd r = s.y - s.Z * gamma;
  Eigen::VectorXd col_norm2(q);
  for (Eigen::Index j = 0; j < q; ++j) col_norm2[j] = s.Z.col(j).squaredNorm();

  auto objective = [&] { return r.squaredNorm() + lambda * gamma.lpNorm<1>(); };

  LassoFit fit;
  fit.lambda = lambda;
  double previous = objective();
  const std::span<double> r_span(r.data(), std::size_t(r.size()));
  while (fit.sweeps < options.max_sweeps) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < q; ++j) {
      if (col_norm2[j] == 0.0) continue;
      const double rho = simd::dot(col(s.Z, j), r_span) + col_norm2[j] * gamma[j];
      const double updated = soft_threshold(rho, 0.5 * lambda) / col_norm2[j];
      const double delta = updated - gamma[j];
      if (delta != 0.0) {
        simd::axpy(-delta, col(s.Z, j), r_span);
        gamma[j] = updated;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    ++fit.sweeps;
    const double current = objective();
    assert(current <= previous + 1e-10 * std::max(1.0, previous));
    if (options.record_objective) fit.objective_trace.push_back(current);
    previous = current;
    if (max_change < options.tolerance) {
      fit.converged = true;
      break;
    }
  }

  fit.objective = previous;
  fit.standardized_beta = gamma;
  fit.beta = Eigen::VectorXd::Zero(q);
  for (Eigen::Index j = 0; j < q; ++j) {
    if (s.scale[j] != 0.0) fit.beta[j] = gamma[j] / s.scale[j];
  }
  fit.intercept = options.intercept ? s.y_mean - s.center.dot(fit.beta) : 0.0;
  return fit;
}

double lasso_lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const LassoOptions& options) {
  check_inputs(X, y);
  const Standardized s = standardize(X, y, options);
  if (X.cols() == 0) return 0.0;
  return 2.0 * (s.Z.transpose() * s.y).cwiseAbs().maxCoeff();
}

LassoPath lasso_cross_validate(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const LassoOptions& options,
                               const CrossValidationOptions& cv) {
  check_inputs(X, y);
  const auto m = std::size_t(X.rows());
  if (cv.folds < 2 || cv.folds > m) throw ValidationError("cross-validation needs between 2 and m folds");
  if (cv.lambdas.empty() && (cv.grid_size == 0 || !(cv.min_ratio > 0.0 && cv.min_ratio < 1.0))) throw ValidationError("invalid lambda grid");

  LassoPath path;
  const double top = lasso_lambda_max(X, y, options);
  if (!cv.lambdas.empty()) {
    path.lambdas = cv.lambdas;
  } else if (top == 0.0) {
    path.lambdas = {0.0};
  } else {
    for (std::size_t i = 0; i < cv.grid_size; ++i) {
      const double frac = cv.grid_size == 1 ? 0.0 : double(i) / double(cv.grid_size - 1);
      path.lambdas.push_back(top * std::pow(cv.min_ratio, frac));
    }
  }
  const auto grid = path.lambdas.size();

  const auto order = permutation(m, cv.seed);
  Eigen::MatrixXd predictions(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(grid));
  for (std::size_t f = 0; f < cv.folds; ++f) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < m; ++i) (i % cv.folds == f ? test : train).push_back(order[i]);
    const Eigen::MatrixXd X_train = take_rows(X, train);
    const Eigen::VectorXd y_train = take(y, train);
    const Eigen::MatrixXd X_test = take_rows(X, test);
    const double share = double(train.size()) / double(m);
    std::optional<Eigen::VectorXd> warm;
    for (std::size_t g = 0; g < grid; ++g) {
      const LassoFit fit = lasso_solve(X_train, y_train, path.lambdas[g] * share, options, warm);
      warm = fit.standardized_beta;
      const Eigen::VectorXd pred = (X_test * fit.beta).array() + fit.intercept;
      for (std::size_t t = 0; t < test.size(); ++t) predictions(Eigen::Index(test[t]), Eigen::Index(g)) = pred[Eigen::Index(t)];
    }
  }

  path.cv_error.resize(grid);
  for (std::size_t g = 0; g < grid; ++g) {
    path.cv_error[g] = (predictions.col(Eigen::Index(g)) - y).squaredNorm() / double(m);
    if (path.cv_error[g] < path.cv_error[path.best]) path.best = g;
  }
  path.cv_predictions = predictions.col(Eigen::Index(path.best));
  return path;
}

}  // namespace grafield
