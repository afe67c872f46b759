#pragma once

#include <Eigen/Dense>

#include "grafield/graph.hpp"

namespace grafield {

/// Piecewise-constant correlation density field of a graph.
///
/// `density(x, y) = P(x, y) / (p(x) p(y))` is the value of the field on the
/// cell (F(x-1), F(x)] x (F(y-1), F(y)] of the unit square; the cell has area
/// p(x) p(y). All integrals over the field therefore reduce to cell-weighted
/// sums and are exact.
class GraFieldMatrix {
 public:
  GraFieldMatrix(Eigen::MatrixXd density, Eigen::VectorXd marginal);

  std::size_t size() const noexcept { return std::size_t(density_.rows()); }
  const Eigen::MatrixXd& density() const noexcept { return density_; }
  double operator()(std::size_t x, std::size_t y) const { return density_(Eigen::Index(x), Eigen::Index(y)); }
  const Eigen::VectorXd& marginal() const noexcept { return marginal_; }
  /// Area of each cell, p p^T.
  Eigen::MatrixXd cell_measure() const { return marginal_ * marginal_.transpose(); }
  /// Integral of the field over the unit square; equals one for any valid input.
  double total_integral() const;

 private:
  Eigen::MatrixXd density_;
  Eigen::VectorXd marginal_;
};

/// C(x, y) = P(x, y) / (p(x) p(y)). Every p(x) must be positive.
GraFieldMatrix empirical_grafield(const NetworkPmf& P, const VertexPmf& p);

/// Integral of (C - 1)^2 over the unit square, diagonal cells included.
double graph_entropy(const GraFieldMatrix& C);

/// Tie strength between two vertices, i.e. the field value on their cell.
inline double strength(const GraFieldMatrix& C, std::size_t x, std::size_t y) { return C(x, y); }

}  // namespace grafield
