#pragma once

#include <Eigen/Dense>
#include <vector>
#include <cstddef>

namespace grafield {

struct SymmetricEigenpairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // unit columns
};

/// Full decomposition of a symmetric matrix, eigenvalues ascending.
SymmetricEigenpairs dense_symmetric_eigen(const Eigen::MatrixXd& a);

/// `count` eigenpairs of largest |lambda| by Lanczos with full
/// reorthogonalisation. The Krylov space grows until every requested Ritz pair
/// has residual <= tolerance * ||A||. Deterministic start vector. Results are
/// ordered by decreasing |lambda|.
/// Sorts `indices` by decreasing |values[i]|. Magnitudes within `rel_tol` of
/// the run's largest count as tied (a +/- pair rarely rounds to the same |x|);
/// ties go to the larger signed value, then the smaller index.
std::vector<Eigen::Index> order_by_magnitude(const Eigen::VectorXd& values, std::vector<Eigen::Index> indices,
                                             double rel_tol = 1e-12);

SymmetricEigenpairs lanczos_largest_magnitude(const Eigen::MatrixXd& a, std::size_t count, double tolerance = 1e-10);

}  // namespace grafield
