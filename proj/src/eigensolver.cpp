#include "grafield/eigensolver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "grafield/error.hpp"
#include "grafield/simd/kernels.hpp"

namespace grafield {
namespace {

std::span<double> view(Eigen::VectorXd& v) { return {v.data(), std::size_t(v.size())}; }
std::span<const double> column(const Eigen::MatrixXd& m, Eigen::Index j) {
  return {m.col(j).data(), std::size_t(m.rows())};
}

// Uniform doubles in [-1, 1) built directly from generator bits so the start
// vector does not depend on the standard library's distribution code.
Eigen::VectorXd start_vector(Eigen::Index n, std::uint64_t salt) {
  std::mt19937_64 gen(0x9e3779b97f4a7c15ULL ^ salt);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = double(gen() >> 11) * 0x1.0p-52 - 1.0;
  return v;
}

// Gram-Schmidt twice against the first `k` basis columns.
void orthogonalise(Eigen::VectorXd& w, const Eigen::MatrixXd& basis, Eigen::Index k) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const double c = simd::dot(column(basis, j), view(w));
      simd::axpy(-c, column(basis, j), view(w));
    }
  }
}

}  // namespace

SymmetricEigenpairs dense_symmetric_eigen(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

std::vector<Eigen::Index> order_by_magnitude(const Eigen::VectorXd& values, std::vector<Eigen::Index> indices,
                                             double rel_tol) {
  std::stable_sort(indices.begin(), indices.end(), [&](Eigen::Index i, Eigen::Index j) {
    const double ai = std::abs(values[i]), aj = std::abs(values[j]);
    return ai != aj ? ai > aj : i < j;
  });
  // Exact sort first so the runs are contiguous and well defined.
  auto start = indices.begin();
  while (start != indices.end()) {
    const double head = std::abs(values[*start]);
    auto end = std::next(start);
    while (end != indices.end() && head - std::abs(values[*end]) <= rel_tol * std::max(head, 1.0)) ++end;
    std::stable_sort(start, end, [&](Eigen::Index i, Eigen::Index j) {
      return values[i] != values[j] ? values[i] > values[j] : i < j;
    });
    start = end;
  }
  return indices;
}

SymmetricEigenpairs lanczos_largest_magnitude(const Eigen::MatrixXd& a, std::size_t count, double tolerance) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw ValidationError("Lanczos needs a square matrix");
  if (count == 0 || Eigen::Index(count) > n) throw ValidationError("Lanczos eigenpair count out of range");
  const auto want = Eigen::Index(count);

  Eigen::Index krylov = std::min<Eigen::Index>(n, std::max<Eigen::Index>(2 * want + 20, 60));
  for (;;) {
    Eigen::MatrixXd Q(n, krylov);
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(krylov);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(krylov);  // beta[j] couples q_j and q_{j+1}

    Eigen::VectorXd q = start_vector(n, 0);
    q.normalize();
    Q.col(0) = q;
    double scale = 0.0;
    Eigen::VectorXd w(n);
    Eigen::Index built = krylov;
    for (Eigen::Index j = 0; j < krylov; ++j) {
      w.noalias() = a * Q.col(j);
      alpha[j] = simd::dot(column(Q, j), view(w));
      orthogonalise(w, Q, j + 1);
      scale = std::max(scale, std::abs(alpha[j]));
      if (j + 1 == krylov) {
        beta[j] = w.norm();
        break;
      }
      double b = w.norm();
      if (b <= 1e-14 * std::max(scale, 1.0)) {
        // Invariant subspace: continue from a fresh direction, decoupled.
        b = 0.0;
        w = start_vector(n, std::uint64_t(j + 1));
        orthogonalise(w, Q, j + 1);
        if (w.norm() == 0.0) {
          built = j + 1;
          break;
        }
        beta[j] = 0.0;
        Q.col(j + 1) = w / w.norm();
        continue;
      }
      beta[j] = b;
      Q.col(j + 1) = w / b;
    }

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(built, built);
    for (Eigen::Index j = 0; j < built; ++j) {
      T(j, j) = alpha[j];
      if (j + 1 < built) T(j, j + 1) = T(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri(T);
    if (tri.info() != Eigen::Success) throw NumericalError("Lanczos tridiagonal solve failed");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(built));
    std::iota(order.begin(), order.end(), 0);
    order = order_by_magnitude(tri.eigenvalues(), std::move(order));

    const double norm_estimate = std::max(std::abs(tri.eigenvalues()[order.front()]), 1e-300);
    const Eigen::Index available = std::min(want, built);
    bool converged = available == want;
    const double last_beta = built == krylov ? beta[krylov - 1] : 0.0;
    for (Eigen::Index r = 0; r < available && converged; ++r) {
      const double residual = std::abs(last_beta * tri.eigenvectors()(built - 1, order[std::size_t(r)]));
      if (residual > tolerance * norm_estimate) converged = false;
    }

    if (converged || krylov == n) {
      if (available < want) throw NumericalError("Lanczos could not build enough Krylov vectors");
      SymmetricEigenpairs out{Eigen::VectorXd(want), Eigen::MatrixXd(n, want)};
      for (Eigen::Index r = 0; r < want; ++r) {
        const Eigen::Index idx = order[std::size_t(r)];
        out.values[r] = tri.eigenvalues()[idx];
        out.vectors.col(r) = (Q.leftCols(built) * tri.eigenvectors().col(idx)).normalized();
      }
      return out;
    }
    krylov = std::min<Eigen::Index>(n, 2 * krylov);
  }
}

}  // namespace grafield
