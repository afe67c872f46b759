#include <limits>

#include "grafield/error.hpp"
#include "grafield/kmeans.hpp"

namespace grafield {
namespace {

// Shortest augmenting path with potentials; rows <= cols.
std::vector<long> hungarian_wide(const Eigen::MatrixXd& a) {
  const auto n = std::size_t(a.rows());
  const auto m = std::size_t(a.cols());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> owner(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = owner[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(Eigen::Index(i0 - 1), Eigen::Index(j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<long> out(n, -1);
  for (std::size_t j = 1; j <= m; ++j) {
    if (owner[j] != 0) out[owner[j] - 1] = long(j - 1);
  }
  return out;
}

}  // namespace

std::vector<long> solve_assignment(const Eigen::MatrixXd& cost) {
  if (!cost.allFinite()) throw ValidationError("assignment costs must be finite");
  if (cost.rows() <= cost.cols()) return hungarian_wide(cost);
  const auto by_column = hungarian_wide(cost.transpose());
  std::vector<long> out(std::size_t(cost.rows()), -1);
  for (std::size_t c = 0; c < by_column.size(); ++c) out[std::size_t(by_column[c])] = long(c);
  return out;
}

}  // namespace grafield
