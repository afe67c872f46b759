#include "grafield/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <random>
#include <span>

#include "grafield/error.hpp"
#include "grafield/simd/kernels.hpp"

namespace grafield {
namespace {

// Points are stored one per column so each observation is contiguous.
struct ColumnPoints {
  Eigen::MatrixXd data;  // d x n
  std::span<const double> point(Eigen::Index i) const { return {data.col(i).data(), std::size_t(data.rows())}; }
};

std::mt19937_64 restart_generator(std::uint64_t seed, std::size_t restart) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(restart)};
  return std::mt19937_64(seq);
}

double unit_uniform(std::mt19937_64& gen) { return double(gen() >> 11) * 0x1.0p-53; }

std::size_t uniform_index(std::mt19937_64& gen, std::size_t n) {
  return std::min(n - 1, std::size_t(unit_uniform(gen) * double(n)));
}

Eigen::MatrixXd plus_plus_seeds(const ColumnPoints& pts, std::size_t k, std::mt19937_64& gen) {
  const auto n = std::size_t(pts.data.cols());
  const auto d = pts.data.rows();
  Eigen::MatrixXd centers(d, Eigen::Index(k));
  centers.col(0) = pts.data.col(Eigen::Index(uniform_index(gen, n)));
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  for (std::size_t c = 1; c < k; ++c) {
    const std::span<const double> last(centers.col(Eigen::Index(c - 1)).data(), std::size_t(d));
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], simd::squared_distance(pts.point(Eigen::Index(i)), last));
      total += nearest[i];
    }
    std::size_t chosen = n - 1;
    if (total > 0.0) {
      const double target = unit_uniform(gen) * total;
      double running = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        running += nearest[i];
        if (running > target && nearest[i] > 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = uniform_index(gen, n);
    }
    centers.col(Eigen::Index(c)) = pts.data.col(Eigen::Index(chosen));
  }
  return centers;
}

struct LloydRun {
  std::vector<std::size_t> labels;
  Eigen::MatrixXd centers;
  double wcss;
  std::size_t iterations;
};

LloydRun lloyd(const ColumnPoints& pts, Eigen::MatrixXd centers, std::size_t max_iterations) {
  const auto n = std::size_t(pts.data.cols());
  const auto d = pts.data.rows();
  const auto k = std::size_t(centers.cols());
  std::vector<std::size_t> labels(n, k);
  std::vector<double> dist(n, 0.0);
  std::size_t iter = 0;
  for (; iter < max_iterations; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      for (std::size_t c = 0; c < k; ++c) {
        const double dd = simd::squared_distance(
            pts.point(Eigen::Index(i)), std::span<const double>(centers.col(Eigen::Index(c)).data(), std::size_t(d)));
        if (dd < best) {
          best = dd;
          arg = c;
        }
      }
      dist[i] = best;
      if (labels[i] != arg) {
        labels[i] = arg;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(d, Eigen::Index(k));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sums.col(Eigen::Index(labels[i])) += pts.data.col(Eigen::Index(i));
      ++counts[labels[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centers.col(Eigen::Index(c)) = sums.col(Eigen::Index(c)) / double(counts[c]);
        continue;
      }
      // Empty cluster: move its center onto the point farthest from its own.
      const auto far = std::size_t(std::max_element(dist.begin(), dist.end()) - dist.begin());
      centers.col(Eigen::Index(c)) = pts.data.col(Eigen::Index(far));
      dist[far] = 0.0;
    }
  }

  double wcss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    wcss += simd::squared_distance(pts.point(Eigen::Index(i)),
                                   std::span<const double>(centers.col(Eigen::Index(labels[i])).data(), std::size_t(d)));
  }
  return {std::move(labels), std::move(centers), wcss, iter};
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, const KMeansOptions& options) {
  const auto n = std::size_t(points.rows());
  if (k == 0) throw ValidationError("k-means needs k >= 1");
  if (k > n) throw ValidationError("k = " + std::to_string(k) + " exceeds the number of points (" + std::to_string(n) + ")");
  if (!points.allFinite()) throw ValidationError("k-means input has non-finite coordinates");
  if (options.restarts == 0) throw ValidationError("k-means needs at least one restart");

  const ColumnPoints pts{points.transpose()};
  std::optional<LloydRun> best;
  std::size_t best_restart = 0;
  for (std::size_t r = 0; r < options.restarts; ++r) {
    auto gen = restart_generator(options.seed, r);
    LloydRun run = lloyd(pts, plus_plus_seeds(pts, k, gen), options.max_iterations);
    if (!best || run.wcss < best->wcss) {
      best = std::move(run);
      best_restart = r;
    }
  }

  // Renumber clusters by first appearance so equal partitions print equally.
  std::vector<std::size_t> relabel(k, k);
  std::size_t next = 0;
  KMeansResult out;
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& target = relabel[best->labels[i]];
    if (target == k) target = next++;
    out.labels[i] = target;
  }
  out.centers = Eigen::MatrixXd::Zero(Eigen::Index(k), points.cols());
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t to = relabel[c] == k ? next++ : relabel[c];
    out.centers.row(Eigen::Index(to)) = best->centers.col(Eigen::Index(c)).transpose();
  }
  out.wcss = best->wcss;
  out.best_restart = best_restart;
  out.iterations = best->iterations;
  return out;
}

}  // namespace grafield
