#include "grafield/clustering.hpp"

#include <map>

#include "grafield/error.hpp"
#include "grafield/kmeans.hpp"

namespace grafield {
namespace {

struct Embedding {
  Eigen::MatrixXd rows;
  Eigen::VectorXd eigenvalues;
  std::vector<std::string> warnings;
};

Embedding embed(const Graph& g, std::size_t dims, OperatorKind kind, const OperatorParams& params,
                const SolverOptions& solver) {
  if (kind == OperatorKind::PageRank) {
    // Right eigenvectors of the teleporting walk; the leading one is constant.
    const auto spec = operator_spectrum(shift_operator(g, kind, params), dims + 1);
    return {spec.vectors.rightCols(Eigen::Index(dims)), spec.eigenvalues.tail(Eigen::Index(dims)), {}};
  }
  const auto dec = graph_spectrum(g, kind, params, dims, solver);
  return {dec.phi, dec.eigenvalues, dec.warnings};
}

}  // namespace

ClusterResult spectral_cluster(const Graph& g, std::size_t k, OperatorKind kind, const OperatorParams& params,
                               std::uint64_t seed, const ClusterOptions& options) {
  const std::size_t n = g.size();
  if (k < 2) throw ValidationError("clustering needs k >= 2");
  if (k > n) throw ValidationError("k = " + std::to_string(k) + " exceeds the number of vertices (" + std::to_string(n) + ")");

  ClusterResult out;
  out.seed = seed;
  out.restarts = options.restarts;
  if (k == n) {
    out.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.labels[i] = int(i + 1);
    return out;
  }

  const std::size_t dims = std::min(options.full_dimension ? k : k - 1, n - 1);
  Embedding e = embed(g, dims, kind, params, options.solver);
  if (options.row_normalize) {
    for (Eigen::Index i = 0; i < e.rows.rows(); ++i) {
      const double norm = e.rows.row(i).norm();
      if (norm > 0.0) e.rows.row(i) /= norm;
    }
  }
  const auto km = kmeans(e.rows, k, KMeansOptions{options.max_iterations, options.restarts, seed});
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.labels[i] = int(km.labels[i] + 1);
  out.wcss = km.wcss;
  out.eigenvalues = std::move(e.eigenvalues);
  out.warnings = std::move(e.warnings);
  return out;
}

double misclassification(const std::vector<int>& labels, const std::vector<int>& truth) {
  if (labels.size() != truth.size()) {
    throw ValidationError("label vectors differ in length (" + std::to_string(labels.size()) + " vs " +
                          std::to_string(truth.size()) + ")");
  }
  if (labels.empty()) throw ValidationError("no labels to compare");
  std::map<int, Eigen::Index> pred_ids, true_ids;
  for (int l : labels) pred_ids.emplace(l, Eigen::Index(pred_ids.size()));
  for (int t : truth) true_ids.emplace(t, Eigen::Index(true_ids.size()));
  Eigen::MatrixXd confusion = Eigen::MatrixXd::Zero(Eigen::Index(pred_ids.size()), Eigen::Index(true_ids.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) confusion(pred_ids[labels[i]], true_ids[truth[i]]) += 1.0;

  const auto match = solve_assignment(-confusion);
  double agreed = 0.0;
  for (std::size_t r = 0; r < match.size(); ++r) {
    if (match[r] >= 0) agreed += confusion(Eigen::Index(r), match[r]);
  }
  return 1.0 - agreed / double(labels.size());
}

std::size_t choose_k_spectral_gap(const Eigen::VectorXd& eigenvalues) {
  if (eigenvalues.size() < 2) throw ValidationError("the spectral gap needs at least two eigenvalues");
  Eigen::Index best = 0;
  double gap = -1.0;
  for (Eigen::Index j = 0; j + 1 < eigenvalues.size(); ++j) {
    const double g = std::abs(std::abs(eigenvalues[j]) - std::abs(eigenvalues[j + 1]));
    if (g > gap) {
      gap = g;
      best = j;
    }
  }
  return std::size_t(best) + 2;
}

}  // namespace grafield
