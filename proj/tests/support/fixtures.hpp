#pragma once

// Graphs, generators and oracle access shared by the unit tests and the
// acceptance runner.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "grafield/graph.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return GRAFIELD_TEST_DATA_DIR; }

inline const nlohmann::json& oracles() {
  static const nlohmann::json j = [] {
    std::ifstream in(data_dir() / "oracles.json");
    if (!in) throw std::runtime_error("missing oracles.json");
    return nlohmann::json::parse(in);
  }();
  return j;
}

inline Eigen::MatrixXd matrix(const nlohmann::json& rows) {
  const auto r = Eigen::Index(rows.size());
  const auto c = r == 0 ? Eigen::Index(0) : Eigen::Index(rows[0].size());
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[std::size_t(i)][std::size_t(j)].get<double>();
  }
  return m;
}

inline Eigen::VectorXd vector(const nlohmann::json& values) {
  Eigen::VectorXd v(Eigen::Index(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v[Eigen::Index(i)] = values[i].get<double>();
  return v;
}

inline grafield::Graph graph_from_edges(const std::vector<std::tuple<int, int, double>>& list) {
  std::vector<grafield::Edge> edges;
  for (const auto& [u, v, w] : list) edges.push_back({std::to_string(u), std::to_string(v), w});
  return grafield::load_graph(edges);
}

// Four people, weights are interaction counts.
inline grafield::Graph toy_graph() { return graph_from_edges({{1, 2, 2.0}, {2, 3, 3.0}, {2, 4, 3.0}, {3, 4, 3.0}}); }

inline grafield::Graph complete_graph(int n) {
  std::vector<std::tuple<int, int, double>> e;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) e.emplace_back(i, j, 1.0);
  }
  return graph_from_edges(e);
}

inline grafield::Graph star_graph(int leaves) {
  std::vector<std::tuple<int, int, double>> e;
  for (int j = 2; j <= leaves + 1; ++j) e.emplace_back(1, j, 1.0);
  return graph_from_edges(e);
}

/// Two 5-cliques joined by the edge 5-6.
inline grafield::Graph two_cliques() { return grafield::Graph::from_dense(matrix(oracles()["two_cliques"]["A"])); }

/// mt19937_64 with uniform draws built from the raw bits, so every platform
/// sees the same stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return std::min(n - 1, std::size_t(uniform() * double(n))); }
  bool bernoulli(double p) { return uniform() < p; }
  double normal() {
    // Box-Muller on (0, 1] draws.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 gen_;
};

inline bool connected(const Eigen::MatrixXd& a) {
  const grafield::Graph g = grafield::Graph::from_dense(a);
  const auto comp = g.components();
  for (auto c : comp) {
    if (c != 0) return false;
  }
  return true;
}

inline bool bipartite(const Eigen::MatrixXd& a) {
  const auto n = a.rows();
  std::vector<int> colour(std::size_t(n), -1);
  for (Eigen::Index s = 0; s < n; ++s) {
    if (colour[std::size_t(s)] >= 0) continue;
    colour[std::size_t(s)] = 0;
    std::vector<Eigen::Index> stack{s};
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (Eigen::Index v = 0; v < n; ++v) {
        if (a(u, v) == 0.0) continue;
        if (colour[std::size_t(v)] < 0) {
          colour[std::size_t(v)] = 1 - colour[std::size_t(u)];
          stack.push_back(v);
        } else if (colour[std::size_t(v)] == colour[std::size_t(u)]) {
          return false;
        }
      }
    }
  }
  return true;
}

/// Random connected graph on n vertices. Edges appear with probability
/// `density`; weighted graphs draw weights uniformly from [0.5, 3).
inline Eigen::MatrixXd random_connected_adjacency(Rng& rng, Eigen::Index n, double density, bool weighted,
                                                  bool allow_bipartite = true) {
  for (;;) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (rng.bernoulli(density)) a(i, j) = a(j, i) = weighted ? 0.5 + 2.5 * rng.uniform() : 1.0;
      }
    }
    if (connected(a) && (allow_bipartite || !bipartite(a))) return a;
  }
}

inline grafield::Graph random_connected_graph(Rng& rng, Eigen::Index n, double density, bool weighted,
                                              bool allow_bipartite = true) {
  return grafield::Graph::from_dense(random_connected_adjacency(rng, n, density, weighted, allow_bipartite));
}

/// Any nonnegative symmetric matrix, possibly disconnected, no zero rows.
inline grafield::Graph random_graph(Rng& rng, Eigen::Index n) {
  for (;;) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (rng.bernoulli(0.3)) a(i, j) = a(j, i) = 5.0 * rng.uniform();
      }
    }
    if ((a.rowwise().sum().array() > 0.0).all()) return grafield::Graph::from_dense(a);
  }
}

struct PlantedGraph {
  grafield::Graph graph;
  std::vector<int> truth;
};

/// Two equal blocks with within/between edge probabilities, plus pendant
/// vertices each hanging off one uniformly chosen block vertex (and labelled
/// with that vertex's block). Block vertices left without any edge are
/// reattached to a random member of their own block so every degree is
/// positive.
inline PlantedGraph planted_partition(std::uint64_t seed, std::size_t n = 400, double p_in = 0.05, double p_out = 0.005,
                                      std::size_t pendants = 40) {
  Rng rng(seed);
  const std::size_t half = n / 2;
  const std::size_t total = n + pendants;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(Eigen::Index(total), Eigen::Index(total));
  std::vector<int> truth(total);
  for (std::size_t i = 0; i < n; ++i) truth[i] = i < half ? 1 : 2;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.bernoulli(truth[i] == truth[j] ? p_in : p_out)) a(Eigen::Index(i), Eigen::Index(j)) = a(Eigen::Index(j), Eigen::Index(i)) = 1.0;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (a.row(Eigen::Index(i)).sum() > 0.0) continue;
    const std::size_t base = truth[i] == 1 ? 0 : half;
    std::size_t j = i;
    while (j == i) j = base + rng.below(half);
    a(Eigen::Index(i), Eigen::Index(j)) = a(Eigen::Index(j), Eigen::Index(i)) = 1.0;
  }
  for (std::size_t k = 0; k < pendants; ++k) {
    const std::size_t v = n + k;
    const std::size_t host = rng.below(n);
    a(Eigen::Index(v), Eigen::Index(host)) = a(Eigen::Index(host), Eigen::Index(v)) = 1.0;
    truth[v] = truth[host];
  }
  return {grafield::Graph::from_dense(a), std::move(truth)};
}

/// Largest absolute principal angle sine between two column spaces with
/// orthonormal (under `w`) columns.
inline double subspace_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::VectorXd& w) {
  // Largest w-norm of a column of `a` after removing its part in span(b);
  // avoids the sqrt(1 - sigma^2) cancellation near zero.
  const Eigen::MatrixXd residual = a - b * (b.transpose() * w.asDiagonal() * a);
  return (residual.transpose() * w.asDiagonal() * residual).diagonal().cwiseMax(0.0).cwiseSqrt().maxCoeff();
}

// Nontrivial eigenpairs of a reference solver, in decomposition order.
// `values` ascending, `vectors` p-orthonormal. The constant direction is
// projected out of whichever eigenvalue cluster holds it.
struct ReferencePairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

inline ReferencePairs reference_nontrivial(const Eigen::VectorXd& values, const Eigen::MatrixXd& vectors,
                                           const Eigen::VectorXd& p, double gap = 1e-9) {
  const Eigen::Index n = values.size();
  Eigen::Index trivial = 0;
  (vectors.transpose() * p).cwiseAbs().maxCoeff(&trivial);
  Eigen::Index lo = trivial, hi = trivial + 1;
  while (lo > 0 && std::abs(values[lo - 1] - values[lo]) < gap) --lo;
  while (hi < n && std::abs(values[hi] - values[hi - 1]) < gap) ++hi;

  std::vector<std::pair<double, Eigen::VectorXd>> pairs;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i < lo || i >= hi) pairs.emplace_back(values[i], vectors.col(i));
  }
  if (hi - lo > 1) {
    Eigen::MatrixXd W = vectors.middleCols(lo, hi - lo);
    W -= Eigen::VectorXd::Ones(n) * (p.transpose() * W);
    const Eigen::MatrixXd gram = W.transpose() * p.asDiagonal() * W;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    for (Eigen::Index c = 1; c < gram.cols(); ++c) {
      pairs.emplace_back(values[trivial], W * es.eigenvectors().col(c) / std::sqrt(es.eigenvalues()[c]));
    }
  }
  // |lambda| descending; magnitudes equal to 1e-12 are ties, positive first.
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& a, const auto& b) { return std::abs(a.first) > std::abs(b.first); });
  for (std::size_t lo = 0; lo < pairs.size();) {
    const double head = std::abs(pairs[lo].first);
    std::size_t hi = lo + 1;
    while (hi < pairs.size() && head - std::abs(pairs[hi].first) <= 1e-12 * std::max(head, 1.0)) ++hi;
    std::stable_sort(pairs.begin() + long(lo), pairs.begin() + long(hi),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    lo = hi;
  }
  ReferencePairs out{Eigen::VectorXd(Eigen::Index(pairs.size())), Eigen::MatrixXd(n, Eigen::Index(pairs.size()))};
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out.values[Eigen::Index(k)] = pairs[k].first;
    out.vectors.col(Eigen::Index(k)) = pairs[k].second;
  }
  return out;
}

// Worst distance between matching eigenvalue clusters; singletons compared
// entrywise up to sign.
inline double cluster_distance(const Eigen::VectorXd& values, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                               const Eigen::VectorXd& w, double gap = 1e-9) {
  double worst = 0.0;
  Eigen::Index start = 0;
  while (start < values.size()) {
    Eigen::Index end = start + 1;
    while (end < values.size() && std::abs(values[end] - values[start]) < gap) ++end;
    if (end - start == 1) {
      const double sign = a.col(start).dot(b.col(start)) < 0.0 ? -1.0 : 1.0;
      worst = std::max(worst, (a.col(start) - sign * b.col(start)).cwiseAbs().maxCoeff());
    } else {
      worst = std::max(worst, subspace_distance(a.middleCols(start, end - start), b.middleCols(start, end - start), w));
    }
    start = end;
  }
  return worst;
}

}  // namespace fixtures
