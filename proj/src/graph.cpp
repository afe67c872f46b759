#include "grafield/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "grafield/error.hpp"

namespace grafield {
namespace {

std::optional<long long> parse_integer(const std::string& s) {
  long long value = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || s.empty()) return std::nullopt;
  return value;
}

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i + 1);
  return labels;
}

}  // namespace

Graph::Graph(Eigen::SparseMatrix<double> adjacency, std::vector<std::string> labels)
    : adjacency_(std::move(adjacency)), labels_(std::move(labels)) {
  const auto n = adjacency_.rows();
  if (n == 0) throw ValidationError("graph has no vertices");
  if (adjacency_.cols() != n) throw ValidationError("adjacency matrix must be square");
  if (std::size_t(n) != labels_.size()) throw ValidationError("label count does not match vertex count");
  adjacency_.makeCompressed();

  for (Eigen::Index k = 0; k < adjacency_.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(adjacency_, k); it; ++it) {
      if (!std::isfinite(it.value())) throw ValidationError("non-finite edge weight");
      if (it.value() < 0.0) {
        throw ValidationError("negative edge weight between '" + labels_[std::size_t(it.row())] + "' and '" +
                              labels_[std::size_t(it.col())] + "'");
      }
      // Exact comparison: symmetric inputs are constructed by mirroring.
      if (adjacency_.coeff(it.col(), it.row()) != it.value()) {
        throw ValidationError("adjacency is not symmetric at ('" + labels_[std::size_t(it.row())] + "', '" +
                              labels_[std::size_t(it.col())] + "')");
      }
    }
  }

  degrees_ = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < adjacency_.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(adjacency_, k); it; ++it) degrees_[it.row()] += it.value();
  }
  total_mass_ = degrees_.sum();

  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) throw ValidationError("duplicate vertex label '" + labels_[i] + "'");
  }
}

Graph Graph::from_edges(std::span<const Edge> edges) {
  if (edges.empty()) throw ValidationError("empty edge list");

  std::vector<std::string> labels;
  std::unordered_map<std::string, std::size_t> seen;
  for (const Edge& e : edges) {
    for (const std::string* name : {&e.u, &e.v}) {
      if (name->empty()) throw ValidationError("empty vertex label in edge list");
      if (seen.emplace(*name, labels.size()).second) labels.push_back(*name);
    }
  }

  const bool numeric = std::all_of(labels.begin(), labels.end(), [](const std::string& s) { return parse_integer(s).has_value(); });
  if (numeric) {
    std::sort(labels.begin(), labels.end(),
              [](const std::string& a, const std::string& b) { return *parse_integer(a) < *parse_integer(b); });
    for (std::size_t i = 1; i < labels.size(); ++i) {
      if (*parse_integer(labels[i]) == *parse_integer(labels[i - 1])) {
        throw ValidationError("vertex labels '" + labels[i - 1] + "' and '" + labels[i] + "' denote the same integer");
      }
    }
    for (std::size_t i = 0; i < labels.size(); ++i) seen[labels[i]] = i;
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * edges.size());
  for (const Edge& e : edges) {
    if (!std::isfinite(e.weight)) throw ValidationError("non-finite weight on edge " + e.u + " " + e.v);
    if (e.weight < 0.0) throw ValidationError("negative weight on edge " + e.u + " " + e.v);
    const auto i = Eigen::Index(seen.at(e.u));
    const auto j = Eigen::Index(seen.at(e.v));
    triplets.emplace_back(i, j, e.weight);
    if (i != j) triplets.emplace_back(j, i, e.weight);
  }
  const auto n = Eigen::Index(labels.size());
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());  // duplicates are summed
  return Graph(std::move(a), std::move(labels));
}

Graph Graph::from_dense(const Eigen::MatrixXd& adjacency, std::vector<std::string> labels) {
  if (labels.empty()) labels = default_labels(std::size_t(adjacency.rows()));
  Eigen::SparseMatrix<double> a = adjacency.sparseView();
  return Graph(std::move(a), std::move(labels));
}

Graph Graph::from_sparse(Eigen::SparseMatrix<double> adjacency, std::vector<std::string> labels) {
  if (labels.empty()) labels = default_labels(std::size_t(adjacency.rows()));
  adjacency.prune(0.0);
  return Graph(std::move(adjacency), std::move(labels));
}

Eigen::MatrixXd Graph::dense_adjacency() const { return Eigen::MatrixXd(adjacency_); }

std::size_t Graph::edge_count() const {
  std::size_t count = 0;
  for (Eigen::Index k = 0; k < adjacency_.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(adjacency_, k); it; ++it) {
      if (it.row() <= it.col() && it.value() > 0.0) ++count;
    }
  }
  return count;
}

std::optional<std::size_t> Graph::index_of(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> Graph::isolated_vertices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (degrees_[Eigen::Index(i)] == 0.0) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> Graph::components() const {
  const std::size_t n = size();
  constexpr std::size_t unset = std::size_t(-1);
  std::vector<std::size_t> comp(n, unset);
  std::vector<std::size_t> stack;
  std::size_t next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != unset) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (Eigen::SparseMatrix<double>::InnerIterator it(adjacency_, Eigen::Index(v)); it; ++it) {
        const auto w = std::size_t(it.row());
        if (it.value() > 0.0 && comp[w] == unset) {
          comp[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

Graph Graph::subgraph(std::span<const std::size_t> vertices) const {
  if (vertices.empty()) throw ValidationError("empty vertex set for subgraph");
  std::vector<std::ptrdiff_t> remap(size(), -1);
  std::vector<std::string> labels;
  labels.reserve(vertices.size());
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    if (vertices[k] >= size()) throw ValidationError("subgraph vertex index out of range");
    remap[vertices[k]] = std::ptrdiff_t(k);
    labels.push_back(labels_[vertices[k]]);
  }
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t v : vertices) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(adjacency_, Eigen::Index(v)); it; ++it) {
      const auto r = remap[std::size_t(it.row())];
      if (r >= 0) triplets.emplace_back(r, remap[v], it.value());
    }
  }
  const auto m = Eigen::Index(vertices.size());
  Eigen::SparseMatrix<double> a(m, m);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return Graph(std::move(a), std::move(labels));
}

Graph load_graph(std::span<const Edge> edges) { return Graph::from_edges(edges); }

std::string to_string(PmfSource source) {
  switch (source) {
    case PmfSource::Mle: return "mle";
    case PmfSource::Laplace: return "laplace";
    case PmfSource::GoodTuring: return "good-turing";
    case PmfSource::Stein: return "stein";
    case PmfSource::Custom: return "custom";
  }
  return "unknown";
}

VertexPmf::VertexPmf(Eigen::VectorXd p, PmfSource source, double tau)
    : p_(std::move(p)), source_(source), tau_(tau) {
  if (p_.size() == 0) throw ValidationError("empty probability vector");
  for (Eigen::Index j = 0; j < p_.size(); ++j) {
    if (!std::isfinite(p_[j]) || p_[j] < 0.0) throw ValidationError("vertex probability must be finite and nonnegative");
  }
  const double total = p_.sum();
  if (std::abs(total - 1.0) > 1e-12) {
    throw ValidationError("vertex probabilities sum to " + std::to_string(total) + ", expected 1");
  }
  cdf_.resize(p_.size() + 1);
  cdf_[0] = 0.0;
  for (Eigen::Index j = 0; j < p_.size(); ++j) cdf_[j + 1] = cdf_[j] + p_[j];
  cdf_[p_.size()] = 1.0;
}

std::size_t VertexPmf::quantile(double u) const {
  if (!(u > 0.0 && u <= 1.0)) throw ValidationError("quantile argument must lie in (0, 1]");
  // First breakpoint F(j) >= u, j in 1..n.
  const double* begin = cdf_.data() + 1;
  const double* end = cdf_.data() + cdf_.size();
  const double* hit = std::lower_bound(begin, end, u);
  if (hit == end) hit = end - 1;
  return std::size_t(hit - begin);
}

NetworkPmf::NetworkPmf(Eigen::MatrixXd P, JointSource source, double tau)
    : P_(std::move(P)), source_(source), tau_(tau) {
  if (P_.rows() == 0 || P_.rows() != P_.cols()) throw ValidationError("joint mass must be a nonempty square matrix");
  if (!P_.allFinite() || (P_.array() < 0.0).any()) throw ValidationError("joint mass must be finite and nonnegative");
  const double total = P_.sum();
  if (std::abs(total - 1.0) > 1e-12) {
    throw ValidationError("joint mass sums to " + std::to_string(total) + ", expected 1");
  }
}

VertexPmf vertex_pmf_mle(const Graph& g) {
  const auto isolated = g.isolated_vertices();
  if (!isolated.empty()) throw IsolatedVertexError(isolated.front(), g.label(isolated.front()));
  const double N = g.total_mass();
  return VertexPmf(g.degrees() / N, PmfSource::Mle);
}

NetworkPmf network_pmf_mle(const Graph& g) {
  const double N = g.total_mass();
  if (!(N > 0.0)) throw ValidationError("graph has zero total edge mass");
  return NetworkPmf(g.dense_adjacency() / N, JointSource::Mle);
}

}  // namespace grafield
