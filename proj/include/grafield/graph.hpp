#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace grafield {

/// One undirected edge as read from input. Endpoints are arbitrary labels.
struct Edge {
  std::string u;
  std::string v;
  double weight = 1.0;
};

/// Weighted undirected graph with nonnegative symmetric adjacency.
///
/// Vertices are stored 0-based in a fixed order; `label(i)` gives the name the
/// caller used. When every input label is an integer the order is numeric,
/// otherwise it is the order of first appearance. Self-loops contribute their
/// weight once to both the degree and the total mass, so `total_mass()` is
/// always the sum of the degrees.
class Graph {
 public:
  /// Builds a graph from an edge list. Duplicate edges are summed.
  static Graph from_edges(std::span<const Edge> edges);

  /// Wraps a dense adjacency matrix. Labels default to "1".."n".
  static Graph from_dense(const Eigen::MatrixXd& adjacency, std::vector<std::string> labels = {});

  /// Wraps a sparse adjacency matrix (must already be symmetric).
  static Graph from_sparse(Eigen::SparseMatrix<double> adjacency, std::vector<std::string> labels = {});

  std::size_t size() const noexcept { return labels_.size(); }
  const Eigen::SparseMatrix<double>& adjacency() const noexcept { return adjacency_; }
  Eigen::MatrixXd dense_adjacency() const;
  double weight(std::size_t i, std::size_t j) const { return adjacency_.coeff(Eigen::Index(i), Eigen::Index(j)); }

  const Eigen::VectorXd& degrees() const noexcept { return degrees_; }
  double degree(std::size_t i) const { return degrees_[Eigen::Index(i)]; }
  /// N = sum of all adjacency entries.
  double total_mass() const noexcept { return total_mass_; }
  std::size_t edge_count() const;

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  std::optional<std::size_t> index_of(const std::string& label) const;

  /// Indices of zero-degree vertices, ascending.
  std::vector<std::size_t> isolated_vertices() const;

  /// Connected-component id per vertex (ids ascend in order of the smallest
  /// member).
  std::vector<std::size_t> components() const;

  /// Induced subgraph on the given vertices, keeping their labels.
  Graph subgraph(std::span<const std::size_t> vertices) const;

 private:
  Graph(Eigen::SparseMatrix<double> adjacency, std::vector<std::string> labels);

  Eigen::SparseMatrix<double> adjacency_;
  Eigen::VectorXd degrees_;
  double total_mass_ = 0.0;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Builds and validates a graph from `(u, v, w)` triples.
Graph load_graph(std::span<const Edge> edges);

enum class PmfSource { Mle, Laplace, GoodTuring, Stein, Custom };
std::string to_string(PmfSource source);

/// Probability mass function over the vertices together with its cumulative
/// grid `F(0)=0, F(j)=p(1)+...+p(j)`.
class VertexPmf {
 public:
  /// Validates that `p` is nonnegative and sums to one within 1e-12.
  VertexPmf(Eigen::VectorXd p, PmfSource source, double tau = 0.0);

  std::size_t size() const noexcept { return std::size_t(p_.size()); }
  const Eigen::VectorXd& p() const noexcept { return p_; }
  double operator[](std::size_t j) const { return p_[Eigen::Index(j)]; }
  /// Length n+1, starting at 0 and ending at exactly 1.
  const Eigen::VectorXd& cdf() const noexcept { return cdf_; }
  PmfSource source() const noexcept { return source_; }
  double tau() const noexcept { return tau_; }

  /// Left-continuous quantile: the 0-based vertex j with F(j-1) < u <= F(j).
  /// `u` must lie in (0, 1].
  std::size_t quantile(double u) const;

 private:
  Eigen::VectorXd p_;
  Eigen::VectorXd cdf_;
  PmfSource source_;
  double tau_;
};

enum class JointSource { Mle, Laplace2D };

/// Symmetric joint mass P(x, y) over vertex pairs.
class NetworkPmf {
 public:
  NetworkPmf(Eigen::MatrixXd P, JointSource source, double tau = 0.0);

  std::size_t size() const noexcept { return std::size_t(P_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return P_; }
  double operator()(std::size_t x, std::size_t y) const { return P_(Eigen::Index(x), Eigen::Index(y)); }
  JointSource source() const noexcept { return source_; }
  double tau() const noexcept { return tau_; }
  /// Row sums, i.e. the vertex marginal.
  Eigen::VectorXd marginal() const { return P_.rowwise().sum(); }

 private:
  Eigen::MatrixXd P_;
  JointSource source_;
  double tau_;
};

/// p(j) = d_j / N. Throws IsolatedVertexError if any degree is zero.
VertexPmf vertex_pmf_mle(const Graph& g);

/// P = A / N.
NetworkPmf network_pmf_mle(const Graph& g);

}  // namespace grafield
