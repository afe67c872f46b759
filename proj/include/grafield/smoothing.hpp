#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "grafield/graph.hpp"

namespace grafield {

/// How the additive flattening constant tau is chosen.
///
/// The named rules resolve lazily against a graph: Laplace -> 1,
/// KrichevskyTrofimov -> 1/2, Perks -> 1/n, Minimax -> sqrt(N)/n,
/// SteinDataDriven -> stein_tau(g) (falling back to 1/2 when degenerate).
struct TauPolicy {
  enum class Kind { Fixed, Laplace, KrichevskyTrofimov, Perks, Minimax, SteinDataDriven };

  Kind kind = Kind::Fixed;
  double value = 0.0;  // used by Fixed only

  static TauPolicy fixed(double tau) { return {Kind::Fixed, tau}; }
  static TauPolicy laplace() { return {Kind::Laplace, 0.0}; }
  static TauPolicy krichevsky_trofimov() { return {Kind::KrichevskyTrofimov, 0.0}; }
  static TauPolicy perks() { return {Kind::Perks, 0.0}; }
  static TauPolicy minimax() { return {Kind::Minimax, 0.0}; }
  static TauPolicy stein() { return {Kind::SteinDataDriven, 0.0}; }
};

std::string to_string(TauPolicy::Kind kind);

struct ResolvedTau {
  double value = 0.0;
  std::optional<std::string> warning;
};

/// Binds a policy to a graph. Throws ValidationError for negative fixed tau.
ResolvedTau resolve_tau(const TauPolicy& policy, const Graph& g);

/// Add-tau estimate (d_j + tau) / (N + n tau). With tau = 0 this is bitwise
/// identical to vertex_pmf_mle (but isolated vertices are allowed).
VertexPmf smooth_vertex_pmf(const Graph& g, double tau);
VertexPmf smooth_vertex_pmf(const Graph& g, const TauPolicy& policy);

/// Data-driven shrinkage (N^2 - sum d^2) / (n sum d^2 - N^2).
/// Throws DegenerateTauError when the denominator is not positive.
double stein_tau(const Graph& g);

struct GoodTuringEstimate {
  VertexPmf pmf;
  /// Sum of the per-vertex estimates before renormalisation.
  double raw_total = 0.0;
  /// Vertices whose degree class had no successor (frequency of d+1 is zero)
  /// and therefore kept their maximum-likelihood mass.
  std::vector<bool> fell_back;
  std::size_t fallback_count() const;
};

/// Frequency-of-frequencies estimate (w_{d+1}/w_d)(d+1)/N, renormalised.
/// Requires whole-number degrees.
GoodTuringEstimate good_turing_pmf(const Graph& g);

/// Joint estimate (A + (tau/n) 11^T) / (N + n tau).
NetworkPmf smooth_network_pmf(const Graph& g, double tau);
NetworkPmf smooth_network_pmf(const Graph& g, const TauPolicy& policy);

/// Row-stochastic random-walk matrix with shrinkage toward the uniform row.
struct TransitionMatrix {
  Eigen::MatrixXd T;
  /// Teleport weight per row: tau / (d_i + tau) in adaptive mode, the global
  /// alpha otherwise.
  Eigen::VectorXd alpha;
};

struct TransitionMode {
  enum class Kind { Adaptive, Global };
  Kind kind = Kind::Global;
  double parameter = 0.0;  // tau for Adaptive, alpha for Global

  static TransitionMode adaptive(double tau) { return {Kind::Adaptive, tau}; }
  static TransitionMode global(double alpha) { return {Kind::Global, alpha}; }
};

/// Adaptive: (A(i,j) + tau/n) / (d_i + tau).
/// Global:   (1 - alpha) D^{-1} A + alpha / n, alpha being the teleport
///           probability.
TransitionMatrix smooth_transition(const Graph& g, TransitionMode mode);

}  // namespace grafield
