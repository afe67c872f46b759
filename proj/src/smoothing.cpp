#include "grafield/smoothing.hpp"

#include <cmath>
#include <map>

#include "grafield/error.hpp"

namespace grafield {
namespace {

void require_tau(double tau) {
  if (!std::isfinite(tau) || tau < 0.0) throw ValidationError("tau must be finite and nonnegative");
}

}  // namespace

std::string to_string(TauPolicy::Kind kind) {
  switch (kind) {
    case TauPolicy::Kind::Fixed: return "fixed";
    case TauPolicy::Kind::Laplace: return "laplace";
    case TauPolicy::Kind::KrichevskyTrofimov: return "kt";
    case TauPolicy::Kind::Perks: return "perks";
    case TauPolicy::Kind::Minimax: return "minimax";
    case TauPolicy::Kind::SteinDataDriven: return "stein";
  }
  return "unknown";
}

ResolvedTau resolve_tau(const TauPolicy& policy, const Graph& g) {
  const double n = double(g.size());
  switch (policy.kind) {
    case TauPolicy::Kind::Fixed:
      require_tau(policy.value);
      return {policy.value, std::nullopt};
    case TauPolicy::Kind::Laplace: return {1.0, std::nullopt};
    case TauPolicy::Kind::KrichevskyTrofimov: return {0.5, std::nullopt};
    case TauPolicy::Kind::Perks: return {1.0 / n, std::nullopt};
    case TauPolicy::Kind::Minimax: return {std::sqrt(g.total_mass()) / n, std::nullopt};
    case TauPolicy::Kind::SteinDataDriven:
      try {
        return {stein_tau(g), std::nullopt};
      } catch (const DegenerateTauError& e) {
        return {0.5, std::string(e.what()) + "; falling back to tau = 1/2"};
      }
  }
  throw ValidationError("unknown tau policy");
}

VertexPmf smooth_vertex_pmf(const Graph& g, double tau) {
  require_tau(tau);
  const double N = g.total_mass();
  if (!(N > 0.0)) throw ValidationError("graph has zero total edge mass");
  const double n = double(g.size());
  Eigen::VectorXd p = (g.degrees().array() + tau) / (N + n * tau);
  return VertexPmf(std::move(p), tau == 0.0 ? PmfSource::Mle : PmfSource::Laplace, tau);
}

VertexPmf smooth_vertex_pmf(const Graph& g, const TauPolicy& policy) {
  const ResolvedTau tau = resolve_tau(policy, g);
  VertexPmf pmf = smooth_vertex_pmf(g, tau.value);
  if (policy.kind == TauPolicy::Kind::SteinDataDriven && !tau.warning) {
    return VertexPmf(pmf.p(), PmfSource::Stein, tau.value);
  }
  return pmf;
}

double stein_tau(const Graph& g) {
  const double N = g.total_mass();
  const double n = double(g.size());
  const double sum_sq = g.degrees().squaredNorm();
  const double numerator = N * N - sum_sq;
  const double denominator = n * sum_sq - N * N;
  // Regular graphs give 0/0 up to rounding; treat anything within a few ulps of
  // N^2 as degenerate.
  if (!(denominator > 1e-12 * N * N)) {
    throw DegenerateTauError("data-driven tau is undefined: n*sum(d^2) - N^2 = " + std::to_string(denominator));
  }
  return numerator / denominator;
}

std::size_t GoodTuringEstimate::fallback_count() const {
  std::size_t count = 0;
  for (bool f : fell_back) count += f ? 1 : 0;
  return count;
}

GoodTuringEstimate good_turing_pmf(const Graph& g) {
  const double N = g.total_mass();
  if (!(N > 0.0)) throw ValidationError("graph has zero total edge mass");
  const std::size_t n = g.size();

  std::vector<long long> degree(n);
  std::map<long long, long long> freq_of_freq;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = g.degree(i);
    const double rounded = std::round(d);
    if (std::abs(d - rounded) > 1e-9 * std::max(1.0, d)) {
      throw ValidationError("Good-Turing needs whole-number degrees; vertex '" + g.label(i) + "' has degree " +
                            std::to_string(d));
    }
    degree[i] = static_cast<long long>(rounded);
    ++freq_of_freq[degree[i]];
  }

  Eigen::VectorXd raw(static_cast<Eigen::Index>(n));
  std::vector<bool> fell_back(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const long long d = degree[i];
    auto next = freq_of_freq.find(d + 1);
    if (next == freq_of_freq.end()) {
      raw[Eigen::Index(i)] = double(d) / N;
      fell_back[i] = true;
    } else {
      raw[Eigen::Index(i)] = (double(next->second) / double(freq_of_freq.at(d))) * (double(d + 1) / N);
    }
  }
  const double total = raw.sum();
  if (!(total > 0.0)) throw NumericalError("Good-Turing estimate has zero total mass");
  GoodTuringEstimate out{VertexPmf(raw / total, PmfSource::GoodTuring), total, std::move(fell_back)};
  return out;
}

NetworkPmf smooth_network_pmf(const Graph& g, double tau) {
  require_tau(tau);
  const double N = g.total_mass();
  if (!(N > 0.0)) throw ValidationError("graph has zero total edge mass");
  const double n = double(g.size());
  Eigen::MatrixXd P = g.dense_adjacency();
  P.array() += tau / n;
  P /= (N + n * tau);
  return NetworkPmf(std::move(P), tau == 0.0 ? JointSource::Mle : JointSource::Laplace2D, tau);
}

NetworkPmf smooth_network_pmf(const Graph& g, const TauPolicy& policy) {
  return smooth_network_pmf(g, resolve_tau(policy, g).value);
}

TransitionMatrix smooth_transition(const Graph& g, TransitionMode mode) {
  const auto n = Eigen::Index(g.size());
  const Eigen::MatrixXd A = g.dense_adjacency();
  const Eigen::VectorXd& d = g.degrees();
  TransitionMatrix out{Eigen::MatrixXd(n, n), Eigen::VectorXd(n)};

  if (mode.kind == TransitionMode::Kind::Adaptive) {
    const double tau = mode.parameter;
    require_tau(tau);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double denom = d[i] + tau;
      if (!(denom > 0.0)) {
        throw IsolatedVertexError(std::size_t(i), g.label(std::size_t(i)));
      }
      out.T.row(i) = (A.row(i).array() + tau / double(n)) / denom;
      out.alpha[i] = tau / denom;
    }
    return out;
  }

  const double alpha = mode.parameter;
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("teleport alpha must lie in [0, 1]");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(d[i] > 0.0)) {
      throw ValidationError("vertex '" + g.label(std::size_t(i)) +
                            "' has zero degree, so D^{-1}A is undefined; use adaptive (tau) smoothing instead");
    }
    out.T.row(i) = (1.0 - alpha) * (A.row(i) / d[i]);
    out.T.row(i).array() += alpha / double(n);
  }
  out.alpha.setConstant(alpha);
  return out;
}

}  // namespace grafield
