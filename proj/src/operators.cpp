#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "grafield/eigensolver.hpp"
#include "grafield/error.hpp"
#include "grafield/spectral.hpp"

namespace grafield {
namespace {

Eigen::VectorXd checked_inverse_sqrt_degrees(const Graph& g) {
  const auto isolated = g.isolated_vertices();
  if (!isolated.empty()) throw IsolatedVertexError(isolated.front(), g.label(isolated.front()));
  return g.degrees().cwiseSqrt().cwiseInverse();
}

void orient(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v[arg] < 0.0) v = -v;
}

}  // namespace

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Laplacian: return "laplacian";
    case OperatorKind::CenteredLaplacian: return "centered";
    case OperatorKind::Modularity: return "modularity";
    case OperatorKind::RandomWalk: return "rw";
    case OperatorKind::RegLaplacianI: return "reg1";
    case OperatorKind::RegLaplacianII: return "reg2";
    case OperatorKind::PageRank: return "pagerank";
  }
  return "unknown";
}

std::optional<OperatorKind> parse_operator(const std::string& name) {
  for (auto kind : {OperatorKind::Laplacian, OperatorKind::CenteredLaplacian, OperatorKind::Modularity,
                    OperatorKind::RandomWalk, OperatorKind::RegLaplacianI, OperatorKind::RegLaplacianII,
                    OperatorKind::PageRank}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

ShiftOperator shift_operator(const Graph& g, OperatorKind kind, const OperatorParams& params) {
  const Eigen::MatrixXd A = g.dense_adjacency();
  const Eigen::VectorXd& d = g.degrees();
  const double N = g.total_mass();
  const auto n = double(g.size());
  Eigen::MatrixXd out;
  switch (kind) {
    case OperatorKind::Laplacian:
    case OperatorKind::CenteredLaplacian: {
      const Eigen::VectorXd r = checked_inverse_sqrt_degrees(g);
      out = r.asDiagonal() * A * r.asDiagonal();
      if (kind == OperatorKind::CenteredLaplacian) {
        const Eigen::VectorXd s = (d / N).cwiseSqrt();
        out -= s * s.transpose();
      }
      break;
    }
    case OperatorKind::Modularity:
      if (!(N > 0.0)) throw ValidationError("modularity needs a graph with positive total weight");
      out = A - d * d.transpose() / N;
      break;
    case OperatorKind::RandomWalk: {
      const auto isolated = g.isolated_vertices();
      if (!isolated.empty()) throw IsolatedVertexError(isolated.front(), g.label(isolated.front()));
      out = d.cwiseInverse().asDiagonal() * A;
      break;
    }
    case OperatorKind::RegLaplacianI:
    case OperatorKind::RegLaplacianII: {
      if (!(params.tau > 0.0)) throw ValidationError(to_string(kind) + " needs tau > 0");
      const Eigen::VectorXd r = (d.array() + params.tau).sqrt().inverse().matrix();
      Eigen::MatrixXd inner = A;
      if (kind == OperatorKind::RegLaplacianII) inner.array() += params.tau / n;
      out = r.asDiagonal() * inner * r.asDiagonal();
      break;
    }
    case OperatorKind::PageRank:
      out = smooth_transition(g, TransitionMode::global(params.alpha)).T;
      break;
  }
  ShiftOperator op{kind, std::move(out), params};
  if (op.symmetric()) op.matrix = 0.5 * (op.matrix + op.matrix.transpose());
  return op;
}

OperatorSpectrum operator_spectrum(const ShiftOperator& op, std::size_t m) {
  const Eigen::Index n = op.matrix.rows();
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  if (op.symmetric()) {
    auto pairs = dense_symmetric_eigen(op.matrix);
    values = std::move(pairs.values);
    vectors = std::move(pairs.vectors);
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(op.matrix);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    // Both stochastic operators are similar to symmetric matrices, so the
    // spectrum is real up to rounding.
    values = solver.eigenvalues().real();
    vectors = solver.eigenvectors().real();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double norm = vectors.col(j).norm();
      if (norm > 0.0) vectors.col(j) /= norm;
    }
  }

  std::vector<Eigen::Index> order(std::size_t(values.size()));
  std::iota(order.begin(), order.end(), 0);
  order = order_by_magnitude(values, std::move(order));
  const auto count = Eigen::Index(m == 0 ? order.size() : std::min(m, order.size()));
  OperatorSpectrum out{Eigen::VectorXd(count), Eigen::MatrixXd(n, count)};
  for (Eigen::Index c = 0; c < count; ++c) {
    out.eigenvalues[c] = values[order[std::size_t(c)]];
    out.vectors.col(c) = vectors.col(order[std::size_t(c)]);
    orient(out.vectors.col(c));
  }
  return out;
}

}  // namespace grafield
