#include "grafield/kernel.hpp"

#include <span>

#include "grafield/error.hpp"
#include "grafield/simd/kernels.hpp"

namespace grafield {

GraFieldMatrix::GraFieldMatrix(Eigen::MatrixXd density, Eigen::VectorXd marginal)
    : density_(std::move(density)), marginal_(std::move(marginal)) {
  if (density_.rows() != density_.cols() || density_.rows() != marginal_.size()) {
    throw ValidationError("GraField density and marginal sizes disagree");
  }
}

double GraFieldMatrix::total_integral() const {
  const auto n = density_.rows();
  const std::span<const double> p(marginal_.data(), std::size_t(n));
  double total = 0.0;
  for (Eigen::Index y = 0; y < n; ++y) {
    const std::span<const double> column(density_.col(y).data(), std::size_t(n));
    total += marginal_[y] * simd::dot(column, p);
  }
  return total;
}

GraFieldMatrix empirical_grafield(const NetworkPmf& P, const VertexPmf& p) {
  const auto n = Eigen::Index(p.size());
  if (Eigen::Index(P.size()) != n) throw ValidationError("joint and vertex mass functions have different sizes");
  for (Eigen::Index x = 0; x < n; ++x) {
    if (!(p.p()[x] > 0.0)) {
      throw ValidationError("vertex " + std::to_string(x + 1) +
                            " has zero probability; the GraField needs a smoothed vertex estimate");
    }
  }
  // One product and one division per cell, so C(x, y) == C(y, x) exactly.
  Eigen::MatrixXd C = P.matrix().array() / (p.p() * p.p().transpose()).array();
  return GraFieldMatrix(std::move(C), p.p());
}

double graph_entropy(const GraFieldMatrix& C) {
  const auto n = Eigen::Index(C.size());
  const Eigen::VectorXd& p = C.marginal();
  Eigen::VectorXd weights(n);
  double total = 0.0;
  for (Eigen::Index y = 0; y < n; ++y) {
    weights = p * p[y];
    total += simd::weighted_squared_deviation(std::span<const double>(C.density().col(y).data(), std::size_t(n)),
                                              std::span<const double>(weights.data(), std::size_t(n)), 1.0);
  }
  return total;
}

}  // namespace grafield
