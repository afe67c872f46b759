#include <algorithm>
#include <cmath>

#include "grafield/error.hpp"
#include "grafield/spectral.hpp"

namespace grafield {

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::BlockPulse: return "block-pulse";
    case BasisKind::Characteristic: return "characteristic";
    case BasisKind::RegularizedBlockPulse: return "regularized-block-pulse";
  }
  return "unknown";
}

BasisFamily::BasisFamily(BasisKind kind, Eigen::VectorXd pmf, double tau)
    : kind_(kind), pmf_(std::move(pmf)), tau_(tau) {
  const auto n = pmf_.size();
  if (n == 0) throw ValidationError("basis needs at least one vertex");
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!(pmf_[j] > 0.0)) {
      throw ValidationError("vertex " + std::to_string(j + 1) + " has zero probability; the " + to_string(kind) +
                            " basis needs strictly positive masses (smooth with tau > 0)");
    }
  }
  grid_.resize(n + 1);
  grid_[0] = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) grid_[j + 1] = grid_[j] + pmf_[j];
  grid_[n] = 1.0;

  amplitudes_.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    amplitudes_[j] = kind == BasisKind::Characteristic ? 1.0 : 1.0 / std::sqrt(pmf_[j]);
  }
}

double BasisFamily::evaluate(std::size_t j, double u) const {
  const auto jj = Eigen::Index(j);
  if (jj >= pmf_.size()) throw ValidationError("basis index out of range");
  return (u > grid_[jj] && u <= grid_[jj + 1]) ? amplitudes_[jj] : 0.0;
}

Eigen::MatrixXd BasisFamily::gram() const {
  // Disjoint supports: <eta_j, eta_k> = delta_jk * amplitude_j^2 * p_j.
  Eigen::VectorXd diag(pmf_.size());
  for (Eigen::Index j = 0; j < pmf_.size(); ++j) {
    diag[j] = kind_ == BasisKind::Characteristic ? pmf_[j] : 1.0;
  }
  return diag.asDiagonal();
}

Eigen::VectorXd BasisFamily::constant_coefficients() const {
  // 1 = sum_j eta_j / amplitude_j
  return amplitudes_.cwiseInverse();
}

Eigen::VectorXd BasisFamily::vertex_values(const Eigen::VectorXd& theta) const {
  if (theta.size() != amplitudes_.size()) throw ValidationError("coefficient vector has the wrong length");
  return amplitudes_.cwiseProduct(theta);
}

BasisFamily build_basis(const VertexPmf& p, BasisKind kind, std::optional<double> tau) {
  switch (kind) {
    case BasisKind::BlockPulse:
    case BasisKind::Characteristic:
      if (tau && *tau != 0.0) throw ValidationError(to_string(kind) + " basis takes no tau; use the regularized family");
      return BasisFamily(kind, p.p(), 0.0);
    case BasisKind::RegularizedBlockPulse: {
      const double t = tau.value_or(p.tau());
      if (!(t > 0.0) && p.source() != PmfSource::GoodTuring) {
        throw ValidationError("regularized block-pulse basis needs tau > 0");
      }
      const bool records_tau = p.source() == PmfSource::Laplace || p.source() == PmfSource::Stein;
      if (tau && records_tau && std::abs(p.tau() - *tau) > 1e-15 * std::max(1.0, *tau)) {
        throw ValidationError("vertex estimate was smoothed with tau = " + std::to_string(p.tau()) +
                              " but the basis asks for tau = " + std::to_string(*tau));
      }
      if (p.source() == PmfSource::Mle) {
        throw ValidationError("regularized block-pulse basis must be built from a smoothed vertex estimate");
      }
      return BasisFamily(kind, p.p(), t);
    }
  }
  throw ValidationError("unknown basis family");
}

}  // namespace grafield
