#include <cmath>
#include <span>

#include "grafield/error.hpp"
#include "grafield/simd/kernels.hpp"
#include "grafield/spectral.hpp"

namespace grafield {
namespace {

// M = P ./ (s s^T) - s s^T with s = sqrt(p); the block-pulse reduction of the
// centred field onto amplitude-p^{-1/2} indicators.
Eigen::MatrixXd block_pulse_transform(const Eigen::MatrixXd& P, const Eigen::VectorXd& p) {
  const auto n = p.size();
  const Eigen::VectorXd s = p.cwiseSqrt();
  const Eigen::VectorXd r = s.cwiseInverse();
  Eigen::MatrixXd M(n, n);
  const std::span<const double> r_span(r.data(), std::size_t(n));
  const std::span<const double> s_span(s.data(), std::size_t(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    std::span<double> out(M.col(k).data(), std::size_t(n));
    simd::scaled_product(r[k], std::span<const double>(P.col(k).data(), std::size_t(n)), r_span, out);
    simd::axpy(-s[k], s_span, out);
  }
  // Rounding in the two products can differ between (j,k) and (k,j).
  return 0.5 * (M + M.transpose());
}

}  // namespace

GMatrix g_matrix(const NetworkPmf& P, const VertexPmf& p, const BasisFamily& basis) {
  const auto n = Eigen::Index(p.size());
  if (Eigen::Index(P.size()) != n || Eigen::Index(basis.size()) != n) {
    throw ValidationError("basis/PMF mismatch: sizes differ");
  }
  if (basis.pmf() != p.p()) {
    throw ValidationError("basis/PMF mismatch: the basis grid was built from a different vertex estimate");
  }

  Eigen::MatrixXd M;
  switch (basis.kind()) {
    case BasisKind::BlockPulse:
    case BasisKind::RegularizedBlockPulse:
      M = block_pulse_transform(P.matrix(), p.p());
      break;
    case BasisKind::Characteristic:
      M = P.matrix() - p.p() * p.p().transpose();
      M = 0.5 * (M + M.transpose());
      break;
  }
  return GMatrix{std::move(M), basis.gram(), basis};
}

}  // namespace grafield
