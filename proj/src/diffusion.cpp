#include <cmath>

#include "grafield/error.hpp"
#include "grafield/spectral.hpp"

namespace grafield {
namespace {

// Walk length from which the oscillating lambda = -1 component is reported.
constexpr unsigned kLongWalk = 10;

void require_diffusion_input(const SpectralDecomposition& dec) {
  if (dec.basis_kind != BasisKind::BlockPulse || dec.weight_source != PmfSource::Mle) {
    throw ValidationError("diffusion coordinates need a block-pulse decomposition on maximum-likelihood masses");
  }
}

}  // namespace

Eigen::VectorXd gft(const Eigen::VectorXd& y, const SpectralDecomposition& dec, const VertexPmf& p,
                    GftWeighting weighting) {
  const auto n = dec.phi.rows();
  if (y.size() != n || Eigen::Index(p.size()) != n) throw ValidationError("signal length does not match the graph");
  if (weighting == GftWeighting::Unweighted) return dec.phi.transpose() * y;
  return dec.phi.transpose() * y.cwiseProduct(p.p());
}

Eigen::VectorXd inverse_gft(const Eigen::VectorXd& coefficients, double mean, const SpectralDecomposition& dec) {
  if (coefficients.size() != dec.phi.cols()) throw ValidationError("coefficient count does not match the basis");
  Eigen::VectorXd out = dec.phi * coefficients;
  out.array() += mean;
  return out;
}

DiffusionEmbedding diffusion_coords(const SpectralDecomposition& dec, unsigned t, std::size_t k) {
  require_diffusion_input(dec);
  const auto available = dec.size();
  if (k > available) throw ValidationError("requested " + std::to_string(k) + " diffusion coordinates but only " +
                                           std::to_string(available) + " pairs are available");
  const auto cols = Eigen::Index(k == 0 ? available : k);

  DiffusionEmbedding out;
  out.coords.resize(dec.phi.rows(), cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    out.coords.col(c) = std::pow(dec.eigenvalues[c], double(t)) * dec.phi.col(c);
  }
  if (t >= kLongWalk) {
    for (Eigen::Index c = 0; c < dec.eigenvalues.size(); ++c) {
      if (std::abs(dec.eigenvalues[c] + 1.0) < 1e-9) {
        out.warnings.push_back("eigenvalue -1 present (bipartite component); diffusion coordinates oscillate in sign "
                               "with t and do not settle to the stationary distribution");
        break;
      }
    }
  }
  return out;
}

double diffusion_distance(const SpectralDecomposition& dec, std::size_t x, std::size_t x_prime, unsigned t) {
  require_diffusion_input(dec);
  const auto n = std::size_t(dec.phi.rows());
  if (x >= n || x_prime >= n) throw ValidationError("vertex index out of range");
  if (x == x_prime) return 0.0;
  double acc = 0.0;
  for (Eigen::Index c = 0; c < dec.eigenvalues.size(); ++c) {
    const double diff = dec.phi(Eigen::Index(x), c) - dec.phi(Eigen::Index(x_prime), c);
    const double scaled = std::pow(dec.eigenvalues[c], double(t)) * diff;
    acc += scaled * scaled;
  }
  return std::sqrt(acc);
}

}  // namespace grafield
