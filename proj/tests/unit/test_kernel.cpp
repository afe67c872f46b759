#include <doctest.h>

#include "fixtures.hpp"
#include "grafield/error.hpp"
#include "grafield/kernel.hpp"
#include "grafield/spectral.hpp"

using namespace grafield;

namespace {

GraFieldMatrix field_of(const Graph& g) { return empirical_grafield(network_pmf_mle(g), vertex_pmf_mle(g)); }

}  // namespace

TEST_CASE("toy field matches the hand matrix") {
  const GraFieldMatrix C = field_of(fixtures::toy_graph());
  CHECK(std::abs(C(0, 1) - 22.0 / 8) <= 1e-14);
  CHECK(std::abs(C(1, 2) - 22.0 / 16) <= 1e-14);
  CHECK(std::abs(C(1, 3) - 22.0 / 16) <= 1e-14);
  CHECK(std::abs(C(2, 3) - 22.0 / 12) <= 1e-14);
  CHECK(C(0, 0) == 0.0);
  CHECK(C(0, 2) == 0.0);
  CHECK(C(0, 3) == 0.0);
  CHECK(std::abs(strength(C, 0, 1) / strength(C, 1, 2) - 2.0) <= 1e-14);
  CHECK(std::abs(strength(C, 0, 1) / strength(C, 2, 3) - 1.5) <= 1e-14);
}

TEST_CASE("complete graph field and entropy") {
  const GraFieldMatrix C = field_of(fixtures::complete_graph(3));
  for (std::size_t x = 0; x < 3; ++x) {
    for (std::size_t y = 0; y < 3; ++y) CHECK(C(x, y) == doctest::Approx(x == y ? 0.0 : 1.5).epsilon(1e-15));
  }
  // 3 diagonal cells at (0-1)^2 / 9 plus 6 off-diagonal at (1/2)^2 / 9.
  CHECK(graph_entropy(C) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("flat field has zero entropy") {
  Eigen::VectorXd p = Eigen::VectorXd::Constant(4, 0.25);
  const NetworkPmf P(p * p.transpose(), JointSource::Mle);
  const GraFieldMatrix C = empirical_grafield(P, VertexPmf(p, PmfSource::Custom));
  CHECK(graph_entropy(C) == doctest::Approx(0.0));
}

TEST_CASE("zero vertex mass is rejected") {
  Eigen::VectorXd p(2);
  p << 1.0, 0.0;
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(2, 2);
  P(0, 0) = 1.0;
  CHECK_THROWS_AS(empirical_grafield(NetworkPmf(P, JointSource::Mle), VertexPmf(p, PmfSource::Custom)), ValidationError);
}

TEST_CASE("oracle graphs: field and entropy") {
  for (const auto& c : fixtures::oracles()["graphs"]) {
    const Graph g = Graph::from_dense(fixtures::matrix(c["A"]));
    const GraFieldMatrix C = field_of(g);
    CHECK((C.density() - fixtures::matrix(c["grafield"])).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(graph_entropy(C) == doctest::Approx(c["entropy"].get<double>()).epsilon(1e-12));
    CHECK(graph_entropy(C) == doctest::Approx(c["sum_sq_eigenvalues"].get<double>()).epsilon(1e-10));
  }
}

TEST_CASE("random graphs: normalization, symmetry, scale invariance, Parseval") {
  fixtures::Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = fixtures::random_graph(rng, Eigen::Index(2 + rng.below(20)));
    const GraFieldMatrix C = field_of(g);
    CHECK(std::abs(C.total_integral() - 1.0) < 1e-10);
    CHECK((C.density() - C.density().transpose()).cwiseAbs().maxCoeff() == 0.0);

    const Graph scaled = Graph::from_dense(3.7 * g.dense_adjacency());
    CHECK((field_of(scaled).density() - C.density()).cwiseAbs().maxCoeff() < 1e-12 * C.density().maxCoeff());

    if (trial % 5 == 0) {
      const SpectralDecomposition dec = graph_spectrum(g, OperatorKind::CenteredLaplacian, {}, 0);
      const double sum_sq = dec.eigenvalues.squaredNorm() + dec.trivial_eigenvalue * dec.trivial_eigenvalue;
      CHECK(std::abs(graph_entropy(C) - sum_sq) < 1e-8);
    }
  }
}
