#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "grafield/error.hpp"
#include "grafield/graph.hpp"
#include "grafield/graph_io.hpp"

using namespace grafield;

TEST_CASE("toy graph degrees and mass") {
  const Graph g = fixtures::toy_graph();
  REQUIRE(g.size() == 4);
  CHECK(g.degrees()[0] == 2.0);
  CHECK(g.degrees()[1] == 8.0);
  CHECK(g.degrees()[2] == 6.0);
  CHECK(g.degrees()[3] == 6.0);
  CHECK(g.total_mass() == 22.0);
  CHECK(g.edge_count() == 4);
  CHECK(g.weight(2, 1) == 3.0);
}

TEST_CASE("single edge and duplicates") {
  const Graph one = fixtures::graph_from_edges({{1, 2, 1.0}});
  CHECK(one.degrees()[0] == 1.0);
  CHECK(one.degrees()[1] == 1.0);
  CHECK(one.total_mass() == 2.0);

  const Graph dup = fixtures::graph_from_edges({{1, 2, 1.0}, {1, 2, 1.0}});
  CHECK(dup.weight(0, 1) == 2.0);
  CHECK(dup.weight(1, 0) == 2.0);
}

TEST_CASE("invalid edge lists") {
  const std::vector<Edge> none;
  CHECK_THROWS_AS(load_graph(none), ValidationError);
  const std::vector<Edge> negative{{"a", "b", -1.0}};
  CHECK_THROWS_AS(load_graph(negative), ValidationError);
}

TEST_CASE("self-loops count once") {
  const Graph g = fixtures::graph_from_edges({{1, 1, 2.0}, {1, 2, 1.0}});
  CHECK(g.degrees()[0] == 3.0);
  CHECK(g.total_mass() == 4.0);
  CHECK(g.total_mass() == g.degrees().sum());
}

TEST_CASE("labels") {
  std::vector<Edge> e{{"10", "2", 1.0}, {"2", "3", 1.0}};
  const Graph numeric = load_graph(e);
  CHECK(numeric.labels() == std::vector<std::string>{"2", "3", "10"});

  std::vector<Edge> named{{"zoe", "amy", 1.0}, {"amy", "bob", 1.0}};
  const Graph g = load_graph(named);
  CHECK(g.labels() == std::vector<std::string>{"zoe", "amy", "bob"});
  CHECK(*g.index_of("bob") == 2);
  CHECK_FALSE(g.index_of("nobody"));
}

TEST_CASE("maximum likelihood masses") {
  const Graph g = fixtures::toy_graph();
  const VertexPmf p = vertex_pmf_mle(g);
  CHECK(p[0] == doctest::Approx(2.0 / 22).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(8.0 / 22).epsilon(1e-15));
  CHECK(p[2] == doctest::Approx(6.0 / 22).epsilon(1e-15));
  CHECK(p[3] == doctest::Approx(6.0 / 22).epsilon(1e-15));

  const NetworkPmf P = network_pmf_mle(g);
  CHECK(P(0, 1) == doctest::Approx(2.0 / 22).epsilon(1e-15));
  CHECK(P(1, 2) == doctest::Approx(3.0 / 22).epsilon(1e-15));
  CHECK(P.matrix().sum() == doctest::Approx(1.0).epsilon(1e-14));

  const VertexPmf k3 = vertex_pmf_mle(fixtures::complete_graph(3));
  for (std::size_t j = 0; j < 3; ++j) CHECK(k3[j] == doctest::Approx(1.0 / 3));
  const NetworkPmf Pk3 = network_pmf_mle(fixtures::complete_graph(3));
  CHECK(Pk3(0, 1) == doctest::Approx(1.0 / 6));
  CHECK(Pk3(1, 1) == 0.0);

  const VertexPmf path = vertex_pmf_mle(fixtures::graph_from_edges({{1, 2, 1.0}}));
  CHECK(path[0] == 0.5);
}

TEST_CASE("isolated vertices are rejected by the maximum likelihood path") {
  std::istringstream in("%%MatrixMarket matrix coordinate real symmetric\n3 3 1\n2 1 1.0\n");
  const Graph g = io::parse_matrix_market(in);
  CHECK(g.isolated_vertices() == std::vector<std::size_t>{2});
  try {
    (void)vertex_pmf_mle(g);
    FAIL("expected an error");
  } catch (const IsolatedVertexError& e) {
    CHECK(e.label() == "3");
  }
}

TEST_CASE("random graphs: degree sums and marginals") {
  fixtures::Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = fixtures::random_graph(rng, Eigen::Index(2 + rng.below(29)));
    const Eigen::MatrixXd a = g.dense_adjacency();
    CHECK(g.total_mass() == doctest::Approx(a.sum()).epsilon(1e-15));
    CHECK(g.degrees().sum() == doctest::Approx(g.total_mass()).epsilon(1e-15));
    CHECK((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const VertexPmf p = vertex_pmf_mle(g);
    const NetworkPmf P = network_pmf_mle(g);
    CHECK((P.marginal() - p.p()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(p.p().sum() - 1.0) < 1e-12);
    CHECK(p.cdf()[0] == 0.0);
    CHECK(p.cdf()[Eigen::Index(p.size())] == 1.0);
  }
}

TEST_CASE("quantile inverts the cumulative grid") {
  fixtures::Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const VertexPmf p = vertex_pmf_mle(fixtures::random_graph(rng, 12));
    const auto& F = p.cdf();
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[j] == 0.0) continue;
      const double lo = F[Eigen::Index(j)];
      const double hi = F[Eigen::Index(j) + 1];
      CHECK(p.quantile(hi) == j);
      CHECK(p.quantile(lo + 0.5 * (hi - lo)) == j);
      CHECK(p.quantile(std::nextafter(lo, 2.0)) == j);
    }
  }
}

TEST_CASE("edge list parsing") {
  std::istringstream in("# comment\n1 2\n2 3 2.5  # trailing\n\n3 1 0.5\n");
  const auto edges = io::parse_edge_list(in);
  REQUIRE(edges.size() == 3);
  CHECK(edges[0].weight == 1.0);
  CHECK(edges[1].weight == 2.5);

  std::istringstream bad("1 2 x\n");
  CHECK_THROWS_AS(io::parse_edge_list(bad), DataError);
}

TEST_CASE("matrix market") {
  std::istringstream general("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 3\n2 1 3\n");
  CHECK(io::parse_matrix_market(general).weight(0, 1) == 3.0);
  std::istringstream asym("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 3\n");
  CHECK_THROWS(io::parse_matrix_market(asym));
  std::istringstream pattern("%%MatrixMarket matrix coordinate pattern symmetric\n3 3 2\n2 1\n3 2\n");
  const Graph g = io::parse_matrix_market(pattern);
  CHECK(g.total_mass() == 4.0);
}

TEST_CASE("edge list round trip") {
  const Graph g = fixtures::toy_graph();
  std::ostringstream out;
  io::write_edge_list(out, g);
  std::istringstream in(out.str());
  const Graph back = load_graph(io::parse_edge_list(in));
  CHECK((back.dense_adjacency() - g.dense_adjacency()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("labels csv") {
  std::istringstream in("vertex,label\n1,a\n2,b\n");
  const auto labels = io::parse_labels(in);
  CHECK(labels.at("2") == "b");
}

TEST_CASE("components and subgraph") {
  const Graph g = fixtures::graph_from_edges({{1, 2, 1.0}, {3, 4, 1.0}, {4, 5, 1.0}});
  CHECK(g.components() == std::vector<std::size_t>{0, 0, 1, 1, 1});
  const std::vector<std::size_t> keep{2, 3, 4};
  const Graph sub = g.subgraph(keep);
  CHECK(sub.size() == 3);
  CHECK(sub.label(0) == "3");
  CHECK(sub.total_mass() == 4.0);
}
