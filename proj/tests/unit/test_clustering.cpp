#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>

#include "fixtures.hpp"
#include "grafield/clustering.hpp"
#include "grafield/error.hpp"
#include "grafield/graph_io.hpp"
#include "grafield/kmeans.hpp"

using namespace grafield;

TEST_CASE("misclassification") {
  CHECK(misclassification({1, 1, 2, 2}, {1, 1, 2, 2}) == 0.0);
  CHECK(misclassification({2, 2, 1, 1}, {1, 1, 2, 2}) == 0.0);
  CHECK(misclassification({1, 2, 2, 2}, {1, 1, 2, 2}) == 0.25);
  CHECK(misclassification({1, 1, 1, 1}, {1, 1, 2, 2}) == 0.5);
  CHECK(misclassification({1, 2, 3, 3}, {1, 1, 2, 2}) == 0.25);
  CHECK_THROWS_AS(misclassification({1, 2}, {1, 2, 3}), ValidationError);
}

TEST_CASE("misclassification ignores relabelling") {
  fixtures::Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 20 + rng.below(30);
    std::vector<int> a(n), b(n);
    for (auto& v : a) v = 1 + int(rng.below(4));
    for (auto& v : b) v = 1 + int(rng.below(3));
    std::vector<int> perm{1, 2, 3, 4};
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    std::vector<int> relabelled(n);
    for (std::size_t i = 0; i < n; ++i) relabelled[i] = perm[std::size_t(a[i] - 1)] + 10;
    CHECK(misclassification(relabelled, b) == misclassification(a, b));
  }
}

TEST_CASE("assignment matches the oracle totals") {
  for (const auto& c : fixtures::oracles()["assignment"]) {
    const Eigen::MatrixXd cost = fixtures::matrix(c["cost"]);
    const auto rows = solve_assignment(cost);
    double total = 0.0;
    std::vector<long> used;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      REQUIRE(rows[r] >= 0);
      total += cost(Eigen::Index(r), rows[r]);
      used.push_back(rows[r]);
    }
    std::sort(used.begin(), used.end());
    CHECK(std::adjacent_find(used.begin(), used.end()) == used.end());
    CHECK(total == c["total"].get<double>());
  }
  Eigen::MatrixXd tall(3, 2);
  tall << 1, 9, 9, 1, 0, 0;
  const auto rows = solve_assignment(tall);
  CHECK(std::count(rows.begin(), rows.end(), -1) == 1);
}

TEST_CASE("spectral gap") {
  Eigen::VectorXd v(4);
  v << 0.9, 0.85, 0.2, 0.1;
  CHECK(choose_k_spectral_gap(v) == 3);
  CHECK(choose_k_spectral_gap(Eigen::VectorXd::Constant(5, 0.4)) == 2);
  CHECK_THROWS_AS(choose_k_spectral_gap(Eigen::VectorXd::Constant(1, 0.4)), ValidationError);

  const SpectralDecomposition dec =
      graph_spectrum(fixtures::two_cliques(), OperatorKind::Laplacian, {}, 0);
  CHECK(choose_k_spectral_gap(dec.eigenvalues) == 2);
  Eigen::VectorXd mixed(4);
  mixed << 0.9, -0.85, 0.2, -0.1;
  CHECK(choose_k_spectral_gap(mixed) == 3);
}

TEST_CASE("k-means basics") {
  Eigen::MatrixXd pts(6, 1);
  pts << 0.0, 0.1, 0.2, 10.0, 10.1, 10.2;
  const KMeansResult r = kmeans(pts, 2);
  CHECK(r.labels == std::vector<std::size_t>{0, 0, 0, 1, 1, 1});
  CHECK(r.wcss == doctest::Approx(0.04));
  CHECK(r.centers(1, 0) == doctest::Approx(10.1));
  const KMeansResult same = kmeans(pts, 2);
  CHECK(same.labels == r.labels);
  CHECK(same.wcss == r.wcss);
  CHECK_THROWS(kmeans(pts, 7));
}

TEST_CASE("two cliques recovered exactly") {
  const Graph g = fixtures::two_cliques();
  const auto& o = fixtures::oracles()["two_cliques"];
  const std::vector<int> truth = o["min_ncut_labels"].get<std::vector<int>>();
  const ClusterResult r = spectral_cluster(g, 2, OperatorKind::RegLaplacianI, {0.5}, 20240601);
  CHECK(misclassification(r.labels, truth) == 0.0);
  CHECK(r.restarts == 50);
  CHECK(r.seed == 20240601);
  for (auto kind : {OperatorKind::Laplacian, OperatorKind::RegLaplacianII, OperatorKind::Modularity,
                    OperatorKind::PageRank}) {
    const ClusterResult other = spectral_cluster(g, 2, kind, {0.5, 0.15}, 1);
    CHECK(misclassification(other.labels, truth) == 0.0);
  }
}

TEST_CASE("cluster edge cases") {
  const Graph g = fixtures::toy_graph();
  const ClusterResult singletons = spectral_cluster(g, 4, OperatorKind::Laplacian, {}, 1);
  CHECK(singletons.wcss == 0.0);
  std::vector<int> sorted_labels = singletons.labels;
  std::sort(sorted_labels.begin(), sorted_labels.end());
  CHECK(sorted_labels == std::vector<int>{1, 2, 3, 4});
  CHECK_THROWS_AS(spectral_cluster(g, 5, OperatorKind::Laplacian, {}, 1), ValidationError);
  CHECK_THROWS_AS(spectral_cluster(g, 1, OperatorKind::Laplacian, {}, 1), ValidationError);

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
  a(0, 1) = a(1, 0) = 1.0;
  a(1, 2) = a(2, 1) = 1.0;
  try {
    (void)spectral_cluster(Graph::from_dense(a), 2, OperatorKind::Laplacian, {}, 1);
    FAIL("expected an error");
  } catch (const IsolatedVertexError& e) {
    CHECK(e.label() == "4");
  }
  CHECK_NOTHROW(spectral_cluster(Graph::from_dense(a), 2, OperatorKind::RegLaplacianI, {0.5}, 1));
}

TEST_CASE("clustering is deterministic for a fixed seed") {
  const auto planted = fixtures::planted_partition(3, 120, 0.1, 0.01, 10);
  const ClusterResult a = spectral_cluster(planted.graph, 2, OperatorKind::RegLaplacianI, {1.0}, 99);
  const ClusterResult b = spectral_cluster(planted.graph, 2, OperatorKind::RegLaplacianI, {1.0}, 99);
  CHECK(a.labels == b.labels);
  CHECK(a.wcss == b.wcss);
  ClusterOptions normalized;
  normalized.row_normalize = true;
  normalized.full_dimension = true;
  const ClusterResult c = spectral_cluster(planted.graph, 2, OperatorKind::RegLaplacianI, {1.0}, 99, normalized);
  CHECK(c.labels.size() == planted.graph.size());
  for (int label : a.labels) CHECK((label == 1 || label == 2));
}

TEST_CASE("near-disconnection shows as an eigenvalue close to one") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(8, 8);
  for (int block : {0, 4}) {
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) a(block + i, block + j) = a(block + j, block + i) = 1.0;
    }
  }
  const SpectralDecomposition dec = graph_spectrum(Graph::from_dense(a), OperatorKind::RegLaplacianI, {0.5}, 1);
  // Two components: the contrast between them keeps eigenvalue one, so the
  // connectivity gap 1 - lambda_1 vanishes.
  CHECK(std::abs(dec.trivial_eigenvalue) < 1e-12);
  CHECK(std::abs(1.0 - dec.eigenvalues[0]) < 1e-12);
}

TEST_CASE("karate club split") {
  const Graph g = io::read_graph(fixtures::data_dir() / "karate.edges");
  const auto labels = io::read_labels(fixtures::data_dir() / "karate.labels.csv");
  std::map<std::string, int> ids;
  std::vector<int> truth;
  for (const auto& name : g.labels()) {
    const auto& cls = labels.at(name);
    ids.emplace(cls, int(ids.size()) + 1);
    truth.push_back(ids.at(cls));
  }
  const ClusterResult r = spectral_cluster(g, 2, OperatorKind::RegLaplacianI, {0.5}, 20240601);
  CHECK(misclassification(r.labels, truth) <= 2.0 / 34 + 1e-12);
}
