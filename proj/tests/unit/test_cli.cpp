#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "fixtures.hpp"
#include "grafield/cli/datasets.hpp"
#include "grafield/cli/output.hpp"
#include "grafield/cli/run.hpp"
#include "grafield/error.hpp"

using namespace grafield;
using namespace grafield::cli;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("grafield-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string without_timestamp(const std::string& text) {
  std::istringstream in(text);
  std::string out, line;
  while (std::getline(in, line)) {
    if (line.find("\"timestamp\"") == std::string::npos) out += line + '\n';
  }
  return out;
}

RunConfig config(const std::string& sub, const std::string& input) {
  RunConfig c;
  c.subcommand = sub;
  c.input = input;
  return c;
}

std::string toy() { return (fixtures::data_dir() / "toy.edges").string(); }
std::string karate() { return (fixtures::data_dir() / "karate.edges").string(); }

const std::string& artifact(const RunOutput& r, const std::string& name) {
  for (const auto& [n, content] : r.artifacts.files()) {
    if (n == name) return content;
  }
  throw std::runtime_error("no artifact " + name);
}

Eigen::MatrixXd parse_csv_body(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');  // row label
    rows.emplace_back();
    while (std::getline(cells, cell, ',')) rows.back().push_back(std::stod(cell));
  }
  Eigen::MatrixXd m(Eigen::Index(rows.size()), rows.empty() ? 0 : Eigen::Index(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(Eigen::Index(i), Eigen::Index(j)) = rows[i][j];
  }
  return m;
}

std::string synthetic_table() {
  fixtures::Rng rng(5);
  std::ostringstream out;
  out << "x,y,zinc,ffreq,dist,soil\n";
  for (int i = 0; i < 60; ++i) {
    const double x = 500.0 * rng.uniform(), y = 500.0 * rng.uniform(), dist = rng.uniform();
    out << x << ',' << y << ',' << 300.0 + 400.0 * (1 - dist) + 40.0 * std::cos(x / 80.0) + 10.0 * rng.normal() << ','
        << 1 + rng.below(3) << ',' << dist << ',' << 1 + rng.below(3) << '\n';
  }
  return out.str();
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(2.75) == "2.75");
  CHECK(format_number(1.0 / 3) == "0.3333333333333333");
  CHECK(std::stod(format_number(1e-300)) == 1e-300);
}

TEST_CASE("grafield subcommand reproduces the toy matrix") {
  const RunOutput r = execute(config("grafield", toy()));
  const std::string& csv = artifact(r, "grafield.csv");
  CHECK(csv.rfind("vertex,1,2,3,4\n", 0) == 0);
  const Eigen::MatrixXd C = parse_csv_body(csv);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
  expected(0, 1) = expected(1, 0) = 22.0 / 8;
  expected(1, 2) = expected(2, 1) = expected(1, 3) = expected(3, 1) = 22.0 / 16;
  expected(2, 3) = expected(3, 2) = 22.0 / 12;
  CHECK((C - expected).cwiseAbs().maxCoeff() <= 1e-14);
  const auto report = nlohmann::json::parse(artifact(r, "report.json"));
  CHECK(report["total_weight"] == 22.0);
  CHECK(report["meta"]["config"]["subcommand"] == "grafield");
  CHECK(report["meta"]["version"] == library_version());
}

TEST_CASE("spectrum subcommand") {
  RunConfig c = config("spectrum", toy());
  c.top = 10;
  const RunOutput r = execute(c);
  const Eigen::MatrixXd values = parse_csv_body(artifact(r, "eigenvalues.csv"));
  CHECK(values.rows() == 3);
  const auto report = nlohmann::json::parse(artifact(r, "report.json"));
  CHECK(report["warnings"].size() == 1);

  c.route = "operator";
  c.op = "pagerank";
  CHECK(parse_csv_body(artifact(execute(c), "eigenvalues.csv")).rows() == 4);

  RunConfig json_out = config("spectrum", toy());
  json_out.format = "json";
  const RunOutput j = execute(json_out);
  REQUIRE(j.artifacts.files().size() == 1);
  const auto doc = nlohmann::json::parse(artifact(j, "spectrum.json"));
  CHECK(doc["eigenvalues"]["values"].size() == 3);
}

TEST_CASE("other subcommands produce their tables") {
  RunConfig embed = config("embed", karate());
  embed.k = 3;
  embed.t = 2;
  CHECK(parse_csv_body(artifact(execute(embed), "coords.csv")).cols() == 3);

  RunConfig smooth = config("smooth", toy());
  const Eigen::MatrixXd pmf = parse_csv_body(artifact(execute(smooth), "pmf.csv"));
  CHECK(pmf(0, 2) == doctest::Approx(3.0 / 26));
  smooth.estimator = "mle";
  CHECK(parse_csv_body(artifact(execute(smooth), "pmf.csv"))(0, 2) == doctest::Approx(2.0 / 22));
  smooth.estimator = "stein";
  CHECK(nlohmann::json::parse(artifact(execute(smooth), "report.json"))["tau"] == doctest::Approx(344.0 / 76));

  RunConfig cluster = config("cluster", karate());
  cluster.k = 2;
  cluster.op = "reg1";
  cluster.tau = "0.5";
  cluster.labels = (fixtures::data_dir() / "karate.labels.csv").string();
  const auto report = nlohmann::json::parse(artifact(execute(cluster), "report.json"));
  CHECK(report["misclassification"].get<double>() <= 2.0 / 34 + 1e-12);
  CHECK(report.contains("k_suggested"));

  TempDir dir;
  const fs::path table = dir.path() / "table.csv";
  std::ofstream(table) << synthetic_table();
  RunConfig regress = config("regress", table.string());
  regress.k = 10;
  regress.op = "reg1";
  regress.tau = "minimax";
  const RunOutput reg = execute(regress);
  const auto rr = nlohmann::json::parse(artifact(reg, "report.json"));
  CHECK(rr["r2"].get<double>() > 0.5);
  CHECK(artifact(reg, "coefficients.csv").find("phi1") != std::string::npos);
  CHECK(parse_csv_body(artifact(reg, "phi.csv")).cols() == 10);
}

TEST_CASE("identical configs give identical artifacts") {
  for (const std::string format : {"csv", "json"}) {
    for (const std::string sub : {"grafield", "spectrum", "embed", "cluster", "smooth"}) {
      RunConfig c = config(sub, karate());
      c.format = format;
      c.k = sub == "cluster" ? 3 : 2;
      c.op = sub == "cluster" ? "reg2" : "laplacian";
      c.tau = "0.5";
      // Same output directory both times: the report echoes it.
      TempDir dir;
      c.out = dir.path().string();
      std::ostringstream sink;
      REQUIRE(run(c, sink, sink) == kOk);
      std::map<std::string, std::string> first;
      for (const auto& entry : fs::directory_iterator(dir.path())) {
        first[entry.path().filename().string()] = without_timestamp(slurp(entry.path()));
      }
      REQUIRE(run(c, sink, sink) == kOk);
      std::size_t files = 0;
      for (const auto& entry : fs::directory_iterator(dir.path())) {
        ++files;
        const auto name = entry.path().filename().string();
        REQUIRE(first.count(name) == 1);
        CHECK(without_timestamp(slurp(entry.path())) == first[name]);
      }
      CHECK(files == first.size());
      CHECK(files >= 1);
    }
  }
}

TEST_CASE("a saved report replays the run") {
  TempDir dir;
  RunConfig c = config("cluster", karate());
  c.k = 2;
  c.op = "reg1";
  c.tau = "kt";
  c.seed = 7;
  c.out = dir.path().string();
  std::ostringstream sink;
  REQUIRE(run(c, sink, sink) == kOk);
  const std::string labels = slurp(dir.path() / "labels.csv");

  const RunConfig replay = load_config(dir.path() / "report.json");
  CHECK(replay.seed == 7);
  CHECK(replay.tau == "kt");
  CHECK(artifact(execute(replay), "labels.csv") == labels);

  const nlohmann::json j = c;
  CHECK(j.get<RunConfig>().op == "reg1");
}

TEST_CASE("exit codes") {
  std::ostringstream out, err;
  RunConfig missing = config("grafield", "/nonexistent/graph.edges");
  CHECK(run(missing, out, err) == kData);
  CHECK(err.str().find("cannot open") != std::string::npos);

  RunConfig bad_op = config("spectrum", toy());
  bad_op.op = "fourier";
  CHECK(run(bad_op, out, err) == kValidation);

  RunConfig bad_k = config("cluster", toy());
  bad_k.k = 1;
  CHECK(run(bad_k, out, err) == kValidation);

  RunConfig bad_tau = config("spectrum", toy());
  bad_tau.op = "reg1";
  bad_tau.tau = "-2";
  CHECK(run(bad_tau, out, err) == kValidation);

  TempDir dir;
  const fs::path iso = dir.path() / "iso.mtx";
  std::ofstream(iso) << "%%MatrixMarket matrix coordinate real symmetric\n3 3 1\n2 1 1\n";
  RunConfig isolated = config("spectrum", iso.string());
  isolated.out = (dir.path() / "out").string();
  CHECK(run(isolated, out, err) == kValidation);
  CHECK_FALSE(fs::exists(dir.path() / "out"));

  CHECK(exit_code_for(NumericalError("x")) == kNumerical);
  CHECK(exit_code_for(DegenerateTauError("x")) == kNumerical);
  CHECK(exit_code_for(DataError("x")) == kData);
  CHECK(exit_code_for(std::runtime_error("x")) == kNumerical);
  CHECK(exit_code_for(fs::filesystem_error("x", std::error_code())) == kData);
}

TEST_CASE("failed publication leaves nothing behind") {
  TempDir dir;
  // A directory squatting on the report name makes the final rename fail.
  fs::create_directories(dir.path() / "report.json");
  std::ofstream(dir.path() / "grafield.csv") << "previous\n";
  RunConfig c = config("grafield", toy());
  c.out = dir.path().string();
  std::ostringstream out, err;
  CHECK(run(c, out, err) == kData);
  CHECK(slurp(dir.path() / "grafield.csv") == "previous\n");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path())) ++entries;
  CHECK(entries == 2);
}

TEST_CASE("atomic single-file writes") {
  TempDir dir;
  const fs::path p = dir.path() / "sub" / "file.txt";
  write_atomic(p, "one");
  write_atomic(p, "two");
  CHECK(slurp(p) == "two");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(p.parent_path())) ++entries;
  CHECK(entries == 1);
}

TEST_CASE("dataset parsers") {
  std::istringstream gml(R"(graph [
  directed 0
  node [ id 0 label "a" value 1 ]
  node [ id 1 label "b" value 2 ]
  node [ id 2 label "c" value 1 ]
  edge [ source 0 target 1 ]
  edge [ source 1 target 2 value 3 ]
])");
  const LabelledEdges g = parse_gml(gml);
  CHECK(g.edges.size() == 2);
  CHECK(g.declared_vertices == 3);
  CHECK(g.labels.at("1") == "2");
  CHECK_FALSE(g.directed);

  std::istringstream net("*Vertices 3\n1 \"a\"\n2 \"b\"\n3 \"c\"\n*Arcs\n1 2 1\n2 1 1\n*Edges\n2 3 2\n");
  const LabelledEdges p = parse_pajek(net);
  CHECK(p.edges.size() == 3);
  CHECK(p.declared_vertices == 3);
  std::istringstream clu("*Vertices 3\n1\n2\n1\n");
  CHECK(parse_pajek_partition(clu) == std::vector<std::string>{"1", "2", "1"});

  const std::string raw =
      "\"x\",\"y\",\"zinc\",\"dist\",\"ffreq\",\"soil\",\"dist.m\"\n1,2,300,0.1,\"1\",\"2\",50\n3,4,400,0.2,\"2\",\"1\",80\n";
  std::size_t rows = 0;
  CHECK(convert_meuse(raw, &rows) == "x,y,zinc,ffreq,dist,soil,dist_m\n1,2,300,1,0.1,2,50\n3,4,400,2,0.2,1,80\n");
  CHECK(rows == 2);
  CHECK_THROWS_AS(convert_meuse("\"x\",\"y\"\n1,2\n"), DataError);

  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("fetch refuses to proceed without verified data") {
  TempDir dir;
  FetchOptions o;
  o.data_dir = dir.path() / "data";
  o.cache_dir = dir.path() / "cache";
  o.offline = true;
  try {
    (void)fetch_dataset("meuse", o);
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("meuse.txt") != std::string::npos);
  }
  fs::create_directories(o.cache_dir);
  std::ofstream(o.cache_dir / dataset_source("meuse").cache_file) << "\"x\",\"y\"\n1,2\n";
  try {
    (void)fetch_dataset("meuse", o);
    FAIL("expected a checksum error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("checksum") != std::string::npos);
  }
  CHECK_FALSE(fs::exists(o.data_dir / "meuse.csv"));
  CHECK_THROWS_AS(dataset_source("imaginary"), ValidationError);
}

TEST_CASE("fetch converts a cached graph archive and pins it") {
  TempDir dir;
  FetchOptions o;
  o.data_dir = dir.path() / "data";
  o.cache_dir = dir.path() / "cache";
  o.offline = true;
  const auto& src = dataset_source("mexican");
  fs::create_directories(o.cache_dir);
  std::ofstream(o.cache_dir / src.cache_file) << "*Vertices 4\n1 \"a\"\n2 \"b\"\n3 \"c\"\n4 \"d\"\n*Edges\n1 2\n2 3\n3 4\n";
  std::ofstream(o.cache_dir / src.companion) << "*Vertices 4\n1\n1\n2\n2\n";
  const FetchReport first = fetch_dataset("mexican", o);
  CHECK(first.vertices == 4);
  CHECK(first.edges == 3);
  CHECK(first.checksum_status == "recorded");
  CHECK(slurp(o.data_dir / "mexican.labels.csv").find("4,2") != std::string::npos);
  const FetchReport second = fetch_dataset("mexican", o);
  CHECK(second.checksum_status == "matched-lock");

  std::ofstream(o.cache_dir / src.cache_file) << "*Vertices 2\n*Edges\n1 2\n";
  CHECK_THROWS_AS(fetch_dataset("mexican", o), DataError);
}
