#include "grafield/graph_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "grafield/error.hpp"

namespace grafield::io {
namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double parse_double(const std::string& token, std::size_t line_no) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw DataError("line " + std::to_string(line_no) + ": cannot parse number '" + token + "'");
  }
  return value;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  return s;
}

}  // namespace

std::vector<Edge> parse_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    if (tokens.size() < 2 || tokens.size() > 3) {
      throw DataError("line " + std::to_string(line_no) + ": expected 'u v [w]'");
    }
    Edge e{tokens[0], tokens[1], 1.0};
    if (tokens.size() == 3) e.weight = parse_double(tokens[2], line_no);
    edges.push_back(std::move(e));
  }
  return edges;
}

Graph parse_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty Matrix Market stream");
  std::istringstream banner(lower(line));
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%matrixmarket" || object != "matrix") throw DataError("missing %%MatrixMarket matrix banner");
  if (format != "coordinate") throw DataError("only coordinate Matrix Market files are supported");
  if (field != "real" && field != "integer" && field != "pattern" && field != "double") {
    throw DataError("unsupported Matrix Market field '" + field + "'");
  }
  if (symmetry != "symmetric" && symmetry != "general") {
    throw DataError("unsupported Matrix Market symmetry '" + symmetry + "'");
  }
  const bool pattern = field == "pattern";
  const bool symmetric = symmetry == "symmetric";

  std::size_t line_no = 1;
  long long rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '%') continue;
    std::istringstream size_line(t);
    if (!(size_line >> rows >> cols >> nnz)) throw DataError("malformed Matrix Market size line");
    break;
  }
  if (rows <= 0 || rows != cols || nnz < 0) throw DataError("Matrix Market adjacency must be square and nonempty");

  std::vector<Eigen::Triplet<double>> triplets;
  long long read = 0;
  while (read < nnz && std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '%') continue;
    std::istringstream entry(t);
    long long i = 0, j = 0;
    std::string w_token;
    if (!(entry >> i >> j)) throw DataError("line " + std::to_string(line_no) + ": malformed entry");
    double w = 1.0;
    if (!pattern) {
      if (!(entry >> w_token)) throw DataError("line " + std::to_string(line_no) + ": missing value");
      w = parse_double(w_token, line_no);
    }
    if (i < 1 || j < 1 || i > rows || j > cols) {
      throw DataError("line " + std::to_string(line_no) + ": index out of range");
    }
    triplets.emplace_back(Eigen::Index(i - 1), Eigen::Index(j - 1), w);
    if (symmetric && i != j) triplets.emplace_back(Eigen::Index(j - 1), Eigen::Index(i - 1), w);
    ++read;
  }
  if (read != nnz) throw DataError("Matrix Market file ended after " + std::to_string(read) + " of " + std::to_string(nnz) + " entries");

  Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  a.setFromTriplets(triplets.begin(), triplets.end());
  return Graph::from_sparse(std::move(a));
}

Graph read_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open graph file '" + path.string() + "'");
  std::string first;
  std::getline(in, first);
  in.clear();
  in.seekg(0);
  if (lower(first).rfind("%%matrixmarket", 0) == 0) return parse_matrix_market(in);
  const auto edges = parse_edge_list(in);
  if (edges.empty()) throw ValidationError("graph file '" + path.string() + "' contains no edges");
  return Graph::from_edges(edges);
}

std::map<std::string, std::string> parse_labels(std::istream& in) {
  std::map<std::string, std::string> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DataError("label file line " + std::to_string(line_no) + ": expected 'vertex,label'");
    std::string vertex = trim(line.substr(0, comma));
    std::string label = trim(line.substr(comma + 1));
    if (line_no == 1 && lower(vertex) == "vertex") continue;
    if (!labels.emplace(vertex, label).second) throw DataError("label file repeats vertex '" + vertex + "'");
  }
  return labels;
}

std::map<std::string, std::string> read_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open label file '" + path.string() + "'");
  return parse_labels(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  const auto& a = g.adjacency();
  out << std::setprecision(17);
  for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) {
      if (it.row() <= it.col() && it.value() != 0.0) {
        out << g.label(std::size_t(it.row())) << ' ' << g.label(std::size_t(it.col())) << ' ' << it.value() << '\n';
      }
    }
  }
}

}  // namespace grafield::io
