#include "grafield/cli/datasets.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "grafield/error.hpp"

namespace grafield::cli {
namespace {

constexpr const char* kNetdata = "http://www-personal.umich.edu/~mejn/netdata/";

// --- GML ---------------------------------------------------------------------

struct GmlValue;
using GmlList = std::vector<std::pair<std::string, GmlValue>>;
struct GmlValue {
  std::string scalar;
  std::shared_ptr<GmlList> list;
};

class GmlLexer {
 public:
  explicit GmlLexer(std::istream& in) : in_(in) {}

  // Returns false at end of input.
  bool next(std::string& token) {
    token.clear();
    int c = skip_space();
    if (c == EOF) return false;
    if (c == '[' || c == ']') {
      token = char(c);
      return true;
    }
    if (c == '"') {
      token = "\"";
      while ((c = in_.get()) != EOF && c != '"') token += char(c);
      if (c == EOF) throw DataError("GML: unterminated string");
      return true;
    }
    token += char(c);
    while ((c = in_.peek()) != EOF && !std::isspace(c) && c != '[' && c != ']') token += char(in_.get());
    return true;
  }

 private:
  int skip_space() {
    int c;
    while ((c = in_.get()) != EOF) {
      if (c == '#') {
        while ((c = in_.get()) != EOF && c != '\n') {
        }
        continue;
      }
      if (!std::isspace(c)) return c;
    }
    return EOF;
  }
  std::istream& in_;
};

GmlList parse_gml_list(GmlLexer& lex, bool nested) {
  GmlList out;
  std::string key, value;
  while (lex.next(key)) {
    if (key == "]") {
      if (!nested) throw DataError("GML: unbalanced ']'");
      return out;
    }
    if (key == "[" || key.front() == '"') throw DataError("GML: expected a key, found '" + key + "'");
    if (!lex.next(value)) throw DataError("GML: key '" + key + "' has no value");
    GmlValue v;
    if (value == "[") {
      v.list = std::make_shared<GmlList>(parse_gml_list(lex, true));
    } else if (value == "]") {
      throw DataError("GML: key '" + key + "' has no value");
    } else {
      v.scalar = value.front() == '"' ? value.substr(1) : value;
    }
    out.emplace_back(key, std::move(v));
  }
  if (nested) throw DataError("GML: missing ']'");
  return out;
}

const GmlValue* gml_find(const GmlList& list, const std::string& key) {
  for (const auto& [k, v] : list) {
    if (k == key) return &v;
  }
  return nullptr;
}

// --- tables ------------------------------------------------------------------

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      out.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  out.push_back(cell);
  return out;
}

}  // namespace

const std::vector<DatasetSource>& dataset_sources() {
  static const std::vector<DatasetSource> sources = [] {
    std::vector<DatasetSource> s;
    const std::string base = kNetdata;
    s.push_back({"karate", base + "karate.zip", "karate.zip", "karate.gml", SourceFormat::GmlZip, "", "", ""});
    s.push_back({"football", base + "football.zip", "football.zip", "football.gml", SourceFormat::GmlZip, "", "value", ""});
    s.push_back({"polblogs", base + "polblogs.zip", "polblogs.zip", "polblogs.gml", SourceFormat::GmlZip, "", "value", ""});
    s.push_back({"adjnoun", base + "adjnoun.zip", "adjnoun.zip", "adjnoun.gml", SourceFormat::GmlZip, "", "value", ""});
    s.push_back({"mexican", "", "mexican.net", "", SourceFormat::Pajek, "", "", "mexican.clu"});
    s.push_back({"meuse", "https://raw.githubusercontent.com/mmaelicke/scikit-gstat/main/skgstat/data/samples/meuse.txt",
                 "meuse.txt", "", SourceFormat::MeuseTable,
                 "b27776bc1cad63c4bf308923c86a5a76a0a02566ac75984b018df2a477b52f64", "", ""});
    return s;
  }();
  return sources;
}

const DatasetSource& dataset_source(const std::string& name) {
  for (const auto& s : dataset_sources()) {
    if (s.name == name) return s;
  }
  std::string known;
  for (const auto& s : dataset_sources()) known += (known.empty() ? "" : ", ") + s.name;
  throw ValidationError("unknown dataset '" + name + "'; known: " + known);
}

LabelledEdges parse_gml(std::istream& in, const std::string& label_attribute) {
  GmlLexer lex(in);
  const GmlList top = parse_gml_list(lex, false);
  const GmlValue* graph = gml_find(top, "graph");
  if (!graph || !graph->list) throw DataError("GML: no graph block");

  LabelledEdges out;
  if (const auto* d = gml_find(*graph->list, "directed")) out.directed = d->scalar == "1";
  for (const auto& [key, value] : *graph->list) {
    if (!value.list) continue;
    if (key == "node") {
      const auto* id = gml_find(*value.list, "id");
      if (!id || id->list) throw DataError("GML: node without an id");
      std::string label;
      if (!label_attribute.empty()) {
        if (const auto* l = gml_find(*value.list, label_attribute)) label = l->scalar;
      }
      if (!out.labels.emplace(id->scalar, label).second) throw DataError("GML: duplicate node id " + id->scalar);
      ++out.declared_vertices;
    } else if (key == "edge") {
      const auto* s = gml_find(*value.list, "source");
      const auto* t = gml_find(*value.list, "target");
      if (!s || !t) throw DataError("GML: edge without source/target");
      out.edges.push_back({s->scalar, t->scalar, 1.0});
    }
  }
  for (const auto& e : out.edges) {
    if (!out.labels.count(e.u) || !out.labels.count(e.v)) throw DataError("GML: edge refers to an undeclared node");
  }
  return out;
}

LabelledEdges parse_pajek(std::istream& in) {
  LabelledEdges out;
  std::string line, section;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first) || first[0] == '%') continue;
    if (first[0] == '*') {
      section = first;
      std::transform(section.begin(), section.end(), section.begin(), [](unsigned char c) { return std::tolower(c); });
      if (section == "*arcs" || section == "*arcslist") out.directed = true;
      continue;
    }
    if (section == "*vertices") {
      out.labels.emplace(first, "");
      ++out.declared_vertices;
    } else if (section == "*edges" || section == "*arcs") {
      std::string v;
      double w = 1.0;
      if (!(ss >> v)) throw DataError("Pajek: edge line '" + line + "' has one endpoint");
      if (!(ss >> w)) w = 1.0;
      out.edges.push_back({first, v, w});
    }
  }
  if (out.declared_vertices == 0) throw DataError("Pajek: no *Vertices section");
  return out;
}

std::vector<std::string> parse_pajek_partition(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok) || tok[0] == '*' || tok[0] == '%') continue;
    out.push_back(tok);
  }
  return out;
}

std::string convert_meuse(const std::string& raw, std::size_t* rows) {
  std::istringstream in(raw);
  std::string line;
  if (!std::getline(in, line)) throw DataError("meuse table is empty");
  const auto header = split_csv(line);
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("meuse table has no column '" + name + "'");
    return std::size_t(it - header.begin());
  };
  const std::vector<std::size_t> picks{col("x"), col("y"), col("zinc"), col("ffreq"), col("dist"), col("soil"), col("dist.m")};
  std::ostringstream out;
  out << "x,y,zinc,ffreq,dist,soil,dist_m\n";
  std::size_t count = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \r\t") == std::string::npos) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) throw DataError("meuse row " + std::to_string(count + 1) + " has the wrong width");
    for (std::size_t c = 0; c < picks.size(); ++c) {
      const auto& v = cells[picks[c]];
      if (v.empty() || v == "NA") throw DataError("meuse row " + std::to_string(count + 1) + " has a missing value");
      out << (c ? "," : "") << v;
    }
    out << '\n';
    ++count;
  }
  if (rows) *rows = count;
  return out.str();
}

}  // namespace grafield::cli
