#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grafield/graph.hpp"

namespace grafield::cli {

enum class SourceFormat { GmlZip, Pajek, MeuseTable };

struct DatasetSource {
  std::string name;
  /// Empty when no stable public download is known; the file must then be
  /// placed in the cache by hand.
  std::string url;
  /// File name inside the cache directory.
  std::string cache_file;
  /// Zip member holding the graph (GmlZip only).
  std::string member;
  SourceFormat format;
  /// Pinned SHA-256 of the downloaded file; empty means the first download is
  /// recorded in the data directory's lock file and later ones must match.
  std::string sha256;
  /// GML node attribute carrying the ground-truth class.
  std::string label_attribute = "value";
  /// Extra companion file (Pajek partition) expected next to the main one.
  std::string companion;
};

const std::vector<DatasetSource>& dataset_sources();
const DatasetSource& dataset_source(const std::string& name);

struct FetchOptions {
  std::filesystem::path data_dir = "data";
  std::filesystem::path cache_dir;  // empty: no cache
  bool offline = false;
};

struct FetchReport {
  std::string name;
  std::vector<std::filesystem::path> files;
  std::string sha256;
  std::string checksum_status;  // "pinned", "recorded", "matched-lock"
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t rows = 0;
  std::vector<std::string> notes;
};

/// Downloads (or takes from the cache), verifies and converts a dataset into
/// `<data_dir>/<name>.edges` + `<name>.labels.csv`, or `<name>.csv` for
/// tables.
FetchReport fetch_dataset(const std::string& name, const FetchOptions& options);

// Parsers used by the converters; exposed for testing.

struct LabelledEdges {
  std::vector<Edge> edges;
  /// vertex id -> class label, for every declared vertex.
  std::map<std::string, std::string> labels;
  bool directed = false;
  std::size_t declared_vertices = 0;
};

/// GML `graph [ node [ id .. ] edge [ source .. target .. ] ]`.
LabelledEdges parse_gml(std::istream& in, const std::string& label_attribute = "value");

/// Pajek `*Vertices` / `*Edges` / `*Arcs` sections; optional `.clu` partition.
LabelledEdges parse_pajek(std::istream& in);
std::vector<std::string> parse_pajek_partition(std::istream& in);

/// Canonical Meuse table: x,y,zinc,ffreq,dist,soil,dist_m.
std::string convert_meuse(const std::string& raw, std::size_t* rows = nullptr);

/// Minimal zip reader (stored and deflated members).
std::string zip_member(const std::string& archive, const std::string& member);
std::vector<std::string> zip_members(const std::string& archive);

std::string sha256_hex(const std::string& bytes);

/// HTTP(S) GET into memory; throws DataError on any failure.
std::string http_get(const std::string& url);

}  // namespace grafield::cli
