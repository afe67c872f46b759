#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "grafield/graph.hpp"

namespace grafield::io {

/// Whitespace-separated `u v [w]` lines; `#` starts a comment, w defaults to 1.
std::vector<Edge> parse_edge_list(std::istream& in);

/// Matrix Market coordinate format (real, integer or pattern; symmetric or
/// general). General matrices must be symmetric. Vertices are labelled 1..n,
/// so rows without entries become isolated vertices.
Graph parse_matrix_market(std::istream& in);

/// Reads either format, choosing Matrix Market when the file starts with the
/// `%%MatrixMarket` banner.
Graph read_graph(const std::filesystem::path& path);

/// CSV `vertex,label` with an optional header row.
std::map<std::string, std::string> read_labels(const std::filesystem::path& path);
std::map<std::string, std::string> parse_labels(std::istream& in);

/// Writes `u v w` lines for the upper triangle (including self-loops).
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace grafield::io
