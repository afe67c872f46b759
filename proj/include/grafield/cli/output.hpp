#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "grafield/cli/run_config.hpp"

namespace grafield::cli {

/// Shortest text that reads back to the same double.
std::string format_number(double v);

/// CSV with a header row; `row_names` becomes the first column when given.
std::string csv_table(const std::vector<std::string>& header, const std::vector<std::string>& row_names,
                      const Eigen::MatrixXd& values);

/// Converts a matrix to nested JSON arrays (row-major).
nlohmann::json json_matrix(const Eigen::MatrixXd& m);
nlohmann::json json_vector(const Eigen::VectorXd& v);

/// {config, version, timestamp}. The timestamp honours SOURCE_DATE_EPOCH.
nlohmann::json make_meta(const RunConfig& config);

std::string library_version();

/// Output files gathered in memory and published together: each is written to
/// a temporary sibling first and renamed into place only after every write
/// succeeded.
class ArtifactSet {
 public:
  void add(std::string name, std::string content);
  void add_json(std::string name, const nlohmann::json& j);
  /// Returns the final paths.
  std::vector<std::filesystem::path> commit(const std::filesystem::path& dir) const;
  const std::vector<std::pair<std::string, std::string>>& files() const noexcept { return files_; }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

/// Writes one file atomically (temporary sibling + rename).
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace grafield::cli
