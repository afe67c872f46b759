#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "grafield/smoothing.hpp"

namespace grafield::cli {

inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// Everything a run depends on. Serialized into every report so the run can
/// be repeated with `--config`.
struct RunConfig {
  std::string subcommand;
  std::string input;   // graph file, or the data table for `regress`
  std::string labels;  // optional ground truth for `cluster`
  std::string op = "laplacian";
  std::string route = "gmatrix";  // spectrum: gmatrix | operator
  std::string tau = "0";          // number or laplace|kt|perks|minimax|stein
  double alpha = 0.15;
  std::size_t k = 0;
  std::size_t top = 0;
  unsigned t = 1;
  std::string embedding = "diffusion";  // diffusion | kl
  std::string estimator = "laplace";    // smooth: mle|laplace|kt|perks|minimax|stein|good-turing
  std::string lambda = "auto";
  bool log_y = false;
  bool one_hot = false;
  bool gaussian_edges = false;
  bool row_normalize = false;
  bool full_dimension = false;
  /// cluster: keep only the largest connected component.
  bool largest_component = false;
  /// spectrum: vertex signal CSV to transform, and whether to drop the
  /// vertex-mass weights in the transform.
  std::string signal;
  bool unweighted_gft = false;
  std::size_t restarts = 50;
  std::uint64_t seed = kDefaultSeed;
  std::string format = "csv";
  std::string out = ".";
  std::string dataset;
  std::string cache;
  bool offline = false;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

/// Reads a config file. A previous run's report is accepted too; its
/// `meta.config` block is used.
RunConfig load_config(const std::filesystem::path& path);

/// Parses `--tau` text: a nonnegative number or one of the named rules.
TauPolicy parse_tau(const std::string& text);

/// Checks cross-field constraints (known subcommand, format, operator...).
void validate(const RunConfig& c);

}  // namespace grafield::cli
