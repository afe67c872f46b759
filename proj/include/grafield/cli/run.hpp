#pragma once

#include <exception>
#include <ostream>

#include <json.hpp>

#include "grafield/cli/output.hpp"
#include "grafield/cli/run_config.hpp"

namespace grafield::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kData = 3, kNumerical = 4 };

struct RunOutput {
  ArtifactSet artifacts;
  /// Short summary printed to standard output.
  nlohmann::json summary;
};

/// Runs a subcommand entirely in memory. Throws grafield::Error on failure.
/// `fetch` writes its files itself since it may touch a cache directory.
RunOutput execute(const RunConfig& config);

/// execute() + atomic publication into `config.out`. Returns the exit code
/// and reports failures on `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Maps an exception onto the process exit code.
int exit_code_for(const std::exception& e);

}  // namespace grafield::cli
