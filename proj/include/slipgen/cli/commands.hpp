#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slipgen/cli/config.hpp"

namespace slipgen::cli {

struct CommandOptions {
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;  // 0 = available parallelism
  std::ostream* log = nullptr;
};

struct CommandResult {
  std::vector<std::filesystem::path> files;
  /// Failures that did not stop the command (e.g. a KDE on a degenerate sample).
  std::vector<std::string> errors;
  int exit_code = 0;
};

/// Eigenvalue spectrum plus one file per requested mode.
CommandResult cmd_modes(RunConfig config, const CommandOptions& options);
/// Slip and deformation of `run.sample_count` draws at every truncation, sharing z per draw.
CommandResult cmd_sample(RunConfig config, const CommandOptions& options);
/// Proxy tables, densities, hazard curves and extreme-event sets per truncation.
CommandResult cmd_ensemble(RunConfig config, const CommandOptions& options);
/// Builds (or validates) the unit-source bank cache and writes the mean deformation.
CommandResult cmd_bank(RunConfig config, const CommandOptions& options);

/// 1 config/format/geometry, 2 domain/numerical, 3 I/O.
int exit_code_for(const std::exception& e);

/// Loads the config, runs `command` and maps failures to exit codes, reporting
/// them on `err`.
int run_command(std::string_view command, const std::filesystem::path& config_path,
                const CommandOptions& options, std::ostream& err);

}  // namespace slipgen::cli
