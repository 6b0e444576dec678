#pragma once

#include <filesystem>
#include <string>

#include "slipgen/cli/config.hpp"
#include "slipgen/cli/pipeline.hpp"

namespace fixture {

inline std::filesystem::path source_dir() { return SLIPGEN_SOURCE_DIR; }

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("slipgen_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// A shipped config with outputs and the bank cache redirected to `out`.
inline slipgen::cli::RunConfig shipped_config(const std::string& file,
                                              const std::filesystem::path& out) {
  auto cfg = slipgen::cli::load_config(source_dir() / "configs" / file);
  cfg.output_dir = out;
  cfg.bank_cache = out / "bank.bin";
  return cfg;
}

inline slipgen::cli::Pipeline shipped_pipeline(const std::string& file,
                                               const std::filesystem::path& out,
                                               bool with_bank) {
  slipgen::cli::StageTimer timer;
  auto p = slipgen::cli::prepare(shipped_config(file, out), timer);
  if (with_bank) slipgen::cli::attach_bank(p, 0, timer);
  return p;
}

}  // namespace fixture
