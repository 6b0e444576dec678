#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slipgen/covariance.hpp"
#include "slipgen/geometry.hpp"
#include "slipgen/moment.hpp"
#include "slipgen/okada.hpp"

namespace slipgen::cli {

struct Builtin1DFault {
  double width = 100.0e3;
  double dip = 13.0;
  double top_depth = 5.0e3;
  std::size_t n_patches = 200;
  double strike_length = 1.0e6;
};

struct FileFault {
  std::filesystem::path path;  // resolved against the config directory
  FaultLoadOptions options;
};

enum class GridKind { transect, box };

struct GridSpec {
  GridKind kind = GridKind::transect;
  double margin = 0.0;
  std::size_t n_points = 0;  // transect
  std::size_t nx = 0;        // box
  std::size_t ny = 0;
};

struct ProxySpec {
  Point2 shore{};
  double offshore_x_below = 0.0;
  double strike_extent = 100.0e3;  // transect only
  double water_density = 1000.0;
  double gravity = 9.81;
};

/// Proxy names accepted by extreme-event filters.
enum class ProxyField { dB_shore, energy_pj, eta_max, depth };
ProxyField parse_proxy_field(std::string_view name);
std::string_view to_string(ProxyField field);

struct ExtremeFilter {
  ProxyField proxy = ProxyField::depth;
  double above = 0.0;
};

struct RunSpec {
  std::vector<std::size_t> truncations;
  std::size_t n_samples = 1;
  std::uint64_t seed = 0;
  std::size_t modes = 8;
  std::size_t sample_count = 5;
  /// false: every truncation reuses the same deviates per draw.
  bool independent_streams = false;
  std::vector<ExtremeFilter> extremes;
  std::size_t kde_grid_1d = 512;
  std::size_t kde_grid_2d = 100;
  std::size_t hazard_levels = 200;
  std::size_t block_size = 64;
};

struct RunConfig {
  std::string name;
  std::optional<Builtin1DFault> builtin_fault;
  std::optional<FileFault> file_fault;
  TaperSpec taper;
  AcfSpec acf;
  double alpha = 0.0;
  DistributionKind distribution = DistributionKind::gaussian;
  double target_mw = 0.0;
  MomentSpec moment;
  ElasticSpec elastic;
  GridSpec grid;
  ProxySpec proxy;
  RunSpec run;
  std::filesystem::path output_dir;
  /// Relative paths resolve against the output directory.
  std::filesystem::path bank_cache = "bank.bin";

  std::filesystem::path bank_cache_path() const;
};

/// Parses and validates a JSON run configuration. Errors are ConfigError with
/// the offending field path ("taper.d_max_m: ..."); unreadable files raise IoError.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir);

}  // namespace slipgen::cli
