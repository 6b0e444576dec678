#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "slipgen/cli/config.hpp"
#include "slipgen/klbasis.hpp"
#include "slipgen/okada.hpp"
#include "slipgen/proxies.hpp"
#include "slipgen/ptha_stats.hpp"

namespace slipgen::cli {

/// Wall-clock stage timings, printed as a summary at the end of a command.
class StageTimer {
 public:
  void start(std::string name);
  void stop();
  const std::vector<std::pair<std::string, double>>& stages() const { return stages_; }
  double total() const;

 private:
  std::string current_;
  std::chrono::steady_clock::time_point begin_{};
  std::vector<std::pair<std::string, double>> stages_;
};

/// Fault, distribution and basis for one config; the grid, bank and proxy
/// setup are attached on demand.
struct Pipeline {
  RunConfig config;
  FaultModel fault;
  SlipDistribution distribution;
  KLBasis basis;
  std::shared_ptr<const DeformGrid> grid;
  std::optional<UnitSourceBank> bank;
  std::optional<ProxyConfig> proxy;
  bool bank_from_cache = false;

  EnsembleModel ensemble_model() const;
};

FaultModel build_fault(const RunConfig& config);
std::shared_ptr<const DeformGrid> build_grid(const RunConfig& config, const FaultModel& fault);
ProxyConfig build_proxy(const RunConfig& config, const DeformGrid& grid);

/// Builds fault, distribution and basis; checks truncations against N.
Pipeline prepare(const RunConfig& config, StageTimer& timer);

/// Loads the bank from the cache when the hashes match, otherwise builds and
/// stores it. Also sets the grid and proxy config.
void attach_bank(Pipeline& pipeline, unsigned workers, StageTimer& timer);

}  // namespace slipgen::cli
