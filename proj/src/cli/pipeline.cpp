#include "slipgen/cli/pipeline.hpp"

#include <numeric>

#include <fmt/format.h>

#include "slipgen/errors.hpp"

namespace slipgen::cli {

void StageTimer::start(std::string name) {
  current_ = std::move(name);
  begin_ = std::chrono::steady_clock::now();
}

void StageTimer::stop() {
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - begin_;
  stages_.emplace_back(std::move(current_), dt.count());
  current_.clear();
}

double StageTimer::total() const {
  return std::accumulate(stages_.begin(), stages_.end(), 0.0,
                         [](double acc, const auto& s) { return acc + s.second; });
}

EnsembleModel Pipeline::ensemble_model() const {
  if (!bank || !proxy) throw Error("pipeline has no bank attached");
  EnsembleModel model{basis, *bank, *proxy, std::nullopt};
  if (distribution.kind == DistributionKind::lognormal) {
    model.lognormal.emplace(LognormalScaling{fault, distribution.taper, config.target_mw,
                                             config.moment});
  }
  return model;
}

FaultModel build_fault(const RunConfig& config) {
  if (config.builtin_fault) {
    const auto& b = *config.builtin_fault;
    return build_1d_fault(b.width, b.dip, b.top_depth, b.n_patches, b.strike_length);
  }
  return load_fault(config.file_fault->path, config.file_fault->options);
}

std::shared_ptr<const DeformGrid> build_grid(const RunConfig& config, const FaultModel& fault) {
  const GridSpec& g = config.grid;
  if (g.kind == GridKind::transect) {
    return std::make_shared<const DeformGrid>(build_grid_1d(fault, g.margin, g.n_points));
  }
  SurfaceBounds b = surface_bounds(fault);
  b.x_min -= g.margin;
  b.x_max += g.margin;
  b.y_min -= g.margin;
  b.y_max += g.margin;
  return std::make_shared<const DeformGrid>(build_grid_2d(b, g.nx, g.ny));
}

ProxyConfig build_proxy(const RunConfig& config, const DeformGrid& grid) {
  ProxyConfig cfg;
  if (grid.is_transect()) {
    cfg = make_proxy_config_1d(grid, config.proxy.shore, config.proxy.offshore_x_below,
                               config.proxy.strike_extent);
  } else {
    const double below = config.proxy.offshore_x_below;
    cfg = make_proxy_config_2d(grid, config.proxy.shore, [below](Point2 p) { return p.x < below; });
  }
  cfg.water_density = config.proxy.water_density;
  cfg.gravity = config.proxy.gravity;
  return cfg;
}

Pipeline prepare(const RunConfig& config, StageTimer& timer) {
  timer.start("fault");
  FaultModel fault = build_fault(config);
  timer.stop();
  for (std::size_t i = 0; i < config.run.truncations.size(); ++i) {
    if (config.run.truncations[i] > fault.size()) {
      throw ConfigError(fmt::format("run.truncations[{}]: {} exceeds the {} subfaults", i,
                                    config.run.truncations[i], fault.size()));
    }
  }
  timer.start("covariance");
  SlipDistribution dist = make_slip_distribution(fault, config.taper, config.acf, config.alpha,
                                                 config.distribution, config.target_mw,
                                                 config.moment);
  timer.stop();
  timer.start("eigendecomposition");
  KLBasis basis = eigendecompose(dist, fault.hash());
  timer.stop();
  return Pipeline{config, std::move(fault), std::move(dist), std::move(basis),
                  nullptr, std::nullopt, std::nullopt, false};
}

void attach_bank(Pipeline& p, unsigned workers, StageTimer& timer) {
  p.grid = build_grid(p.config, p.fault);
  p.proxy = build_proxy(p.config, *p.grid);
  const auto cache = p.config.bank_cache_path();
  timer.start("unit-source bank");
  if (auto cached = load_bank(cache, p.fault, p.grid, p.config.elastic)) {
    p.bank.emplace(std::move(*cached));
    p.bank_from_cache = true;
  } else {
    p.bank.emplace(build_bank(p.fault, p.grid, p.config.elastic, workers));
    if (cache.has_parent_path()) std::filesystem::create_directories(cache.parent_path());
    save_bank(*p.bank, cache);
    p.bank_from_cache = false;
  }
  timer.stop();
}

}  // namespace slipgen::cli
