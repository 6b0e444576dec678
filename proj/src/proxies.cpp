#include "slipgen/proxies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "slipgen/errors.hpp"

namespace slipgen {

ProxyConfig make_proxy_config_1d(const DeformGrid& grid, Point2 shore, double offshore_x_below,
                                 double strike_extent) {
  if (!grid.is_transect()) throw ConfigError("proxy.offshore: transect config on a box grid");
  ProxyConfig cfg;
  cfg.shore_index = grid.nearest(shore);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i].x < offshore_x_below) cfg.offshore.push_back(i);
  }
  if (cfg.offshore.empty()) throw ConfigError("proxy.offshore: mask selects no grid points");
  cfg.cell_measure = grid.dx() * strike_extent;
  return cfg;
}

ProxyConfig make_proxy_config_2d(const DeformGrid& grid, Point2 shore,
                                 const std::function<bool(Point2)>& is_offshore) {
  if (grid.is_transect()) throw ConfigError("proxy.offshore: box config on a transect grid");
  ProxyConfig cfg;
  cfg.shore_index = grid.nearest(shore);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (is_offshore(grid[i])) cfg.offshore.push_back(i);
  }
  if (cfg.offshore.empty()) throw ConfigError("proxy.offshore: mask selects no grid points");
  cfg.cell_measure = grid.dx() * grid.dy();
  return cfg;
}

ProxySet compute_proxies(const Eigen::Ref<const Eigen::VectorXd>& dz, const ProxyConfig& cfg) {
  if (cfg.offshore.empty()) throw ConfigError("proxy config has an empty offshore mask");
  if (cfg.shore_index >= static_cast<std::size_t>(dz.size())) {
    throw ConfigError("shore point lies outside the deformation grid");
  }
  double sum_sq = 0.0;
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i : cfg.offshore) {
    const double eta = dz[static_cast<Eigen::Index>(i)];
    sum_sq += eta * eta;
    peak = std::max(peak, eta);
  }
  ProxySet out;
  out.energy_pj = 0.5 * cfg.water_density * cfg.gravity * sum_sq * cfg.cell_measure * 1e-15;
  out.eta_max = std::max(0.0, peak);
  out.dB_shore = dz[static_cast<Eigen::Index>(cfg.shore_index)];
  out.depth = out.eta_max - out.dB_shore;
  return out;
}

ProxySet compute_proxies(const Deformation& deformation, const ProxyConfig& cfg) {
  return compute_proxies(deformation.dz, cfg);
}

double ShoreDensity::stddev() const { return std::sqrt(variance); }

double ShoreDensity::pdf(double x) const {
  if (!(variance > 0.0)) return 0.0;
  const double u = (x - mean) / stddev();
  return std::exp(-0.5 * u * u) / (stddev() * std::sqrt(2.0 * std::numbers::pi));
}

ShoreDensity shore_density(const UnitSourceBank& bank, const KLBasis& basis, std::size_t m,
                           const ProxyConfig& cfg) {
  if (basis.kind() != DistributionKind::gaussian) {
    throw UnsupportedDistributionError(
        "the shore displacement is exactly Gaussian only for Gaussian slip");
  }
  if (cfg.shore_index >= static_cast<std::size_t>(bank.points())) {
    throw ConfigError("shore point lies outside the bank grid");
  }
  const ActiveModes act = active_modes(m, true, basis.size());
  const auto row = bank.columns().row(static_cast<Eigen::Index>(cfg.shore_index));
  ShoreDensity d;
  d.mean = row.dot(basis.mean());
  d.b = (row * basis.scaled_modes(act.first, act.count)).transpose();
  d.variance = d.b.squaredNorm();
  return d;
}

}  // namespace slipgen
