#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "slipgen/geometry.hpp"
#include "slipgen/klbasis.hpp"
#include "slipgen/okada.hpp"

namespace slipgen {

struct ProxyConfig {
  std::size_t shore_index = 0;
  /// Grid points treated as ocean (eta = dz there, 0 elsewhere).
  std::vector<std::size_t> offshore;
  double water_density = 1000.0;  // kg/m^3
  double gravity = 9.81;          // m/s^2
  /// Area represented by one grid point: dx * L on a transect (L the strike
  /// extent), dx * dy on a box grid.
  double cell_measure = 0.0;
};

/// Transect defaults: shore snapped to the nearest point to `shore`, ocean where x < `offshore_x_below`.
ProxyConfig make_proxy_config_1d(const DeformGrid& grid, Point2 shore, double offshore_x_below,
                                 double strike_extent = 100.0e3);

/// Box grid: shore snapped to the nearest point, ocean selected by `is_offshore`.
ProxyConfig make_proxy_config_2d(const DeformGrid& grid, Point2 shore,
                                 const std::function<bool(Point2)>& is_offshore);

struct ProxySet {
  double dB_shore = 0.0;   // m
  double energy_pj = 0.0;  // PJ
  double eta_max = 0.0;    // m
  double depth = 0.0;      // m, eta_max - dB_shore
};

/// E = 1/2 rho g sum_ocean(eta^2) * cell_measure * 1e-15 PJ; eta_max = max(0, max_ocean dz).
ProxySet compute_proxies(const Eigen::Ref<const Eigen::VectorXd>& dz, const ProxyConfig& cfg);
ProxySet compute_proxies(const Deformation& deformation, const ProxyConfig& cfg);

/// Exact law of the shore displacement for a Gaussian field truncated to m modes:
/// dB_shore = mean + b^T z.
struct ShoreDensity {
  double mean = 0.0;
  double variance = 0.0;
  Eigen::VectorXd b;

  double stddev() const;
  /// Normal pdf; for variance 0 the law is a point mass and this returns 0 off the mean.
  double pdf(double x) const;
};

ShoreDensity shore_density(const UnitSourceBank& bank, const KLBasis& basis, std::size_t m,
                           const ProxyConfig& cfg);

}  // namespace slipgen
