#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "slipgen/covariance.hpp"
#include "slipgen/klbasis.hpp"
#include "slipgen/okada.hpp"
#include "slipgen/proxies.hpp"

namespace slipgen {

/// Extra inputs for lognormal sampling: each draw is tapered and rescaled to `target_mw`.
struct LognormalScaling {
  const FaultModel& fault;
  Eigen::VectorXd taper;
  double target_mw = 0.0;
  MomentSpec moment{};
};

/// Prebuilt pieces an ensemble draws from. All referenced objects must outlive the run.
struct EnsembleModel {
  const KLBasis& basis;
  const UnitSourceBank& bank;
  const ProxyConfig& proxy;
  std::optional<LognormalScaling> lognormal;
};

struct EnsembleOptions {
  std::uint64_t stream = 0;
  unsigned workers = 0;  // 0 = hardware concurrency
  /// Draws per GEMM block. Block boundaries depend only on draw index.
  std::size_t block_size = 64;
};

/// Column-oriented proxy table.
struct ProxyTable {
  std::vector<double> dB_shore;
  std::vector<double> energy_pj;
  std::vector<double> eta_max;
  std::vector<double> depth;

  std::size_t size() const { return depth.size(); }
  ProxySet row(std::size_t i) const { return {dB_shore[i], energy_pj[i], eta_max[i], depth[i]}; }
  void resize(std::size_t n);
  void set(std::size_t i, const ProxySet& p);
};

struct SampleEnsemble {
  std::size_t n_s = 0;
  std::size_t m = 0;
  /// n_s x (active modes): the coefficients z_1..z_m of each draw.
  Eigen::MatrixXd z;
  ProxyTable proxies;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  DistributionKind kind = DistributionKind::gaussian;
  /// Lognormal draws only: magnitude recomputed from each final slip vector,
  /// and the smallest slip component of each draw.
  std::vector<double> mw;
  std::vector<double> min_slip;
};

/// Draw j uses the deviates NormalStream(seed, stream).draw(j, m), so ensembles at
/// different m with the same seed share leading coefficients.
SampleEnsemble run_ensemble(const EnsembleModel& model, std::size_t n_s, std::size_t m,
                            std::uint64_t seed, const EnsembleOptions& options = {});

struct HazardCurve {
  std::vector<double> levels;
  std::vector<double> probabilities;
};

/// Fraction of `samples` strictly greater than `level`.
double exceedance_probability(std::span<const double> sorted_samples, double level);

/// P(zeta) = #(samples > zeta) / n on `n_levels` uniform levels spanning the sample range.
HazardCurve hazard_curve(std::span<const double> samples, std::size_t n_levels = 200);

/// log of the standard normal density of the first m coefficients.
double z_log_density(std::span<const double> z, std::size_t m);

/// Scott's rule: sigma_hat * n^(-1/(d+4)).
double scott_bandwidth(std::span<const double> samples, int dims);

struct DensityEstimate1D {
  Eigen::VectorXd grid;
  Eigen::VectorXd values;
  double bandwidth = 0.0;

  double integral() const;
};

struct DensityEstimate2D {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::MatrixXd values;  // values(i, j) at (x[i], y[j])
  double bandwidth_x = 0.0;
  double bandwidth_y = 0.0;

  double integral() const;
};

/// Gaussian-kernel density on a uniform grid extending three bandwidths past the sample range.
DensityEstimate1D kde_1d(std::span<const double> samples, std::size_t n_grid = 512);
DensityEstimate2D kde_2d(std::span<const double> x, std::span<const double> y,
                         std::size_t n_grid = 100);

struct ExtremeEvent {
  std::size_t draw_index = 0;
  Eigen::VectorXd z;  // projected onto the requested coordinates
};

/// Draws whose proxies satisfy `predicate`, with z projected onto `coordinates`
/// (1-based mode numbers, e.g. {1, 2} for the z1-z2 plane).
std::vector<ExtremeEvent> filter_extremes(const SampleEnsemble& ensemble,
                                          const std::function<bool(const ProxySet&)>& predicate,
                                          const std::vector<std::size_t>& coordinates = {1, 2});

}  // namespace slipgen
