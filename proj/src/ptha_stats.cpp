#include "slipgen/ptha_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "parallel.hpp"
#include "slipgen/errors.hpp"
#include "slipgen/rng.hpp"

namespace slipgen {

void ProxyTable::resize(std::size_t n) {
  dB_shore.resize(n);
  energy_pj.resize(n);
  eta_max.resize(n);
  depth.resize(n);
}

void ProxyTable::set(std::size_t i, const ProxySet& p) {
  dB_shore[i] = p.dB_shore;
  energy_pj[i] = p.energy_pj;
  eta_max[i] = p.eta_max;
  depth[i] = p.depth;
}

SampleEnsemble run_ensemble(const EnsembleModel& model, std::size_t n_s, std::size_t m,
                            std::uint64_t seed, const EnsembleOptions& options) {
  const KLBasis& basis = model.basis;
  const bool lognormal = basis.kind() == DistributionKind::lognormal;
  if (lognormal && !model.lognormal) {
    throw UnsupportedDistributionError("lognormal ensemble needs taper and magnitude scaling");
  }
  if (basis.size() != model.bank.patches()) throw DomainError("basis and bank sizes differ");
  const ActiveModes act = active_modes(m, true, basis.size());
  const Eigen::Index count = act.count;

  SampleEnsemble ens;
  ens.n_s = n_s;
  ens.m = m;
  ens.seed = seed;
  ens.stream = options.stream;
  ens.kind = basis.kind();
  ens.z.resize(static_cast<Eigen::Index>(n_s), count);
  ens.proxies.resize(n_s);
  if (lognormal) {
    ens.mw.resize(n_s);
    ens.min_slip.resize(n_s);
  }
  if (n_s == 0) return ens;

  const NormalStream stream(seed, options.stream);
  const std::size_t block = std::max<std::size_t>(options.block_size, 1);
  const std::size_t n_blocks = (n_s + block - 1) / block;

  // Gaussian: deformation is affine in z, so only m + 1 fields are needed.
  std::optional<ModeDeformations> modes;
  Eigen::MatrixXd scaled;
  Eigen::RowVectorXd area_rigidity;
  double target_m0 = 0.0;
  if (lognormal) {
    scaled = basis.scaled_modes(act.first, count);
    const auto& ln = *model.lognormal;
    if (ln.taper.size() != basis.size()) throw DomainError("taper size does not match basis");
    if (!(ln.taper.maxCoeff() > 0.0)) throw DegenerateTaperError("taper vanishes on every patch");
    area_rigidity.resize(basis.size());
    for (Eigen::Index i = 0; i < basis.size(); ++i) {
      area_rigidity[i] = ln.fault[static_cast<std::size_t>(i)].area() * ln.moment.rigidity;
    }
    target_m0 = magnitude_to_moment(ln.target_mw);
  } else {
    modes = mode_deformations(model.bank, basis, m);
  }
  const double max_exponent = std::log(std::numeric_limits<double>::max());

  detail::parallel_for(n_blocks, options.workers, [&](std::size_t b) {
    const std::size_t begin = b * block;
    const std::size_t end = std::min(n_s, begin + block);
    const auto width = static_cast<Eigen::Index>(end - begin);
    Eigen::MatrixXd z(count, width);
    for (std::size_t j = begin; j < end; ++j) {
      const auto col = static_cast<Eigen::Index>(j - begin);
      z.col(col) = stream.draw(j, count);
      ens.z.row(static_cast<Eigen::Index>(j)) = z.col(col).transpose();
    }

    Eigen::MatrixXd dz;
    if (!lognormal) {
      dz = modes->columns * z;
      dz.colwise() += modes->mean_dz;
    } else {
      const auto& ln = *model.lognormal;
      Eigen::MatrixXd slip = scaled * z;
      for (Eigen::Index c = 0; c < width; ++c) {
        const double top = slip.col(c).maxCoeff();
        if (!(top < max_exponent)) {
          throw SaturationError(fmt::format("draw {}: lognormal exponent {} overflows exp()",
                                            begin + static_cast<std::size_t>(c), top),
                                top);
        }
        slip.col(c) = ln.taper.cwiseProduct(slip.col(c).array().exp().matrix());
        const double m0 = area_rigidity.dot(slip.col(c));
        slip.col(c) *= target_m0 / m0;
        const std::size_t j = begin + static_cast<std::size_t>(c);
        ens.mw[j] = moment_magnitude(area_rigidity.dot(slip.col(c)));
        ens.min_slip[j] = slip.col(c).minCoeff();
      }
      dz = deform_batch(model.bank, slip);
    }
    for (Eigen::Index c = 0; c < width; ++c) {
      ens.proxies.set(begin + static_cast<std::size_t>(c), compute_proxies(dz.col(c), model.proxy));
    }
  });
  return ens;
}

double exceedance_probability(std::span<const double> sorted_samples, double level) {
  if (sorted_samples.empty()) throw DomainError("no samples");
  const auto above = sorted_samples.end() -
                     std::upper_bound(sorted_samples.begin(), sorted_samples.end(), level);
  return static_cast<double>(above) / static_cast<double>(sorted_samples.size());
}

HazardCurve hazard_curve(std::span<const double> samples, std::size_t n_levels) {
  if (samples.empty()) throw DomainError("hazard curve needs at least one sample");
  if (n_levels < 2) throw DomainError("hazard curve needs at least two levels");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  double lo = sorted.front();
  double hi = sorted.back();
  if (!(hi > lo)) {
    const double pad = 1e-3 * std::max(std::abs(lo), 1.0);
    lo -= pad;
    hi += pad;
  }
  HazardCurve h;
  h.levels.resize(n_levels);
  h.probabilities.resize(n_levels);
  for (std::size_t i = 0; i < n_levels; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n_levels - 1);
    h.levels[i] = i + 1 == n_levels ? hi : lo + t * (hi - lo);
    h.probabilities[i] = exceedance_probability(sorted, h.levels[i]);
  }
  return h;
}

double z_log_density(std::span<const double> z, std::size_t m) {
  if (z.size() < m) throw DomainError(fmt::format("need {} coefficients, got {}", m, z.size()));
  double sq = 0.0;
  for (std::size_t i = 0; i < m; ++i) sq += z[i] * z[i];
  return -0.5 * static_cast<double>(m) * std::log(2.0 * std::numbers::pi) - 0.5 * sq;
}

namespace {

double sample_stddev(std::span<const double> s) {
  const double n = static_cast<double>(s.size());
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : s) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (n - 1.0));
}

void check_samples(std::span<const double> s, std::string_view what) {
  if (s.size() < 2) {
    throw DegenerateSampleError(fmt::format("{}: KDE needs at least 2 samples (got {})", what,
                                            s.size()));
  }
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  if (!(*hi > *lo)) throw DegenerateSampleError(fmt::format("{}: samples have zero spread", what));
}

Eigen::VectorXd uniform_grid(double lo, double hi, std::size_t n) {
  Eigen::VectorXd g(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    g[static_cast<Eigen::Index>(i)] = i + 1 == n ? hi : lo + t * (hi - lo);
  }
  return g;
}

// K(i, s) = phi((grid_i - sample_s) / h) / h.
Eigen::MatrixXd kernel_matrix(const Eigen::VectorXd& grid, std::span<const double> samples,
                              double h) {
  const double norm = 1.0 / (h * std::sqrt(2.0 * std::numbers::pi));
  Eigen::MatrixXd k(grid.size(), static_cast<Eigen::Index>(samples.size()));
  for (Eigen::Index s = 0; s < k.cols(); ++s) {
    const double xs = samples[static_cast<std::size_t>(s)];
    for (Eigen::Index i = 0; i < k.rows(); ++i) {
      const double u = (grid[i] - xs) / h;
      k(i, s) = norm * std::exp(-0.5 * u * u);
    }
  }
  return k;
}

double trapezoid(const Eigen::VectorXd& x, const Eigen::VectorXd& f) {
  double sum = 0.0;
  for (Eigen::Index i = 1; i < x.size(); ++i) sum += 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
  return sum;
}

}  // namespace

double scott_bandwidth(std::span<const double> samples, int dims) {
  check_samples(samples, "bandwidth");
  return sample_stddev(samples) *
         std::pow(static_cast<double>(samples.size()), -1.0 / (static_cast<double>(dims) + 4.0));
}

double DensityEstimate1D::integral() const { return trapezoid(grid, values); }

double DensityEstimate2D::integral() const {
  Eigen::VectorXd inner(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) inner[i] = trapezoid(y, values.row(i).transpose());
  return trapezoid(x, inner);
}

DensityEstimate1D kde_1d(std::span<const double> samples, std::size_t n_grid) {
  check_samples(samples, "kde_1d");
  if (n_grid < 2) throw DomainError("KDE grid needs at least 2 points");
  DensityEstimate1D d;
  d.bandwidth = scott_bandwidth(samples, 1);
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  d.grid = uniform_grid(*lo - 3.0 * d.bandwidth, *hi + 3.0 * d.bandwidth, n_grid);
  const Eigen::MatrixXd k = kernel_matrix(d.grid, samples, d.bandwidth);
  d.values = k.rowwise().sum() / static_cast<double>(samples.size());
  return d;
}

DensityEstimate2D kde_2d(std::span<const double> x, std::span<const double> y,
                         std::size_t n_grid) {
  if (x.size() != y.size()) throw DomainError("kde_2d: x and y sample counts differ");
  check_samples(x, "kde_2d x");
  check_samples(y, "kde_2d y");
  if (n_grid < 2) throw DomainError("KDE grid needs at least 2 points");
  DensityEstimate2D d;
  d.bandwidth_x = scott_bandwidth(x, 2);
  d.bandwidth_y = scott_bandwidth(y, 2);
  const auto [xlo, xhi] = std::minmax_element(x.begin(), x.end());
  const auto [ylo, yhi] = std::minmax_element(y.begin(), y.end());
  d.x = uniform_grid(*xlo - 3.0 * d.bandwidth_x, *xhi + 3.0 * d.bandwidth_x, n_grid);
  d.y = uniform_grid(*ylo - 3.0 * d.bandwidth_y, *yhi + 3.0 * d.bandwidth_y, n_grid);
  // Product kernel: sum_s Kx(i, s) Ky(j, s).
  const Eigen::MatrixXd kx = kernel_matrix(d.x, x, d.bandwidth_x);
  const Eigen::MatrixXd ky = kernel_matrix(d.y, y, d.bandwidth_y);
  d.values = kx * ky.transpose() / static_cast<double>(x.size());
  return d;
}

std::vector<ExtremeEvent> filter_extremes(const SampleEnsemble& ensemble,
                                          const std::function<bool(const ProxySet&)>& predicate,
                                          const std::vector<std::size_t>& coordinates) {
  for (std::size_t c : coordinates) {
    if (c < 1 || c > static_cast<std::size_t>(ensemble.z.cols())) {
      throw DomainError(fmt::format("coordinate z{} is not an active mode (m = {})", c,
                                    ensemble.z.cols()));
    }
  }
  std::vector<ExtremeEvent> out;
  for (std::size_t j = 0; j < ensemble.n_s; ++j) {
    if (!predicate(ensemble.proxies.row(j))) continue;
    ExtremeEvent e;
    e.draw_index = j;
    e.z.resize(static_cast<Eigen::Index>(coordinates.size()));
    for (std::size_t c = 0; c < coordinates.size(); ++c) {
      e.z[static_cast<Eigen::Index>(c)] =
          ensemble.z(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(coordinates[c] - 1));
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace slipgen
