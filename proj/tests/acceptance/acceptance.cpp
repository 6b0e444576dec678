// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "fixtures.hpp"
#include "point_source.hpp"
#include "slipgen/cli/commands.hpp"
#include "slipgen/rng.hpp"

using namespace slipgen;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

const cli::Pipeline& one_d() {
  static const cli::Pipeline p =
      fixture::shipped_pipeline("paper_1d.json", fixture::scratch("acc_1d"), true);
  return p;
}

Outcome magnitude() {
  const Eigen::VectorXd ten = Eigen::VectorXd::Constant(200, 10.0);
  const double a = moment_magnitude(seismic_moment(build_1d_fault(100e3, 13.0, 5e3, 200, 1000e3), ten).value);
  const double b = moment_magnitude(seismic_moment(build_1d_fault(100e3, 13.0, 5e3, 200, 500e3), ten).value);
  return {std::abs(a - 9.0) <= 0.01 && std::abs(b - 8.8) <= 0.01,
          fmt::format("Mw(1000 km) = {:.4f}, Mw(500 km) = {:.4f}", a, b)};
}

Outcome eigen_decay() {
  const auto& lambda = one_d().basis.eigenvalues();
  double lo = 1e300, hi = 0.0;
  for (Eigen::Index k = 5; k <= 50; ++k) {
    const double v = lambda[k] * static_cast<double>(k * k);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {hi / lo < 3.0, fmt::format("lambda_k k^2 on [5, 50]: min {:.1f}, max {:.1f}, ratio {:.3f}", lo, hi, hi / lo)};
}

Outcome mode0_sign() {
  const auto csz = fixture::shipped_pipeline("paper_csz_south.json", fixture::scratch("acc_mode0"), false);
  const Eigen::VectorXd a = one_d().basis.eigenvectors().col(0);
  const Eigen::VectorXd b = csz.basis.eigenvectors().col(0);
  const bool ok_a = a.minCoeff() > 0.0 || a.maxCoeff() < 0.0;
  const bool ok_b = b.minCoeff() > 0.0 || b.maxCoeff() < 0.0;
  return {ok_a && ok_b, fmt::format("1-D v0 in [{:.4g}, {:.4g}]; 2-D v0 in [{:.4g}, {:.4g}]",
                                    a.minCoeff(), a.maxCoeff(), b.minCoeff(), b.maxCoeff())};
}

Outcome covariance_reproduction() {
  const auto& p = one_d();
  const auto& c = p.distribution.covariance;
  const Eigen::Index n = c.rows();
  const int draws = 20000;
  const NormalStream rng(20170603);
  Eigen::MatrixXd s(n, draws);
  for (int j = 0; j < draws; ++j) {
    s.col(j) = realize_gaussian(p.basis, rng.draw(static_cast<std::uint64_t>(j), n),
                                static_cast<std::size_t>(n), false).slip;
  }
  const Eigen::VectorXd mean = s.rowwise().mean();
  s.colwise() -= mean;
  const Eigen::MatrixXd cov = s * s.transpose() / (draws - 1);
  double diag_err = 0.0, off_sq = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    diag_err = std::max(diag_err, std::abs(cov(i, i) / c(i, i) - 1.0));
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k != i) off_sq += std::pow(cov(i, k) - c(i, k), 2);
    }
  }
  const double off_rms = std::sqrt(off_sq / static_cast<double>(n * (n - 1)));
  const double mean_diag = c.diagonal().mean();
  return {diag_err < 0.05 && off_rms < 0.05 * mean_diag,
          fmt::format("max diag rel err {:.4f}, off-diag RMS {:.4f} ({:.2f}% of mean diag)", diag_err,
                      off_rms, 100.0 * off_rms / mean_diag)};
}

Outcome shore_density_check() {
  const auto& p = one_d();
  const SampleEnsemble e = run_ensemble(p.ensemble_model(), 20000, 20, p.config.run.seed);
  const ShoreDensity d20 = shore_density(*p.bank, p.basis, 20, *p.proxy);
  const ShoreDensity d3 = shore_density(*p.bank, p.basis, 3, *p.proxy);
  const double m = mean_of(e.proxies.dB_shore), sd = std_of(e.proxies.dB_shore);
  const double mean_rel = std::abs(m - d20.mean) / std::abs(d20.mean);
  const double std_rel = std::abs(sd - d20.stddev()) / d20.stddev();
  const double var_rel = std::abs(d3.variance - d20.variance) / d20.variance;
  return {mean_rel < 0.02 && std_rel < 0.02 && var_rel < 0.10,
          fmt::format("mean {:.5f} vs {:.5f} ({:.2f}%), std {:.5f} vs {:.5f} ({:.2f}%), var(3)/var(20) - 1 = {:.2f}%",
                      m, d20.mean, 100 * mean_rel, sd, d20.stddev(), 100 * std_rel, 100 * var_rel)};
}

Outcome hazard_agreement() {
  const auto& p = one_d();
  std::vector<std::vector<double>> depth;
  for (std::size_t m : {1, 3, 20}) {
    auto d = run_ensemble(p.ensemble_model(), 20000, m, p.config.run.seed).proxies.depth;
    std::sort(d.begin(), d.end());
    depth.push_back(std::move(d));
  }
  const double lo = std::min({depth[0].front(), depth[1].front(), depth[2].front()});
  const double hi = std::max({depth[0].back(), depth[1].back(), depth[2].back()});
  double sup3 = 0.0, sup1 = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double level = lo + (hi - lo) * i / 2000.0;
    const double p20 = exceedance_probability(depth[2], level);
    if (p20 < 0.05 || p20 > 0.95) continue;
    sup3 = std::max(sup3, std::abs(exceedance_probability(depth[1], level) - p20));
    sup1 = std::max(sup1, std::abs(exceedance_probability(depth[0], level) - p20));
  }
  return {sup3 < 0.02 && sup1 > 0.02,
          fmt::format("sup |P3 - P20| = {:.4f}, sup |P1 - P20| = {:.4f} on P20 in [0.05, 0.95]", sup3, sup1)};
}

Outcome okada_oracle() {
  const auto csz = fixture::shipped_pipeline("paper_csz_south.json", fixture::scratch("acc_okada"), true);
  const auto& bank = *csz.bank;
  const DeformGrid& grid = bank.grid();
  double worst = 0.0;
  std::size_t checked = 0;
  for (std::size_t j = 0; j < csz.fault.size(); j += 27) {
    const SubfaultPatch& sp = csz.fault[j];
    const double reach = sp.length + 0.5 * std::max(sp.length, sp.width);
    for (std::size_t i = j % 97; i < grid.size(); i += 409) {
      const Point2 at = grid[i];
      if (std::hypot(at.x - sp.x, at.y - sp.y) <= reach) continue;
      const double quad = oracle::patch_uz_quadrature(sp.x, sp.y, sp.depth, sp.strike, sp.dip, sp.rake,
                                                      sp.length, sp.width, 1.0, at.x, at.y,
                                                      csz.config.elastic.medium_constant(), 6);
      const double got = bank.columns()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      worst = std::max(worst, std::abs(got - quad) / std::abs(quad));
      ++checked;
    }
  }
  const Eigen::VectorXd s = csz.distribution.mean;
  const Eigen::VectorXd a = deform(bank, s).dz;
  const Eigen::VectorXd b = deform(bank, 2.5 * s).dz;
  const Eigen::VectorXd c = deform(bank, s + 0.5 * Eigen::VectorXd::Ones(s.size())).dz;
  const Eigen::VectorXd u = deform(bank, Eigen::VectorXd::Ones(s.size())).dz;
  const double lin = std::max((b - 2.5 * a).cwiseAbs().maxCoeff() / (2.5 * a).cwiseAbs().maxCoeff(),
                              (c - a - 0.5 * u).cwiseAbs().maxCoeff() / c.cwiseAbs().maxCoeff());
  return {worst < 1e-3 && lin < 1e-12 && checked > 100,
          fmt::format("{} off-fault points, max rel err vs quadrature {:.2e}; linearity rel err {:.1e}",
                      checked, worst, lin)};
}

Outcome smoothing() {
  const auto& p = one_d();
  const NormalStream rng(p.config.run.seed);
  std::vector<double> slip_rel, dz_rel;
  for (std::uint64_t d = 0; d < 100; ++d) {
    const Eigen::VectorXd draws = rng.draw(d, 20);
    const Eigen::VectorXd s3 = realize_gaussian(p.basis, mode_coefficients(draws, 3, true, 200), 3).slip;
    const Eigen::VectorXd s20 = realize_gaussian(p.basis, mode_coefficients(draws, 20, true, 200), 20).slip;
    const Eigen::VectorXd d3 = deform(*p.bank, s3).dz, d20 = deform(*p.bank, s20).dz;
    slip_rel.push_back((s3 - s20).norm() / s20.norm());
    dz_rel.push_back((d3 - d20).norm() / d20.norm());
  }
  const double ms = median(slip_rel), md = median(dz_rel);
  return {md < ms, fmt::format("median rel L2 difference: deformation {:.4f}, slip {:.4f}", md, ms)};
}

Outcome lognormal() {
  const auto csz = fixture::shipped_pipeline("paper_csz_south.json", fixture::scratch("acc_logn"), true);
  const SampleEnsemble e = run_ensemble(csz.ensemble_model(), 20000, 7, csz.config.run.seed);
  double mw_err = 0.0, min_slip = 1e300;
  for (std::size_t j = 0; j < e.n_s; ++j) {
    mw_err = std::max(mw_err, std::abs(e.mw[j] - csz.config.target_mw));
    min_slip = std::min(min_slip, e.min_slip[j]);
  }
  const auto& g = *csz.distribution.gaussian;
  const GaussianSpace back = lognormal_moments(g.mean, g.covariance);
  const double mu_err = ((back.mean - csz.distribution.mean).array().abs() / csz.distribution.mean.array()).maxCoeff();
  const double c_err = (back.covariance - csz.distribution.covariance).cwiseAbs().maxCoeff() /
                       csz.distribution.covariance.cwiseAbs().maxCoeff();
  return {min_slip > 0.0 && mw_err < 1e-10 && mu_err < 1e-10 && c_err < 1e-10,
          fmt::format("min slip {:.3f} m, max |Mw - 8.8| {:.1e}, round trip rel err mean {:.1e}, cov {:.1e}",
                      min_slip, mw_err, mu_err, c_err)};
}

Outcome runtime_2d() {
  const auto dir = fixture::scratch("acc_runtime");
  cli::RunConfig c = fixture::shipped_config("paper_csz_south.json", dir);
  c.run.truncations = {7};
  c.run.n_samples = 20000;
  const auto t0 = std::chrono::steady_clock::now();
  const cli::CommandResult r = cli::cmd_ensemble(c, {});
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool kdes = fs::exists(dir / "kde_D_m7.csv") && fs::exists(dir / "kde2d_eta_max_E_PJ_m7.csv");
  return {r.exit_code == 0 && kdes && sec < 600.0,
          fmt::format("cmd_ensemble 2-D, n_s = 20000, m = 7, bank built from scratch: {:.1f} s", sec)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  using Command = std::function<cli::CommandResult(cli::RunConfig, const cli::CommandOptions&)>;
  const std::vector<std::pair<std::string, Command>> commands = {
      {"modes", cli::cmd_modes}, {"sample", cli::cmd_sample},
      {"ensemble", cli::cmd_ensemble}, {"bank", cli::cmd_bank}};
  std::size_t compared = 0;
  std::vector<std::string> diffs;
  for (const auto& [name, run] : commands) {
    std::vector<fs::path> dirs;
    for (unsigned workers : {1u, 3u, 3u}) {
      const auto dir = fixture::scratch(fmt::format("acc_det_{}_{}", name, dirs.size()));
      cli::RunConfig c = fixture::shipped_config("paper_1d.json", dir);
      c.run.n_samples = 2000;
      run(c, {std::nullopt, std::nullopt, workers, nullptr});
      dirs.push_back(dir);
    }
    std::set<std::string> names;
    for (const auto& e : fs::directory_iterator(dirs[0])) {
      if (e.path().extension() == ".csv") names.insert(e.path().filename().string());
    }
    for (const auto& f : names) {
      const std::string ref = slurp(dirs[0] / f);
      for (std::size_t k = 1; k < dirs.size(); ++k) {
        ++compared;
        if (slurp(dirs[k] / f) != ref) diffs.push_back(name + "/" + f);
      }
    }
  }
  return {diffs.empty() && compared > 0,
          fmt::format("{} CSV comparisons across workers 1/3 and re-runs, {} differ{}", compared,
                      diffs.size(), diffs.empty() ? "" : " (first: " + diffs.front() + ")")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"magnitude formula", magnitude},
      {"eigenvalue decay", eigen_decay},
      {"mode-0 sign uniformity", mode0_sign},
      {"covariance reproduction", covariance_reproduction},
      {"exact shore density", shore_density_check},
      {"hazard-curve truncation agreement", hazard_agreement},
      {"Okada oracle and linearity", okada_oracle},
      {"deformation smoothing", smoothing},
      {"lognormal positivity and moment", lognormal},
      {"2-D end-to-end runtime", runtime_2d},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    fmt::print("criterion {:>2} {}: {} ({}) [{:.1f} s]\n", i + 1, o.pass ? "PASS" : "FAIL",
               criteria[i].first, o.detail, sec);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
