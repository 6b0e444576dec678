#include "slipgen/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <numeric>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "output.hpp"
#include "slipgen/cli/pipeline.hpp"
#include "slipgen/errors.hpp"
#include "slipgen/rng.hpp"

namespace slipgen::cli {
namespace fs = std::filesystem;

namespace {

class Session {
 public:
  Session(RunConfig& config, const CommandOptions& options) : options_(options) {
    if (options.out) config.output_dir = *options.out;
    if (options.seed) config.run.seed = *options.seed;
    out_ = config.output_dir;
    try {
      fs::create_directories(out_ / "plots");
    } catch (const fs::filesystem_error& e) {
      throw IoError(fmt::format("cannot create output directory '{}': {}", out_.string(),
                                e.what()));
    }
  }

  fs::path csv(const std::string& name) {
    result.files.push_back(out_ / name);
    return result.files.back();
  }
  fs::path plot(const std::string& name) { return out_ / "plots" / name; }

  template <class... Args>
  void log(fmt::format_string<Args...> f, Args&&... args) {
    if (options_.log) fmt::print(*options_.log, "{}\n", fmt::format(f, std::forward<Args>(args)...));
  }

  void error(std::string msg) {
    log("error: {}", msg);
    result.errors.push_back(std::move(msg));
  }

  void summary() {
    log("wall time:");
    for (const auto& [name, sec] : timer.stages()) log("  {:<28} {:9.3f} s", name, sec);
    log("  {:<28} {:9.3f} s", "total", timer.total());
    log("{} files written to {}", result.files.size(), out_.string());
  }

  CommandResult finish() {
    summary();
    if (!result.errors.empty()) result.exit_code = 2;
    return std::move(result);
  }

  StageTimer timer;
  CommandResult result;
  const CommandOptions& options() const { return options_; }

 private:
  const CommandOptions& options_;
  fs::path out_;
};

bool is_line_fault(const Pipeline& p) { return p.config.builtin_fault.has_value(); }

// Patch footprint for the cell plots.
std::pair<double, double> cell_size(const FaultModel& fault) {
  double w = 0.0, h = 0.0;
  for (const auto& patch : fault.patches()) {
    w += patch.width * std::cos(patch.dip * std::numbers::pi / 180.0);
    h += patch.length;
  }
  const double n = static_cast<double>(fault.size());
  return {w / n, h / n};
}

void write_patch_field(Session& s, const Pipeline& p, const std::string& stem,
                       const std::string& value_name, const Eigen::VectorXd& values,
                       const std::string& title) {
  {
    CsvWriter w(s.csv(stem + ".csv"));
    w.header({"patch", "x_m", "y_m", "depth_m", value_name});
    for (std::size_t i = 0; i < p.fault.size(); ++i) {
      const auto& patch = p.fault[i];
      w << static_cast<std::uint64_t>(i) << patch.x << patch.y << patch.depth
        << values[static_cast<Eigen::Index>(i)];
      w.end_row();
    }
    w.close();
  }
  std::vector<double> xs, ys, vs(values.data(), values.data() + values.size());
  for (const auto& patch : p.fault.patches()) {
    xs.push_back(patch.x);
    ys.push_back(patch.y);
  }
  if (is_line_fault(p)) {
    write_line_plot(s.plot(stem + ".svg"), title, "x (m)", value_name, {{"", xs, vs}});
  } else {
    const auto [cw, ch] = cell_size(p.fault);
    write_cell_plot(s.plot(stem + ".svg"), title, xs, ys, vs, cw, ch);
  }
}

void write_deformation(Session& s, const DeformGrid& grid, const std::string& stem,
                       const Eigen::VectorXd& dz, const std::string& title) {
  {
    CsvWriter w(s.csv(stem + ".csv"));
    if (grid.is_transect()) {
      w.header({"x_m", "dz_m"});
    } else {
      w.header({"x_m", "y_m", "dz_m"});
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      w << grid[i].x;
      if (!grid.is_transect()) w << grid[i].y;
      w << dz[static_cast<Eigen::Index>(i)];
      w.end_row();
    }
    w.close();
  }
  std::vector<double> xs, ys, vs(dz.data(), dz.data() + dz.size());
  for (const auto& pt : grid.points()) {
    xs.push_back(pt.x);
    ys.push_back(pt.y);
  }
  if (grid.is_transect()) {
    write_line_plot(s.plot(stem + ".svg"), title, "x (m)", "dz (m)", {{"", xs, vs}});
  } else {
    write_cell_plot(s.plot(stem + ".svg"), title, xs, ys, vs, grid.dx(), grid.dy());
  }
}

const std::vector<double>& proxy_values(const ProxyTable& t, ProxyField f) {
  switch (f) {
    case ProxyField::dB_shore: return t.dB_shore;
    case ProxyField::energy_pj: return t.energy_pj;
    case ProxyField::eta_max: return t.eta_max;
    case ProxyField::depth: return t.depth;
  }
  return t.depth;
}

double proxy_value(const ProxySet& p, ProxyField f) {
  switch (f) {
    case ProxyField::dB_shore: return p.dB_shore;
    case ProxyField::energy_pj: return p.energy_pj;
    case ProxyField::eta_max: return p.eta_max;
    case ProxyField::depth: return p.depth;
  }
  return p.depth;
}

void write_proxy_table(Session& s, const SampleEnsemble& e) {
  CsvWriter w(s.csv(fmt::format("proxies_m{}.csv", e.m)));
  std::vector<std::string> head{"draw_index"};
  for (Eigen::Index k = 0; k < e.z.cols(); ++k) head.push_back(fmt::format("z_{}", k + 1));
  for (auto h : {"dB_shore", "E_PJ", "eta_max", "D"}) head.emplace_back(h);
  w.header(head);
  for (std::size_t j = 0; j < e.n_s; ++j) {
    w << static_cast<std::uint64_t>(j);
    for (Eigen::Index k = 0; k < e.z.cols(); ++k) w << e.z(static_cast<Eigen::Index>(j), k);
    w << e.proxies.dB_shore[j] << e.proxies.energy_pj[j] << e.proxies.eta_max[j]
      << e.proxies.depth[j];
    w.end_row();
  }
  w.close();
}

void write_density_1d(Session& s, const std::string& stem, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& f) {
  CsvWriter w(s.csv(stem + ".csv"));
  w.header({"x", "density"});
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    w << x[i] << f[i];
    w.end_row();
  }
  w.close();
}

void write_density_2d(Session& s, const std::string& stem, const DensityEstimate2D& d) {
  CsvWriter w(s.csv(stem + ".csv"));
  w.header({"x", "y", "density"});
  for (Eigen::Index i = 0; i < d.x.size(); ++i) {
    for (Eigen::Index j = 0; j < d.y.size(); ++j) {
      w << d.x[i] << d.y[j] << d.values(i, j);
      w.end_row();
    }
  }
  w.close();
}

std::vector<double> to_vector(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::string threshold_tag(double v) {
  std::string t = fmt::format("{}", v);
  std::replace(t.begin(), t.end(), '-', 'n');
  return t;
}

}  // namespace

CommandResult cmd_modes(RunConfig config, const CommandOptions& options) {
  Session s(config, options);
  Pipeline p = prepare(config, s.timer);
  s.timer.start("write");
  const auto& lambda = p.basis.eigenvalues();
  {
    CsvWriter w(s.csv("eigenvalues.csv"));
    w.header({"k", "lambda"});
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
      w << static_cast<std::uint64_t>(k) << lambda[k];
      w.end_row();
    }
    w.close();
  }
  std::vector<double> ks, logl;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    if (!(lambda[k] > 0.0)) continue;
    ks.push_back(static_cast<double>(k));
    logl.push_back(std::log10(lambda[k]));
  }
  write_line_plot(s.plot("eigenvalues.svg"), "eigenvalue spectrum", "k", "log10 lambda_k",
                  {{"", ks, logl}});
  const auto n = std::min<std::size_t>(config.run.modes, p.fault.size());
  for (std::size_t k = 0; k < n; ++k) {
    write_patch_field(s, p, fmt::format("mode_{}", k), "v",
                      p.basis.eigenvectors().col(static_cast<Eigen::Index>(k)),
                      fmt::format("mode {}", k));
  }
  s.timer.stop();
  return s.finish();
}

CommandResult cmd_sample(RunConfig config, const CommandOptions& options) {
  Session s(config, options);
  if (config.run.sample_count == 0) {
    s.log("sample_count is 0; nothing to do");
    return s.finish();
  }
  Pipeline p = prepare(config, s.timer);
  attach_bank(p, options.workers, s.timer);
  const auto n = static_cast<Eigen::Index>(p.fault.size());
  Eigen::Index widest = 0;
  for (std::size_t m : config.run.truncations) widest = std::max(widest, active_modes(m, true, n).count);

  s.timer.start("realizations");
  const NormalStream stream(config.run.seed, 0);
  for (std::size_t d = 0; d < config.run.sample_count; ++d) {
    const Eigen::VectorXd draws = stream.draw(d, widest);
    for (std::size_t m : config.run.truncations) {
      const Eigen::VectorXd z = mode_coefficients(draws, m, true, n);
      const Realization r =
          p.distribution.kind == DistributionKind::lognormal
              ? realize_lognormal(p.basis, z, m, p.distribution.taper, p.fault, config.target_mw,
                                  config.moment)
              : realize_gaussian(p.basis, z, m);
      const std::string tag = fmt::format("d{}_m{}", d, m);
      write_patch_field(s, p, "slip_" + tag, "slip_m", r.slip,
                        fmt::format("slip, draw {}, {} terms", d, m));
      write_deformation(s, *p.grid, "deform_" + tag, deform(*p.bank, r.slip).dz,
                        fmt::format("seafloor deformation, draw {}, {} terms", d, m));
    }
  }
  s.timer.stop();
  return s.finish();
}

CommandResult cmd_ensemble(RunConfig config, const CommandOptions& options) {
  Session s(config, options);
  Pipeline p = prepare(config, s.timer);
  attach_bank(p, options.workers, s.timer);
  const EnsembleModel model = p.ensemble_model();
  const RunSpec& run = config.run;
  const bool gaussian = p.distribution.kind == DistributionKind::gaussian;

  std::vector<Series> hazard_series;
  std::map<ProxyField, std::vector<Series>> marginal_series;

  CsvWriter summary(s.csv("ensemble_summary.csv"));
  summary.header({"m", "n_samples", "seed", "stream", "dB_shore_mean", "dB_shore_std",
                  "dB_shore_mean_exact", "dB_shore_std_exact"});

  for (std::size_t m : run.truncations) {
    const std::uint64_t stream_id = run.independent_streams ? m : 0;
    s.timer.start(fmt::format("ensemble m={}", m));
    const SampleEnsemble e =
        run_ensemble(model, run.n_samples, m, run.seed,
                     {stream_id, options.workers, run.block_size});
    s.timer.stop();

    s.timer.start(fmt::format("statistics m={}", m));
    write_proxy_table(s, e);
    if (!gaussian) {
      CsvWriter w(s.csv(fmt::format("lognormal_check_m{}.csv", m)));
      w.header({"draw_index", "Mw", "min_slip_m"});
      for (std::size_t j = 0; j < e.n_s; ++j) {
        w << static_cast<std::uint64_t>(j) << e.mw[j] << e.min_slip[j];
        w.end_row();
      }
      w.close();
    }

    const HazardCurve h = hazard_curve(e.proxies.depth, run.hazard_levels);
    {
      CsvWriter w(s.csv(fmt::format("hazard_D_m{}.csv", m)));
      w.header({"level_m", "prob"});
      for (std::size_t i = 0; i < h.levels.size(); ++i) {
        w << h.levels[i] << h.probabilities[i];
        w.end_row();
      }
      w.close();
    }
    hazard_series.push_back({fmt::format("{} terms", m), h.levels, h.probabilities});

    std::optional<ShoreDensity> exact;
    if (gaussian) exact = shore_density(*p.bank, p.basis, m, *p.proxy);

    for (ProxyField f : {ProxyField::dB_shore, ProxyField::energy_pj, ProxyField::eta_max,
                         ProxyField::depth}) {
      try {
        const DensityEstimate1D d = kde_1d(proxy_values(e.proxies, f), run.kde_grid_1d);
        write_density_1d(s, fmt::format("kde_{}_m{}", to_string(f), m), d.grid, d.values);
        marginal_series[f].push_back({fmt::format("{} terms", m), to_vector(d.grid), to_vector(d.values)});
      } catch (const DomainError& err) {
        s.error(fmt::format("kde {} m={}: {}", to_string(f), m, err.what()));
      }
    }
    for (ProxyField second : {ProxyField::energy_pj, ProxyField::dB_shore}) {
      const std::string stem = fmt::format("kde2d_eta_max_{}_m{}", to_string(second), m);
      try {
        const DensityEstimate2D d =
            kde_2d(e.proxies.eta_max, proxy_values(e.proxies, second), run.kde_grid_2d);
        write_density_2d(s, stem, d);
        write_heatmap(s.plot(stem + ".svg"), fmt::format("joint density, {} terms", m), "eta_max (m)",
                      to_string(second), d.x, d.y, d.values);
      } catch (const DomainError& err) {
        s.error(fmt::format("kde2d eta_max/{} m={}: {}", to_string(second), m, err.what()));
      }
    }

    if (exact && exact->variance > 0.0) {
      const double sd = exact->stddev();
      Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(
          static_cast<Eigen::Index>(run.kde_grid_1d), exact->mean - 6.0 * sd, exact->mean + 6.0 * sd);
      Eigen::VectorXd f(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) f[i] = exact->pdf(x[i]);
      write_density_1d(s, fmt::format("shore_density_m{}", m), x, f);
      std::vector<Series> overlay{{"exact", to_vector(x), to_vector(f)}};
      for (const auto& ser : marginal_series[ProxyField::dB_shore]) {
        if (ser.name == fmt::format("{} terms", m)) overlay.push_back({"KDE", ser.x, ser.y});
      }
      write_line_plot(s.plot(fmt::format("shore_density_m{}.svg", m)),
                      fmt::format("shore displacement density, {} terms", m), "dB_shore (m)",
                      "density", overlay);
    }

    const std::vector<std::size_t> coords =
        e.z.cols() >= 2 ? std::vector<std::size_t>{1, 2} : std::vector<std::size_t>{1};
    for (const ExtremeFilter& flt : run.extremes) {
      const auto events = filter_extremes(
          e, [&](const ProxySet& ps) { return proxy_value(ps, flt.proxy) > flt.above; }, coords);
      CsvWriter w(s.csv(fmt::format("extremes_{}_gt_{}_m{}.csv", to_string(flt.proxy),
                                    threshold_tag(flt.above), m)));
      std::vector<std::string> head{"draw_index"};
      for (std::size_t c : coords) head.push_back(fmt::format("z{}", c));
      head.emplace_back("proxy_value");
      w.header(head);
      for (const auto& ev : events) {
        w << static_cast<std::uint64_t>(ev.draw_index);
        for (Eigen::Index c = 0; c < ev.z.size(); ++c) w << ev.z[c];
        w << proxy_value(e.proxies.row(ev.draw_index), flt.proxy);
        w.end_row();
      }
      w.close();
      s.log("m={}: {} draws with {} > {}", m, events.size(), to_string(flt.proxy), flt.above);
    }

    summary << static_cast<std::uint64_t>(m) << static_cast<std::uint64_t>(e.n_s)
            << e.seed << e.stream << mean_of(e.proxies.dB_shore) << stddev_of(e.proxies.dB_shore)
            << (exact ? exact->mean : std::nan("")) << (exact ? exact->stddev() : std::nan(""));
    summary.end_row();
    s.timer.stop();
  }
  summary.close();

  write_line_plot(s.plot("hazard_D.svg"), "hazard curve for D", "zeta (m)", "P(D > zeta)",
                  hazard_series);
  for (const auto& [f, series] : marginal_series) {
    write_line_plot(s.plot(fmt::format("kde_{}.svg", to_string(f))),
                    fmt::format("density of {}", to_string(f)), std::string(to_string(f)),
                    "density", series);
  }
  return s.finish();
}

CommandResult cmd_bank(RunConfig config, const CommandOptions& options) {
  Session s(config, options);
  Pipeline p = prepare(config, s.timer);
  attach_bank(p, options.workers, s.timer);
  s.log("bank {} ({} points x {} patches, {})", config.bank_cache_path().string(),
        p.bank->points(), p.bank->patches(), p.bank_from_cache ? "cache hit" : "built");
  s.timer.start("write");
  write_deformation(s, *p.grid, "mean_deform", deform(*p.bank, p.distribution.mean).dz,
                    "deformation of the mean slip");
  s.timer.stop();
  return s.finish();
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e)) return 3;
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return 3;
  if (dynamic_cast<const DomainError*>(&e)) return 2;
  if (dynamic_cast<const NumericalError*>(&e)) return 2;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const FormatError*>(&e) ||
      dynamic_cast<const GeometryError*>(&e)) {
    return 1;
  }
  return 2;
}

int run_command(std::string_view command, const fs::path& config_path,
                const CommandOptions& options, std::ostream& err) {
  try {
    RunConfig config = load_config(config_path);
    CommandResult r;
    if (command == "modes") {
      r = cmd_modes(std::move(config), options);
    } else if (command == "sample") {
      r = cmd_sample(std::move(config), options);
    } else if (command == "ensemble") {
      r = cmd_ensemble(std::move(config), options);
    } else if (command == "bank") {
      r = cmd_bank(std::move(config), options);
    } else {
      throw ConfigError(fmt::format("unknown command '{}'", command));
    }
    for (const auto& e : r.errors) fmt::print(err, "slipgen: {}\n", e);
    return r.exit_code;
  } catch (const std::exception& e) {
    fmt::print(err, "slipgen: {}\n", e.what());
    return exit_code_for(e);
  }
}

}  // namespace slipgen::cli
