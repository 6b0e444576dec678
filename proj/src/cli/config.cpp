#include "slipgen/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "slipgen/errors.hpp"

namespace slipgen::cli {
namespace {

using nlohmann::json;

// A JSON object together with its dotted path, for error messages.
class Node {
 public:
  Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {
    if (!value_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(std::string_view msg) const {
    throw ConfigError(fmt::format("{}: {}", path_.empty() ? "<root>" : path_, msg));
  }
  [[noreturn]] void fail(std::string_view key, std::string_view msg) const {
    throw ConfigError(fmt::format("{}: {}", child_path(key), msg));
  }

  std::string child_path(std::string_view key) const {
    return path_.empty() ? std::string(key) : fmt::format("{}.{}", path_, key);
  }

  bool has(std::string_view key) const { return value_.contains(key); }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    const std::set<std::string_view> allowed(keys);
    for (const auto& [k, v] : value_.items()) {
      if (!allowed.contains(k)) fail(k, "unknown field");
    }
  }

  Node object(std::string_view key) const {
    if (!has(key)) fail(key, "missing");
    const json& v = value_.at(std::string(key));
    if (!v.is_object()) fail(key, "expected an object");
    return Node(v, child_path(key));
  }

  const json& raw(std::string_view key) const {
    if (!has(key)) fail(key, "missing");
    return value_.at(std::string(key));
  }

  double number(std::string_view key) const {
    const json& v = raw(key);
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }
  double number(std::string_view key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }
  double positive(std::string_view key) const {
    const double v = number(key);
    if (!(v > 0.0)) fail(key, fmt::format("must be positive (got {})", v));
    return v;
  }
  double positive(std::string_view key, double fallback) const {
    return has(key) ? positive(key) : fallback;
  }

  std::uint64_t count(std::string_view key) const {
    const json& v = raw(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(key, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }
  std::uint64_t count(std::string_view key, std::uint64_t fallback) const {
    return has(key) ? count(key) : fallback;
  }

  std::string string(std::string_view key) const {
    const json& v = raw(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  bool boolean(std::string_view key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) fail(key, "expected true or false");
    return v.get<bool>();
  }

  const std::string& path() const { return path_; }

 private:
  const json& value_;
  std::string path_;
};

void parse_fault(const Node& root, const std::filesystem::path& base, RunConfig& cfg) {
  const Node f = root.object("fault");
  f.allow_only({"builtin_1d", "file", "depth_reference", "origin", "label"});
  if (f.has("builtin_1d") == f.has("file")) f.fail("give exactly one of builtin_1d or file");
  if (f.has("builtin_1d")) {
    const Node b = f.object("builtin_1d");
    b.allow_only({"width_m", "dip_deg", "top_depth_m", "n_patches", "strike_length_m"});
    Builtin1DFault out;
    out.width = b.positive("width_m", out.width);
    out.dip = b.number("dip_deg", out.dip);
    if (!(out.dip > 0.0 && out.dip <= 90.0)) b.fail("dip_deg", "must lie in (0, 90]");
    out.top_depth = b.positive("top_depth_m", out.top_depth);
    out.n_patches = b.count("n_patches", out.n_patches);
    if (out.n_patches == 0) b.fail("n_patches", "must be at least 1");
    out.strike_length = b.positive("strike_length_m", out.strike_length);
    cfg.builtin_fault = out;
    return;
  }
  FileFault out;
  out.path = base / f.string("file");
  if (!std::filesystem::exists(out.path)) {
    f.fail("file", fmt::format("no such file '{}'", out.path.string()));
  }
  if (f.has("depth_reference")) {
    const std::string ref = f.string("depth_reference");
    if (ref == "centroid") {
      out.options.depth_reference = DepthReference::centroid;
    } else if (ref == "top_edge") {
      out.options.depth_reference = DepthReference::top_edge;
    } else {
      f.fail("depth_reference", fmt::format("expected centroid or top_edge, got '{}'", ref));
    }
  }
  if (f.has("origin")) {
    const Node o = f.object("origin");
    o.allow_only({"lon", "lat"});
    out.options.origin = GeoOrigin{o.number("lon"), o.number("lat")};
  }
  out.options.label = f.has("label") ? f.string("label") : out.path.stem().string();
  cfg.file_fault = std::move(out);
}

void parse_physics(const Node& root, RunConfig& cfg) {
  const Node t = root.object("taper");
  t.allow_only({"d_max_m", "steepness", "reference_depth_m"});
  cfg.taper.d_max = t.positive("d_max_m");
  cfg.taper.steepness = t.positive("steepness", cfg.taper.steepness);
  cfg.taper.reference_depth = t.number("reference_depth_m", 0.0);

  const Node a = root.object("acf");
  a.allow_only({"kind", "r0_m", "r_strike_m", "r_dip_m"});
  AcfKind kind{};
  try {
    kind = parse_acf_kind(a.string("kind"));
  } catch (const Error& e) {
    a.fail("kind", e.what());
  }
  if (a.has("r0_m")) {
    if (a.has("r_strike_m") || a.has("r_dip_m")) a.fail("give r0_m or r_strike_m/r_dip_m, not both");
    cfg.acf = AcfSpec::isotropic(kind, a.positive("r0_m"));
  } else {
    cfg.acf = AcfSpec::anisotropic(kind, a.positive("r_strike_m"), a.positive("r_dip_m"));
  }

  cfg.alpha = root.number("alpha");
  if (!(cfg.alpha >= 0.0)) root.fail("alpha", "must be non-negative");
  try {
    cfg.distribution = parse_distribution_kind(root.string("distribution"));
  } catch (const Error& e) {
    root.fail("distribution", e.what());
  }
  cfg.target_mw = root.number("target_mw");
  cfg.moment.rigidity = root.positive("rigidity_pa", cfg.moment.rigidity);
  cfg.elastic.poisson = root.number("poisson_ratio", cfg.elastic.poisson);
  if (!(cfg.elastic.poisson > -1.0 && cfg.elastic.poisson < 0.5)) {
    root.fail("poisson_ratio", "must lie in (-1, 0.5)");
  }
}

void parse_grid_and_proxy(const Node& root, RunConfig& cfg) {
  const Node g = root.object("grid");
  const std::string type = g.string("type");
  if (type == "transect") {
    g.allow_only({"type", "margin_m", "n_points"});
    cfg.grid.kind = GridKind::transect;
    cfg.grid.n_points = g.count("n_points");
    if (cfg.grid.n_points < 2) g.fail("n_points", "need at least 2 points");
  } else if (type == "box") {
    g.allow_only({"type", "margin_m", "nx", "ny"});
    cfg.grid.kind = GridKind::box;
    cfg.grid.nx = g.count("nx");
    cfg.grid.ny = g.count("ny");
    if (cfg.grid.nx < 2) g.fail("nx", "need at least 2 points");
    if (cfg.grid.ny < 2) g.fail("ny", "need at least 2 points");
  } else {
    g.fail("type", fmt::format("expected transect or box, got '{}'", type));
  }
  cfg.grid.margin = g.number("margin_m", 0.0);
  if (cfg.grid.margin < 0.0) g.fail("margin_m", "must be non-negative");

  const Node p = root.object("proxy");
  p.allow_only({"shore", "offshore_x_below_m", "strike_extent_m", "water_density", "gravity"});
  const Node s = p.object("shore");
  s.allow_only({"x_m", "y_m"});
  cfg.proxy.shore = {s.number("x_m"), s.number("y_m")};
  cfg.proxy.offshore_x_below = p.number("offshore_x_below_m");
  cfg.proxy.strike_extent = p.positive("strike_extent_m", cfg.proxy.strike_extent);
  cfg.proxy.water_density = p.positive("water_density", cfg.proxy.water_density);
  cfg.proxy.gravity = p.positive("gravity", cfg.proxy.gravity);
}

void parse_run(const Node& root, RunConfig& cfg) {
  const Node r = root.object("run");
  r.allow_only({"truncations", "n_samples", "seed", "modes", "sample_count",
                "independent_streams", "extremes", "kde_grid_1d", "kde_grid_2d", "hazard_levels",
                "block_size"});
  const json& tr = r.raw("truncations");
  if (!tr.is_array() || tr.empty()) r.fail("truncations", "expected a non-empty array");
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (!tr[i].is_number_unsigned() || tr[i].get<std::uint64_t>() == 0) {
      r.fail(fmt::format("truncations[{}]", i), "expected a positive integer");
    }
    cfg.run.truncations.push_back(tr[i].get<std::size_t>());
  }
  cfg.run.n_samples = r.count("n_samples");
  if (cfg.run.n_samples < 1) r.fail("n_samples", "must be at least 1");
  cfg.run.seed = r.count("seed");
  cfg.run.modes = r.count("modes", cfg.run.modes);
  cfg.run.sample_count = r.count("sample_count", cfg.run.sample_count);
  cfg.run.independent_streams = r.boolean("independent_streams", false);
  cfg.run.kde_grid_1d = r.count("kde_grid_1d", cfg.run.kde_grid_1d);
  cfg.run.kde_grid_2d = r.count("kde_grid_2d", cfg.run.kde_grid_2d);
  cfg.run.hazard_levels = r.count("hazard_levels", cfg.run.hazard_levels);
  cfg.run.block_size = r.count("block_size", cfg.run.block_size);
  if (cfg.run.kde_grid_1d < 2) r.fail("kde_grid_1d", "need at least 2 points");
  if (cfg.run.kde_grid_2d < 2) r.fail("kde_grid_2d", "need at least 2 points");
  if (cfg.run.hazard_levels < 2) r.fail("hazard_levels", "need at least 2 levels");
  if (cfg.run.block_size < 1) r.fail("block_size", "must be at least 1");

  if (r.has("extremes")) {
    const json& ex = r.raw("extremes");
    if (!ex.is_array()) r.fail("extremes", "expected an array");
    for (std::size_t i = 0; i < ex.size(); ++i) {
      const Node e(ex[i], r.child_path(fmt::format("extremes[{}]", i)));
      e.allow_only({"proxy", "above"});
      ExtremeFilter f;
      try {
        f.proxy = parse_proxy_field(e.string("proxy"));
      } catch (const Error& err) {
        e.fail("proxy", err.what());
      }
      f.above = e.number("above");
      cfg.run.extremes.push_back(f);
    }
  }
}

}  // namespace

ProxyField parse_proxy_field(std::string_view name) {
  if (name == "dB_shore") return ProxyField::dB_shore;
  if (name == "E_PJ") return ProxyField::energy_pj;
  if (name == "eta_max") return ProxyField::eta_max;
  if (name == "D") return ProxyField::depth;
  throw ConfigError(fmt::format("unknown proxy '{}' (expected dB_shore, E_PJ, eta_max or D)", name));
}

std::string_view to_string(ProxyField field) {
  switch (field) {
    case ProxyField::dB_shore: return "dB_shore";
    case ProxyField::energy_pj: return "E_PJ";
    case ProxyField::eta_max: return "eta_max";
    case ProxyField::depth: return "D";
  }
  return "?";
}

std::filesystem::path RunConfig::bank_cache_path() const {
  return bank_cache.is_absolute() ? bank_cache : output_dir / bank_cache;
}

RunConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  const Node root(doc, "");
  root.allow_only({"name", "fault", "taper", "acf", "alpha", "distribution", "target_mw",
                   "rigidity_pa", "poisson_ratio", "grid", "proxy", "run", "output_dir",
                   "bank_cache"});
  RunConfig cfg;
  cfg.name = root.has("name") ? root.string("name") : "run";
  parse_fault(root, base_dir, cfg);
  parse_physics(root, cfg);
  parse_grid_and_proxy(root, cfg);
  parse_run(root, cfg);
  cfg.output_dir = root.has("output_dir") ? root.string("output_dir") : "out";
  if (root.has("bank_cache")) cfg.bank_cache = root.string("bank_cache");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open config '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

}  // namespace slipgen::cli
