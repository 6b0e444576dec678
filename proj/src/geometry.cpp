#include "slipgen/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "hash.hpp"
#include "slipgen/errors.hpp"

namespace slipgen {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kEarthRadius = 6371.0e3;

struct Frame {
  Point2 along;  // unit strike direction
  Point2 down;   // unit horizontal down-dip direction
};

Frame patch_frame(double strike_deg) {
  const double s = strike_deg * kDegToRad;
  return {{std::sin(s), std::cos(s)}, {std::cos(s), -std::sin(s)}};
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

double SubfaultPatch::top_depth() const {
  return depth - 0.5 * width * std::sin(dip * kDegToRad);
}

double SubfaultPatch::bottom_depth() const {
  return depth + 0.5 * width * std::sin(dip * kDegToRad);
}

std::array<Point2, 4> surface_corners(const SubfaultPatch& p) {
  const Frame f = patch_frame(p.strike);
  const double half_len = 0.5 * p.length;
  const double half_proj = 0.5 * p.width * std::cos(p.dip * kDegToRad);
  auto at = [&](double a, double d) {
    return Point2{p.x + a * f.along.x + d * f.down.x, p.y + a * f.along.y + d * f.down.y};
  };
  return {at(-half_len, -half_proj), at(half_len, -half_proj), at(half_len, half_proj),
          at(-half_len, half_proj)};
}

void validate_patch(const SubfaultPatch& p, std::size_t index) {
  auto fail = [&](std::string_view what) {
    throw GeometryError(fmt::format("patch {}: {}", index, what));
  };
  const bool finite = std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.depth) &&
                      std::isfinite(p.strike) && std::isfinite(p.dip) &&
                      std::isfinite(p.rake) && std::isfinite(p.length) &&
                      std::isfinite(p.width);
  if (!finite) fail("non-finite value");
  if (!(p.depth > 0.0)) fail(fmt::format("depth must be > 0 (got {})", p.depth));
  if (!(p.length > 0.0)) fail(fmt::format("length must be > 0 (got {})", p.length));
  if (!(p.width > 0.0)) fail(fmt::format("width must be > 0 (got {})", p.width));
  if (!(p.dip > 0.0 && p.dip <= 90.0)) fail(fmt::format("dip must be in (0, 90] (got {})", p.dip));
}

FaultModel::FaultModel(std::vector<SubfaultPatch> patches, std::string label)
    : patches_(std::move(patches)), label_(std::move(label)) {
  if (patches_.empty()) throw GeometryError("fault must contain at least one patch");
  for (std::size_t i = 0; i < patches_.size(); ++i) validate_patch(patches_[i], i);
}

double FaultModel::total_area() const {
  double a = 0.0;
  for (const auto& p : patches_) a += p.area();
  return a;
}

std::uint64_t FaultModel::hash() const {
  detail::Fnv1a h;
  h.add(static_cast<std::uint64_t>(patches_.size()));
  for (const auto& p : patches_) {
    for (double v : {p.x, p.y, p.depth, p.strike, p.dip, p.rake, p.length, p.width}) h.add(v);
  }
  return h.value();
}

DeformGrid DeformGrid::transect(Point2 start, Point2 end, std::size_t n_points) {
  if (n_points < 2) throw GeometryError("grid needs at least 2 points");
  const double span = std::hypot(end.x - start.x, end.y - start.y);
  if (!(span > 0.0) || !std::isfinite(span)) throw GeometryError("degenerate grid bounds");
  DeformGrid g;
  g.nx_ = n_points;
  g.ny_ = 1;
  g.dx_ = span / static_cast<double>(n_points - 1);
  g.origin_ = start;
  g.direction_ = {(end.x - start.x) / span, (end.y - start.y) / span};
  g.points_.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n_points - 1);
    g.points_.push_back({start.x + t * (end.x - start.x), start.y + t * (end.y - start.y)});
  }
  g.points_.back() = end;
  return g;
}

DeformGrid DeformGrid::box(double x_min, double x_max, double y_min, double y_max, std::size_t nx,
                           std::size_t ny) {
  if (nx < 2 || ny < 2) throw GeometryError("box grid needs at least 2 points per axis");
  if (!(x_max > x_min) || !(y_max > y_min) || !std::isfinite(x_max - x_min) ||
      !std::isfinite(y_max - y_min)) {
    throw GeometryError("degenerate grid bounds");
  }
  DeformGrid g;
  g.nx_ = nx;
  g.ny_ = ny;
  g.dx_ = (x_max - x_min) / static_cast<double>(nx - 1);
  g.dy_ = (y_max - y_min) / static_cast<double>(ny - 1);
  g.origin_ = {x_min, y_min};
  g.direction_ = {1.0, 0.0};
  g.points_.reserve(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    const double y = j + 1 == ny ? y_max : y_min + static_cast<double>(j) * g.dy_;
    for (std::size_t i = 0; i < nx; ++i) {
      const double x = i + 1 == nx ? x_max : x_min + static_cast<double>(i) * g.dx_;
      g.points_.push_back({x, y});
    }
  }
  return g;
}

std::size_t DeformGrid::nearest(Point2 p) const {
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double dx = points_[i].x - p.x;
    const double dy = points_[i].y - p.y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

double DeformGrid::abscissa(std::size_t i) const {
  if (!is_transect()) return points_[i].x;
  return (points_[i].x - origin_.x) * direction_.x + (points_[i].y - origin_.y) * direction_.y;
}

std::uint64_t DeformGrid::hash() const {
  detail::Fnv1a h;
  h.add(static_cast<std::uint64_t>(nx_));
  h.add(static_cast<std::uint64_t>(ny_));
  for (const auto& p : points_) {
    h.add(p.x);
    h.add(p.y);
  }
  return h.value();
}

FaultModel build_1d_fault(double width, double dip, double top_depth, std::size_t n_patches,
                          double strike_length) {
  if (n_patches < 1) throw GeometryError("n_patches must be >= 1");
  if (!(width > 0.0) || !(strike_length > 0.0) || !(top_depth > 0.0)) {
    throw GeometryError(fmt::format(
        "fault dimensions must be positive (width={}, strike_length={}, top_depth={})", width,
        strike_length, top_depth));
  }
  if (!(dip > 0.0 && dip <= 90.0)) throw GeometryError("dip must be in (0, 90]");

  const double dx = width / static_cast<double>(n_patches);
  const double sin_dip = std::sin(dip * kDegToRad);
  const double cos_dip = std::cos(dip * kDegToRad);
  std::vector<SubfaultPatch> patches;
  patches.reserve(n_patches);
  for (std::size_t i = 0; i < n_patches; ++i) {
    const double down = (static_cast<double>(i) + 0.5) * dx;
    SubfaultPatch p;
    p.x = down * cos_dip;
    p.y = 0.5 * strike_length;
    p.depth = top_depth + down * sin_dip;
    p.strike = 0.0;
    p.dip = dip;
    p.rake = 90.0;
    p.length = strike_length;
    p.width = dx;
    patches.push_back(p);
  }
  return FaultModel(std::move(patches), "builtin-1d");
}

Point2 project_lonlat(double lon, double lat, GeoOrigin origin) {
  const double scale = kEarthRadius * kDegToRad;
  return {(lon - origin.lon) * scale * std::cos(origin.lat * kDegToRad),
          (lat - origin.lat) * scale};
}

FaultModel parse_fault_csv(std::istream& in, const FaultLoadOptions& options) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      for (auto cell : split_csv(line)) header.emplace_back(cell);
      break;
    }
  }
  if (header.empty()) throw FormatError("fault file is empty (line 1: missing header)");

  std::map<std::string, std::size_t, std::less<>> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  const bool geographic = col.contains("lon") && col.contains("lat");
  const std::array<std::string_view, 6> common = {"depth_m", "strike_deg", "dip_deg",
                                                  "rake_deg", "length_m",   "width_m"};
  std::vector<std::string_view> required(common.begin(), common.end());
  if (geographic) {
    required.insert(required.begin(), {"lon", "lat"});
  } else {
    required.insert(required.begin(), {"x_m", "y_m"});
  }
  for (auto name : required) {
    if (!col.contains(name)) {
      throw FormatError(fmt::format("line {}: header missing column '{}'", line_no, name));
    }
  }

  struct Row {
    std::array<double, 8> v;  // in `required` order
  };
  std::vector<Row> rows;
  std::vector<std::size_t> row_lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw FormatError(fmt::format("line {}: expected {} fields, found {}", line_no,
                                    header.size(), cells.size()));
    }
    Row r{};
    for (std::size_t k = 0; k < required.size(); ++k) {
      const auto cell = cells[col.find(required[k])->second];
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw FormatError(
            fmt::format("line {}: cannot parse '{}' as a number ({})", line_no, cell, required[k]));
      }
      r.v[k] = value;
    }
    rows.push_back(r);
    row_lines.push_back(line_no);
  }
  if (rows.empty()) throw FormatError(fmt::format("line {}: fault file has no patch rows", line_no));

  GeoOrigin origin{};
  if (geographic) origin = options.origin.value_or(GeoOrigin{rows.front().v[0], rows.front().v[1]});

  std::vector<SubfaultPatch> patches;
  patches.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& v = rows[i].v;
    SubfaultPatch p;
    if (geographic) {
      const Point2 xy = project_lonlat(v[0], v[1], origin);
      p.x = xy.x;
      p.y = xy.y;
    } else {
      p.x = v[0];
      p.y = v[1];
    }
    p.depth = v[2];
    p.strike = v[3];
    p.dip = v[4];
    p.rake = v[5];
    p.length = v[6];
    p.width = v[7];
    if (options.depth_reference == DepthReference::top_edge) {
      p.depth += 0.5 * p.width * std::sin(p.dip * kDegToRad);
    }
    try {
      validate_patch(p, i);
    } catch (const GeometryError& e) {
      throw GeometryError(fmt::format("{} (line {})", e.what(), row_lines[i]));
    }
    patches.push_back(p);
  }
  return FaultModel(std::move(patches), options.label);
}

FaultModel load_fault(const std::filesystem::path& path, const FaultLoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open fault file '{}'", path.string()));
  FaultLoadOptions opts = options;
  if (opts.label.empty()) opts.label = path.stem().string();
  return parse_fault_csv(in, opts);
}

PatchDistance patch_distance(const FaultModel& fault, std::size_t i, std::size_t j) {
  if (i >= fault.size() || j >= fault.size()) {
    throw std::out_of_range(fmt::format("patch index out of range ({}, {}) for N = {}", i, j,
                                        fault.size()));
  }
  const auto& a = fault[i];
  const auto& b = fault[j];
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.depth - b.depth;
  const double d2 = dx * dx + dy * dy + dz * dz;
  const double mean_dip = 0.5 * (a.dip + b.dip) * kDegToRad;
  const double d_dip = std::abs(dz) / std::sin(mean_dip);
  PatchDistance out;
  out.euclidean = std::sqrt(d2);
  out.dip = d_dip;
  out.strike = std::sqrt(std::max(0.0, d2 - d_dip * d_dip));
  return out;
}

SurfaceBounds surface_bounds(const FaultModel& fault) {
  SurfaceBounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& p : fault.patches()) {
    for (const auto& c : surface_corners(p)) {
      b.x_min = std::min(b.x_min, c.x);
      b.x_max = std::max(b.x_max, c.x);
      b.y_min = std::min(b.y_min, c.y);
      b.y_max = std::max(b.y_max, c.y);
    }
  }
  return b;
}

DeformGrid build_grid_1d(const FaultModel& fault, double margin, std::size_t n_points) {
  if (n_points < 2) throw GeometryError("n_points must be >= 2");
  if (!(margin >= 0.0)) throw GeometryError("margin must be >= 0");
  // Mean strike via unit vectors so 359/1 degrees average to 0.
  double sx = 0.0, sy = 0.0, cx = 0.0, cy = 0.0;
  for (const auto& p : fault.patches()) {
    const Frame f = patch_frame(p.strike);
    sx += f.along.x;
    sy += f.along.y;
    cx += p.x;
    cy += p.y;
  }
  const double n = static_cast<double>(fault.size());
  const Point2 centre{cx / n, cy / n};
  const double norm = std::hypot(sx, sy);
  if (!(norm > 0.0)) throw GeometryError("cannot determine a mean strike for the transect");
  const Point2 down{sy / norm, -sx / norm};

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : fault.patches()) {
    for (const auto& c : surface_corners(p)) {
      const double t = (c.x - centre.x) * down.x + (c.y - centre.y) * down.y;
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  }
  lo -= margin;
  hi += margin;
  return DeformGrid::transect({centre.x + lo * down.x, centre.y + lo * down.y},
                              {centre.x + hi * down.x, centre.y + hi * down.y}, n_points);
}

DeformGrid build_grid_2d(const SurfaceBounds& b, std::size_t nx, std::size_t ny) {
  return DeformGrid::box(b.x_min, b.x_max, b.y_min, b.y_max, nx, ny);
}

}  // namespace slipgen
