#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace slipgen {

/// One rectangular subfault. Coordinates live in a local flat Cartesian
/// frame (x east, y north, meters); depth is positive down and refers to
/// the patch centroid. Strike is clockwise from north and the plane dips
/// to the right of the strike direction.
struct SubfaultPatch {
  double x = 0.0;
  double y = 0.0;
  double depth = 0.0;
  double strike = 0.0;  // degrees
  double dip = 90.0;    // degrees
  double rake = 90.0;   // degrees
  double length = 0.0;  // along strike, meters
  double width = 0.0;   // down dip, meters

  double area() const { return length * width; }
  /// Depth of the up-dip edge.
  double top_depth() const;
  /// Depth of the down-dip edge.
  double bottom_depth() const;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Surface projection of a patch: corners ordered (top-start, top-end,
/// bottom-end, bottom-start), where "start" is the strike-origin end.
std::array<Point2, 4> surface_corners(const SubfaultPatch& patch);

/// Throws GeometryError naming `index` if the patch violates an invariant.
void validate_patch(const SubfaultPatch& patch, std::size_t index);

class FaultModel {
 public:
  FaultModel(std::vector<SubfaultPatch> patches, std::string label);

  std::size_t size() const { return patches_.size(); }
  const SubfaultPatch& operator[](std::size_t i) const { return patches_[i]; }
  const std::vector<SubfaultPatch>& patches() const { return patches_; }
  const std::string& label() const { return label_; }

  double total_area() const;
  /// Stable content hash over the patch values; identifies the fault in caches.
  std::uint64_t hash() const;

 private:
  std::vector<SubfaultPatch> patches_;
  std::string label_;
};

struct PatchDistance {
  double euclidean = 0.0;
  double strike = 0.0;
  double dip = 0.0;
};

/// Observation points on the free surface. A transect (one row of points)
/// has `ny == 1`; a box grid is stored row-major with x varying fastest.
class DeformGrid {
 public:
  static DeformGrid transect(Point2 start, Point2 end, std::size_t n_points);
  static DeformGrid box(double x_min, double x_max, double y_min, double y_max, std::size_t nx,
                        std::size_t ny);

  std::size_t size() const { return points_.size(); }
  const Point2& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Point2>& points() const { return points_; }

  bool is_transect() const { return ny_ == 1; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  /// Spacing along the transect (or along x for a box).
  double dx() const { return dx_; }
  /// Spacing along y for a box; 0 for a transect.
  double dy() const { return dy_; }

  /// Index of the grid point nearest to `p` (Euclidean).
  std::size_t nearest(Point2 p) const;
  /// Distance along the transect from its first point; for a box, the x coordinate.
  double abscissa(std::size_t i) const;

  std::uint64_t hash() const;

 private:
  DeformGrid() = default;
  std::vector<Point2> points_;
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  double dx_ = 0.0;
  double dy_ = 0.0;
  Point2 origin_{};
  Point2 direction_{};
};

/// Down-dip-only fault: `n_patches` strips spanning the full strike length,
/// strike 0 (north), dipping east, rake 90. The up-dip edge projects onto x = 0
/// and the fault spans y in [0, strike_length].
FaultModel build_1d_fault(double width, double dip, double top_depth, std::size_t n_patches,
                          double strike_length = 1.0e6);

enum class DepthReference { centroid, top_edge };

struct GeoOrigin {
  double lon = 0.0;
  double lat = 0.0;
};

struct FaultLoadOptions {
  DepthReference depth_reference = DepthReference::centroid;
  /// Projection origin for lon/lat files; defaults to the first patch.
  std::optional<GeoOrigin> origin;
  std::string label;
};

/// Reads the fault CSV schema `x_m,y_m,depth_m,strike_deg,dip_deg,rake_deg,length_m,width_m`
/// or its `lon,lat,...` variant (chosen by header names; column order is free).
FaultModel load_fault(const std::filesystem::path& path, const FaultLoadOptions& options = {});
FaultModel parse_fault_csv(std::istream& in, const FaultLoadOptions& options = {});

/// Equirectangular projection about `origin` on a sphere of mean Earth radius.
Point2 project_lonlat(double lon, double lat, GeoOrigin origin);

PatchDistance patch_distance(const FaultModel& fault, std::size_t i, std::size_t j);

struct SurfaceBounds {
  double x_min, x_max, y_min, y_max;
};
SurfaceBounds surface_bounds(const FaultModel& fault);

/// Transect across the fault through the mean centroid, perpendicular to the
/// mean strike, covering the surface projection plus `margin` on each side.
DeformGrid build_grid_1d(const FaultModel& fault, double margin, std::size_t n_points);
DeformGrid build_grid_2d(const SurfaceBounds& bounds, std::size_t nx, std::size_t ny);

}  // namespace slipgen
