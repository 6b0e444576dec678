#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>

#include <Eigen/Dense>

#include "slipgen/geometry.hpp"
#include "slipgen/klbasis.hpp"

namespace slipgen {

struct ElasticSpec {
  double poisson = 0.25;
  /// mu / (lambda + mu) = 1 - 2 nu.
  double medium_constant() const { return 1.0 - 2.0 * poisson; }
};

/// Closed-form vertical surface displacement of a rectangular dislocation in
/// the Okada (1985) frame: x along strike, the plane rising toward +y from its
/// lower edge at depth `d_bottom` (origin above the lower-left corner).
double okada_uz_local(double x, double y, double d_bottom, double dip_deg, double length,
                      double width, double strike_slip, double dip_slip,
                      double medium_constant = 0.5);

/// Vertical displacement at surface point `at` for `slip` meters on `patch`.
/// Throws UnsupportedGeometryError when the patch reaches the surface.
double okada_vertical(const SubfaultPatch& patch, double slip, Point2 at,
                      const ElasticSpec& elastic = {});

struct Deformation {
  std::shared_ptr<const DeformGrid> grid;
  Eigen::VectorXd dz;
};

Deformation okada_patch(const SubfaultPatch& patch, double slip,
                        std::shared_ptr<const DeformGrid> grid, const ElasticSpec& elastic = {});

/// Unit-slip deformation of each patch on a fixed grid: column j is the
/// vertical displacement for 1 m of slip on patch j (the matrix Theta).
class UnitSourceBank {
 public:
  UnitSourceBank(std::shared_ptr<const DeformGrid> grid, Eigen::MatrixXd columns,
                 std::uint64_t fault_hash, std::uint64_t elastic_hash);

  const DeformGrid& grid() const { return *grid_; }
  std::shared_ptr<const DeformGrid> grid_ptr() const { return grid_; }
  const Eigen::MatrixXd& columns() const { return columns_; }
  Eigen::Index patches() const { return columns_.cols(); }
  Eigen::Index points() const { return columns_.rows(); }
  std::uint64_t fault_hash() const { return fault_hash_; }
  std::uint64_t grid_hash() const { return grid_->hash(); }
  std::uint64_t elastic_hash() const { return elastic_hash_; }

 private:
  std::shared_ptr<const DeformGrid> grid_;
  Eigen::MatrixXd columns_;
  std::uint64_t fault_hash_;
  std::uint64_t elastic_hash_;
};

std::uint64_t elastic_hash(const ElasticSpec& elastic);

UnitSourceBank build_bank(const FaultModel& fault, std::shared_ptr<const DeformGrid> grid,
                          const ElasticSpec& elastic = {}, unsigned workers = 0);

/// dz = sum_j slip_j * column_j.
Deformation deform(const UnitSourceBank& bank, const Eigen::VectorXd& slip);

/// Deformation for a block of slip vectors (one per column).
Eigen::MatrixXd deform_batch(const UnitSourceBank& bank, const Eigen::MatrixXd& slips);

/// Theta * mu and the columns Theta * sqrt(lambda_k) v_k for modes 1..m, so
/// a Gaussian realization's deformation is mean_dz + columns * (z_1..z_m).
struct ModeDeformations {
  std::shared_ptr<const DeformGrid> grid;
  Eigen::VectorXd mean_dz;
  Eigen::MatrixXd columns;

  Eigen::VectorXd assemble(const Eigen::VectorXd& active_z) const;
};

ModeDeformations mode_deformations(const UnitSourceBank& bank, const KLBasis& basis,
                                   std::size_t m);

/// Binary bank cache. The header records fault, grid and elastic hashes;
/// load_bank returns nullopt when the file is missing or any hash differs.
void save_bank(const UnitSourceBank& bank, const std::filesystem::path& path);
std::optional<UnitSourceBank> load_bank(const std::filesystem::path& path,
                                        const FaultModel& fault,
                                        std::shared_ptr<const DeformGrid> grid,
                                        const ElasticSpec& elastic = {});

}  // namespace slipgen
