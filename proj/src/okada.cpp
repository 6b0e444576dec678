// Vertical surface displacement for rectangular dislocations in an elastic
// half-space, after Okada (1985), Bull. Seism. Soc. Am. 75, 1135-1154.

#include "slipgen/okada.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include <fmt/format.h>

#include "hash.hpp"
#include "parallel.hpp"
#include "slipgen/errors.hpp"

namespace slipgen {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

struct CornerTerms {
  double strike_slip;
  double dip_slip;
};

// One corner of Chinnery's notation f(xi, eta)||.
CornerTerms corner(double xi, double eta, double q, double sd, double cd, double medium) {
  const double r = std::sqrt(xi * xi + eta * eta + q * q);
  const double x = std::sqrt(xi * xi + q * q);
  const double d_tilde = eta * sd - q * cd;
  const double r_eta = r + eta;
  const double r_xi = r + xi;
  // Removable singularities at R + eta = 0 and R + xi = 0.
  const double inv_r_eta = r_eta > 1e-14 * r ? 1.0 / r_eta : 0.0;
  const double inv_r_xi = r_xi > 1e-14 * r ? 1.0 / r_xi : 0.0;
  const double log_r_eta = r_eta > 1e-14 * r ? std::log(r_eta) : -std::log(r - eta);

  double i4 = 0.0;
  double i5 = 0.0;
  if (std::abs(cd) > 1e-12) {
    i4 = medium / cd * (std::log(r + d_tilde) - sd * log_r_eta);
    if (xi != 0.0) {
      i5 = medium * 2.0 / cd *
           std::atan((eta * (x + q * cd) + x * (r + x) * sd) / (xi * (r + x) * cd));
    }
  } else {
    i4 = -medium * q / (r + d_tilde);
    i5 = -medium * xi * sd / (r + d_tilde);
  }
  const double theta = q != 0.0 ? std::atan(xi * eta / (q * r)) : 0.0;

  CornerTerms t;
  t.strike_slip = d_tilde * q / r * inv_r_eta + q * sd * inv_r_eta + i4 * sd;
  t.dip_slip = d_tilde * q / r * inv_r_xi + sd * theta - i5 * sd * cd;
  return t;
}

bool degenerate(double x, double p, double q, double length, double width, double scale) {
  const double eps = 1e-12 * scale;
  if (std::abs(q) < eps) return true;
  if (std::abs(x) < eps || std::abs(x - length) < eps) return true;
  if (std::abs(p) < eps || std::abs(p - width) < eps) return true;
  return false;
}

double uz_local(double x, double y, double d, double sd, double cd, double length, double width,
                double u_strike, double u_dip, double medium) {
  const double p = y * cd + d * sd;
  const double q = y * sd - d * cd;
  const std::array<CornerTerms, 4> c = {
      corner(x, p, q, sd, cd, medium), corner(x, p - width, q, sd, cd, medium),
      corner(x - length, p, q, sd, cd, medium), corner(x - length, p - width, q, sd, cd, medium)};
  const double ss = c[0].strike_slip - c[1].strike_slip - c[2].strike_slip + c[3].strike_slip;
  const double ds = c[0].dip_slip - c[1].dip_slip - c[2].dip_slip + c[3].dip_slip;
  return -(u_strike * ss + u_dip * ds) / (2.0 * std::numbers::pi);
}

struct PatchKernel {
  Point2 origin;
  Point2 along;
  Point2 down;
  double d_bottom;
  double sd, cd;
  double length, width;
  double u_strike_per_slip, u_dip_per_slip;
  double scale;
};

PatchKernel make_kernel(const SubfaultPatch& p) {
  if (!(p.top_depth() > 0.0)) {
    throw UnsupportedGeometryError(fmt::format(
        "patch reaches the free surface (top depth {} m); only buried sources are supported",
        p.top_depth()));
  }
  const double strike = p.strike * kDegToRad;
  const double dip = p.dip * kDegToRad;
  const double rake = p.rake * kDegToRad;
  PatchKernel k;
  k.along = {std::sin(strike), std::cos(strike)};
  k.down = {std::cos(strike), -std::sin(strike)};
  k.sd = std::sin(dip);
  k.cd = std::cos(dip);
  const double half_proj = 0.5 * p.width * k.cd;
  k.origin = {p.x - 0.5 * p.length * k.along.x + half_proj * k.down.x,
              p.y - 0.5 * p.length * k.along.y + half_proj * k.down.y};
  k.d_bottom = p.bottom_depth();
  k.length = p.length;
  k.width = p.width;
  k.u_strike_per_slip = std::cos(rake);
  k.u_dip_per_slip = std::sin(rake);
  k.scale = std::max({p.length, p.width, k.d_bottom});
  return k;
}

double evaluate(const PatchKernel& k, double slip, Point2 at, double medium) {
  const double rx = at.x - k.origin.x;
  const double ry = at.y - k.origin.y;
  double x = rx * k.along.x + ry * k.along.y;
  double y = -(rx * k.down.x + ry * k.down.y);
  const double p = y * k.cd + k.d_bottom * k.sd;
  const double q = y * k.sd - k.d_bottom * k.cd;
  if (degenerate(x, p, q, k.length, k.width, k.scale)) {
    x += 1e-6;
    y += 1e-6;
  }
  return uz_local(x, y, k.d_bottom, k.sd, k.cd, k.length, k.width, slip * k.u_strike_per_slip,
                  slip * k.u_dip_per_slip, medium);
}

}  // namespace

double okada_uz_local(double x, double y, double d_bottom, double dip_deg, double length,
                      double width, double strike_slip, double dip_slip, double medium_constant) {
  const double dip = dip_deg * kDegToRad;
  return uz_local(x, y, d_bottom, std::sin(dip), std::cos(dip), length, width, strike_slip,
                  dip_slip, medium_constant);
}

double okada_vertical(const SubfaultPatch& patch, double slip, Point2 at,
                      const ElasticSpec& elastic) {
  return evaluate(make_kernel(patch), slip, at, elastic.medium_constant());
}

Deformation okada_patch(const SubfaultPatch& patch, double slip,
                        std::shared_ptr<const DeformGrid> grid, const ElasticSpec& elastic) {
  if (!std::isfinite(slip)) throw DomainError("slip must be finite");
  const PatchKernel k = make_kernel(patch);
  const double medium = elastic.medium_constant();
  Deformation out;
  out.dz.resize(static_cast<Eigen::Index>(grid->size()));
  for (std::size_t i = 0; i < grid->size(); ++i) {
    out.dz[static_cast<Eigen::Index>(i)] = evaluate(k, slip, (*grid)[i], medium);
  }
  out.grid = std::move(grid);
  return out;
}

UnitSourceBank::UnitSourceBank(std::shared_ptr<const DeformGrid> grid, Eigen::MatrixXd columns,
                               std::uint64_t fault_hash, std::uint64_t elastic_hash)
    : grid_(std::move(grid)),
      columns_(std::move(columns)),
      fault_hash_(fault_hash),
      elastic_hash_(elastic_hash) {
  if (static_cast<std::size_t>(columns_.rows()) != grid_->size()) {
    throw DomainError("bank rows do not match the grid size");
  }
}

std::uint64_t elastic_hash(const ElasticSpec& elastic) {
  detail::Fnv1a h;
  h.add(elastic.poisson);
  return h.value();
}

UnitSourceBank build_bank(const FaultModel& fault, std::shared_ptr<const DeformGrid> grid,
                          const ElasticSpec& elastic, unsigned workers) {
  const auto n_points = static_cast<Eigen::Index>(grid->size());
  Eigen::MatrixXd columns(n_points, static_cast<Eigen::Index>(fault.size()));
  const double medium = elastic.medium_constant();
  detail::parallel_for(fault.size(), workers, [&](std::size_t j) {
    PatchKernel k;
    try {
      k = make_kernel(fault[j]);
    } catch (const UnsupportedGeometryError& e) {
      throw UnsupportedGeometryError(fmt::format("patch {}: {}", j, e.what()));
    }
    auto col = columns.col(static_cast<Eigen::Index>(j));
    for (Eigen::Index i = 0; i < n_points; ++i) {
      col[i] = evaluate(k, 1.0, (*grid)[static_cast<std::size_t>(i)], medium);
    }
  });
  return UnitSourceBank(std::move(grid), std::move(columns), fault.hash(), elastic_hash(elastic));
}

Deformation deform(const UnitSourceBank& bank, const Eigen::VectorXd& slip) {
  if (slip.size() != bank.patches()) {
    throw DomainError(fmt::format("slip has {} entries; bank has {} patches", slip.size(),
                                  bank.patches()));
  }
  return {bank.grid_ptr(), bank.columns() * slip};
}

Eigen::MatrixXd deform_batch(const UnitSourceBank& bank, const Eigen::MatrixXd& slips) {
  if (slips.rows() != bank.patches()) {
    throw DomainError(fmt::format("slip block has {} rows; bank has {} patches", slips.rows(),
                                  bank.patches()));
  }
  return bank.columns() * slips;
}

Eigen::VectorXd ModeDeformations::assemble(const Eigen::VectorXd& active_z) const {
  if (active_z.size() < columns.cols()) throw DomainError("too few coefficients for the modes");
  return mean_dz + columns * active_z.head(columns.cols());
}

ModeDeformations mode_deformations(const UnitSourceBank& bank, const KLBasis& basis,
                                   std::size_t m) {
  if (basis.kind() != DistributionKind::gaussian) {
    throw UnsupportedDistributionError("mode deformations are linear only for Gaussian slip");
  }
  if (basis.size() != bank.patches()) throw DomainError("basis and bank sizes differ");
  const ActiveModes act = active_modes(m, true, basis.size());
  ModeDeformations out;
  out.grid = bank.grid_ptr();
  out.mean_dz = bank.columns() * basis.mean();
  out.columns = bank.columns() * basis.scaled_modes(act.first, act.count);
  return out;
}

namespace {

constexpr std::array<char, 8> kBankMagic = {'S', 'L', 'I', 'P', 'B', 'A', 'N', 'K'};
constexpr std::uint32_t kBankVersion = 1;

struct BankHeader {
  std::array<char, 8> magic;
  std::uint32_t version;
  std::uint32_t reserved;
  std::uint64_t fault_hash;
  std::uint64_t grid_hash;
  std::uint64_t elastic_hash;
  std::uint64_t rows;
  std::uint64_t cols;
};

}  // namespace

void save_bank(const UnitSourceBank& bank, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write bank cache '{}'", path.string()));
  BankHeader h{};
  h.magic = kBankMagic;
  h.version = kBankVersion;
  h.fault_hash = bank.fault_hash();
  h.grid_hash = bank.grid_hash();
  h.elastic_hash = bank.elastic_hash();
  h.rows = static_cast<std::uint64_t>(bank.points());
  h.cols = static_cast<std::uint64_t>(bank.patches());
  out.write(reinterpret_cast<const char*>(&h), sizeof h);
  out.write(reinterpret_cast<const char*>(bank.columns().data()),
            static_cast<std::streamsize>(sizeof(double) * bank.columns().size()));
  if (!out) throw IoError(fmt::format("failed writing bank cache '{}'", path.string()));
}

std::optional<UnitSourceBank> load_bank(const std::filesystem::path& path,
                                        const FaultModel& fault,
                                        std::shared_ptr<const DeformGrid> grid,
                                        const ElasticSpec& elastic) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  BankHeader h{};
  in.read(reinterpret_cast<char*>(&h), sizeof h);
  if (!in || h.magic != kBankMagic || h.version != kBankVersion) return std::nullopt;
  if (h.fault_hash != fault.hash() || h.grid_hash != grid->hash() ||
      h.elastic_hash != elastic_hash(elastic) || h.rows != grid->size() || h.cols != fault.size()) {
    return std::nullopt;
  }
  Eigen::MatrixXd columns(static_cast<Eigen::Index>(h.rows), static_cast<Eigen::Index>(h.cols));
  in.read(reinterpret_cast<char*>(columns.data()),
          static_cast<std::streamsize>(sizeof(double) * columns.size()));
  if (!in) return std::nullopt;
  return UnitSourceBank(std::move(grid), std::move(columns), h.fault_hash, h.elastic_hash);
}

}  // namespace slipgen
