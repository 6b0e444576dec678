#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "point_source.hpp"
#include "slipgen/errors.hpp"
#include "slipgen/okada.hpp"
#include "slipgen/rng.hpp"

using namespace slipgen;

namespace {

constexpr double kRad = std::numbers::pi / 180.0;

double global_quadrature(const SubfaultPatch& p, double slip, Point2 at, double medium) {
  return oracle::patch_uz_quadrature(p.x, p.y, p.depth, p.strike, p.dip, p.rake, p.length,
                                     p.width, slip, at.x, at.y, medium);
}

SubfaultPatch patch(double strike, double dip, double rake, double depth) {
  SubfaultPatch p;
  p.x = 1000.0;
  p.y = -2000.0;
  p.depth = depth;
  p.strike = strike;
  p.dip = dip;
  p.rake = rake;
  p.length = 20e3;
  p.width = 10e3;
  return p;
}

}  // namespace

TEST_CASE("okada_uz_local: published check values") {
  CHECK(okada_uz_local(2, 3, 4, 70, 3, 2, 1, 0) == doctest::Approx(-2.747e-3).epsilon(2e-4));
  CHECK(okada_uz_local(2, 3, 4, 70, 3, 2, 0, 1) == doctest::Approx(-3.564e-2).epsilon(2e-4));
}

TEST_CASE("okada_uz_local agrees with point-source quadrature") {
  const double pts[][2] = {{2, 3}, {-1, 0.5}, {5, -4}, {1.5, 1.0}, {0.3, 7}};
  for (const double dip : {15.0, 45.0, 70.0, 90.0}) {
    for (const auto& xy : pts) {
      for (const auto& [ss, ds] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}}) {
        const double closed = okada_uz_local(xy[0], xy[1], 4, dip, 3, 2, ss, ds);
        const double quad =
            oracle::rectangle_uz_quadrature(xy[0], xy[1], 4, dip, 3, 2, ss, ds, 0.5);
        CHECK(closed == doctest::Approx(quad).epsilon(1e-6).scale(1e-3));
      }
    }
  }
}

TEST_CASE("okada_vertical in map coordinates agrees with quadrature") {
  const Point2 obs[] = {{0, 0}, {15e3, 3e3}, {-20e3, -12e3}, {40e3, 25e3}, {3e3, -30e3}};
  for (const auto& p : {patch(0, 13, 90, 15e3), patch(30, 20, 75, 12e3),
                        patch(200, 60, 0, 20e3), patch(355, 10, 120, 8e3)}) {
    for (const auto& at : obs) {
      const double closed = okada_vertical(p, 2.0, at, ElasticSpec{0.25});
      const double quad = global_quadrature(p, 2.0, at, 0.5);
      CHECK(closed == doctest::Approx(quad).epsilon(1e-6).scale(1e-3));
    }
  }
}

TEST_CASE("okada_vertical: zero slip, linearity, surface-breaking patch") {
  const SubfaultPatch p = patch(30, 20, 75, 12e3);
  const Point2 at{7e3, 4e3};
  CHECK(okada_vertical(p, 0.0, at) == 0.0);
  const double one = okada_vertical(p, 1.0, at);
  CHECK(std::abs(okada_vertical(p, 3.7, at) - 3.7 * one) <= 1e-12 * std::abs(3.7 * one));
  CHECK(std::abs(okada_vertical(p, -2.0, at) + 2.0 * one) <= 1e-12 * std::abs(2.0 * one));

  SubfaultPatch shallow = patch(0, 90, 90, 4000.0);
  CHECK_THROWS_AS(okada_vertical(shallow, 1.0, at), UnsupportedGeometryError);
}

TEST_CASE("okada_vertical: far-field decay") {
  SubfaultPatch sq;
  sq.depth = 10e3;
  sq.dip = 20.0;
  sq.length = sq.width = 10e3;
  double peak = 0.0;
  for (double x = -30e3; x <= 30e3; x += 500.0) {
    for (double y = -30e3; y <= 30e3; y += 2000.0) {
      peak = std::max(peak, std::abs(okada_vertical(sq, 1.0, {x, y})));
    }
  }
  for (double angle = 0; angle < 360; angle += 30) {
    const Point2 at{100e3 * std::cos(angle * kRad), 100e3 * std::sin(angle * kRad)};
    CHECK(std::abs(okada_vertical(sq, 1.0, at)) < 0.02 * peak);
  }
}

TEST_CASE("bank: deform, batch, mode deformations") {
  const FaultModel f = build_1d_fault(100e3, 13.0, 5e3, 20, 1e6);
  auto grid = std::make_shared<const DeformGrid>(build_grid_1d(f, 100e3, 101));
  const UnitSourceBank bank = build_bank(f, grid, {}, 1);
  REQUIRE(bank.points() == 101);
  REQUIRE(bank.patches() == 20);

  const Eigen::VectorXd slip = Eigen::VectorXd::LinSpaced(20, 1.0, 8.0);
  const Deformation d = deform(bank, slip);
  Eigen::VectorXd direct = Eigen::VectorXd::Zero(101);
  for (std::size_t j = 0; j < f.size(); ++j) {
    for (std::size_t i = 0; i < grid->size(); ++i) {
      direct[static_cast<Eigen::Index>(i)] += okada_vertical(f[j], slip[static_cast<Eigen::Index>(j)], (*grid)[i]);
    }
  }
  const double scale = direct.cwiseAbs().maxCoeff();
  CHECK((d.dz - direct).cwiseAbs().maxCoeff() <= 1e-10 * scale);
  CHECK(deform(bank, Eigen::VectorXd::Zero(20)).dz.cwiseAbs().maxCoeff() == 0.0);

  Eigen::MatrixXd two(20, 2);
  two.col(0) = slip;
  two.col(1) = 2.0 * slip;
  const Eigen::MatrixXd batch = deform_batch(bank, two);
  CHECK((batch.col(0) - d.dz).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  CHECK((batch.col(1) - 2.0 * d.dz).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  CHECK_THROWS_AS(deform(bank, Eigen::VectorXd::Ones(3)), DomainError);

  const SlipDistribution dist =
      make_slip_distribution(f, TaperSpec{22500.0, 20.0, 5000.0},
                             AcfSpec::isotropic(AcfKind::exponential, 40e3), 0.75,
                             DistributionKind::gaussian, 9.0);
  const KLBasis basis = eigendecompose(dist);
  const ModeDeformations md = mode_deformations(bank, basis, 5);
  REQUIRE(md.columns.cols() == 5);
  const NormalStream rng(3);
  for (std::uint64_t k = 0; k < 4; ++k) {
    const Eigen::VectorXd z5 = rng.draw(k, 5);
    const Eigen::VectorXd full = mode_coefficients(z5, 5, true, 20);
    const Eigen::VectorXd expect = deform(bank, realize_gaussian(basis, full, 5).slip).dz;
    CHECK((md.assemble(z5) - expect).cwiseAbs().maxCoeff() <= 1e-10 * expect.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("bank: worker determinism and cache") {
  const FaultModel f = build_1d_fault(100e3, 13.0, 5e3, 30, 1e6);
  auto grid = std::make_shared<const DeformGrid>(build_grid_1d(f, 100e3, 201));
  const UnitSourceBank b1 = build_bank(f, grid, {}, 1);
  const UnitSourceBank b3 = build_bank(f, grid, {}, 3);
  CHECK(b1.columns() == b3.columns());

  const auto dir = fixture::scratch("okada_cache");
  const auto path = dir / "bank.bin";
  CHECK_FALSE(load_bank(path, f, grid).has_value());
  save_bank(b1, path);
  const auto back = load_bank(path, f, grid);
  REQUIRE(back.has_value());
  CHECK(back->columns() == b1.columns());

  auto other_grid = std::make_shared<const DeformGrid>(build_grid_1d(f, 100e3, 200));
  CHECK_FALSE(load_bank(path, f, other_grid).has_value());
  CHECK_FALSE(load_bank(path, build_1d_fault(100e3, 14.0, 5e3, 30, 1e6), grid).has_value());
  CHECK_FALSE(load_bank(path, f, grid, ElasticSpec{0.3}).has_value());
}
