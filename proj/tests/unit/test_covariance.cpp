#include <cmath>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "fixtures.hpp"
#include "slipgen/covariance.hpp"
#include "slipgen/errors.hpp"

using namespace slipgen;

TEST_CASE("taper_value: scalar evaluations") {
  const TaperSpec t{22500.0, 20.0};
  CHECK(taper_value(22500.0, t) == 0.0);
  CHECK(taper_value(5000.0, t) == doctest::Approx(0.9999998244874972).epsilon(1e-15));
  CHECK(taper_value(20000.0, t) == doctest::Approx(0.8916319767781041).epsilon(1e-15));
  CHECK(taper_value(30000.0, t) == 0.0);  // clamps to d_max

  const TaperSpec shifted{22500.0, 20.0, 5000.0};
  CHECK(taper_value(27500.0, shifted) == 0.0);
  CHECK(taper_value(25000.0, shifted) == doctest::Approx(0.8916319767781041).epsilon(1e-15));
}

TEST_CASE("taper_value is non-increasing in depth") {
  const TaperSpec t{20000.0, 20.0};
  double prev = 2.0;
  for (double d = 1.0; d <= 20000.0; d += 97.0) {
    const double v = taper_value(d, t);
    CHECK(v <= prev);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
}

TEST_CASE("mean_slip: magnitude, uniform taper, rigidity scaling") {
  const FaultModel f = build_1d_fault(100e3, 13.0, 5e3, 200, 1e6);
  const TaperSpec t{22500.0, 20.0, 5000.0};
  const Eigen::VectorXd mu = mean_slip(f, t, 9.0);
  CHECK(moment_magnitude(seismic_moment(f, mu).value) == doctest::Approx(9.0).epsilon(1e-12));
  // area-weighted mean slip close to 10 m
  const double avg = mu.sum() / 200.0;
  CHECK(avg == doctest::Approx(10.0).epsilon(0.05));

  const Eigen::VectorXd mu2 = mean_slip(f, t, 9.0, MomentSpec{2 * 3.55e10});
  CHECK((mu2 - 0.5 * mu).cwiseAbs().maxCoeff() < 1e-12 * mu.maxCoeff());

  std::vector<SubfaultPatch> flat(4);
  for (std::size_t i = 0; i < flat.size(); ++i) {
    flat[i].x = 1e3 * static_cast<double>(i);
    flat[i].depth = 8000.0;
    flat[i].dip = 10.0;
    flat[i].length = flat[i].width = 1e3;
  }
  const Eigen::VectorXd mflat = mean_slip(FaultModel(flat, "flat"), TaperSpec{20000.0}, 6.0);
  CHECK(mflat.maxCoeff() - mflat.minCoeff() == 0.0);

  CHECK_THROWS_AS(mean_slip(f, TaperSpec{1000.0}, 9.0), DegenerateTaperError);
}

TEST_CASE("correlation_matrix: isotropic and anisotropic") {
  const FaultModel f = build_1d_fault(100e3, 13.0, 5e3, 200, 1e6);
  const Eigen::MatrixXd c = correlation_matrix(f, AcfSpec::isotropic(AcfKind::exponential, 40e3));
  CHECK(c.rows() == 200);
  CHECK(c.diagonal().minCoeff() == 1.0);
  CHECK((c - c.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(c.minCoeff() > 0.0);
  CHECK(c.maxCoeff() <= 1.0);
  // patches 80 apart sit 80 * 500 m = 40 km apart down dip
  CHECK(c(0, 80) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(c(0, 80) == doctest::Approx(0.3679).epsilon(1e-4));

  const Eigen::MatrixXd g = correlation_matrix(f, AcfSpec::isotropic(AcfKind::gaussian, 40e3));
  CHECK(g(0, 80) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(g(0, 160) == doctest::Approx(std::exp(-4.0)).epsilon(1e-12));

  // Anisotropic: build two patches with d_strike = r_strike, d_dip = r_dip.
  const double r_s = 130e3, r_d = 40e3, dip = 10.0;
  const double dz = r_d * std::sin(dip * std::numbers::pi / 180.0);
  const double horiz = std::sqrt(r_d * r_d - dz * dz);
  std::vector<SubfaultPatch> two(2);
  for (auto& p : two) {
    p.depth = 5000.0;
    p.dip = dip;
    p.length = p.width = 1e3;
  }
  two[1].x = horiz;
  two[1].y = r_s;
  two[1].depth += dz;
  const FaultModel pair(two, "pair");
  const PatchDistance d = patch_distance(pair, 0, 1);
  CHECK(d.dip == doctest::Approx(r_d).epsilon(1e-12));
  CHECK(d.strike == doctest::Approx(r_s).epsilon(1e-9));
  const Eigen::MatrixXd ca = correlation_matrix(pair, AcfSpec::anisotropic(AcfKind::exponential, r_s, r_d));
  CHECK(ca(0, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
}

TEST_CASE("correlation and scaled covariance are PSD on shipped geometries") {
  const FaultModel one = build_1d_fault(100e3, 13.0, 5e3, 200, 1e6);
  const FaultModel csz = load_fault(fixture::source_dir() / "data" / "csz_south.csv");
  for (const auto& [fault, acf] :
       {std::pair{&one, AcfSpec::isotropic(AcfKind::exponential, 40e3)},
        std::pair{&csz, AcfSpec::anisotropic(AcfKind::exponential, 130e3, 40e3)},
        std::pair{&one, AcfSpec::isotropic(AcfKind::gaussian, 40e3)}}) {
    const Eigen::MatrixXd c = correlation_matrix(*fault, acf);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(c).eigenvalues();
    CHECK(ev.minCoeff() >= -1e-8 * ev.maxCoeff());
    const Eigen::VectorXd mu = Eigen::VectorXd::LinSpaced(c.rows(), 1.0, 12.0);
    const Eigen::MatrixXd s = scale_covariance(c, mu, 0.75);
    CHECK((s - s.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::VectorXd es = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s).eigenvalues();
    CHECK(es.minCoeff() >= -1e-8 * es.maxCoeff());
  }
}

TEST_CASE("scale_covariance: scalar example, diagonal, alpha = 0") {
  Eigen::MatrixXd c(2, 2);
  c << 1.0, std::exp(-1.0), std::exp(-1.0), 1.0;
  const Eigen::VectorXd mu = Eigen::VectorXd::Constant(2, 10.0);
  const Eigen::MatrixXd s = scale_covariance(c, mu, 0.75);
  CHECK(s(0, 1) == doctest::Approx(20.69321856589363).epsilon(1e-14));
  CHECK(s(0, 1) == doctest::Approx(20.69).epsilon(1e-3));
  CHECK(s(0, 0) == doctest::Approx(56.25).epsilon(1e-15));
  CHECK(scale_covariance(c, mu, 0.0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lognormal Gaussian-space parameters") {
  const FaultModel csz = load_fault(fixture::source_dir() / "data" / "csz_south.csv");
  const Eigen::MatrixXd c =
      correlation_matrix(csz, AcfSpec::anisotropic(AcfKind::exponential, 130e3, 40e3));
  const Eigen::VectorXd mu = mean_slip(csz, TaperSpec{20000.0}, 8.8);
  const Eigen::MatrixXd chat = scale_covariance(c, mu, 0.5);
  const GaussianSpace g = gaussian_params_for_lognormal(mu, chat);

  SUBCASE("diagonal equals log 1.25 and depends only on C and alpha") {
    CHECK(g.covariance(0, 0) == doctest::Approx(0.22314355131420976).epsilon(1e-14));
    double worst = 0.0;
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      for (Eigen::Index j = 0; j < c.cols(); ++j) {
        worst = std::max(worst, std::abs(g.covariance(i, j) - std::log1p(0.25 * c(i, j))));
      }
    }
    CHECK(worst < 1e-13);
  }
  SUBCASE("forward map round trip to 1e-10 relative") {
    const GaussianSpace back = lognormal_moments(g.mean, g.covariance);
    CHECK(((back.mean - mu).array().abs() / mu.array()).maxCoeff() < 1e-10);
    CHECK((back.covariance - chat).cwiseAbs().maxCoeff() < 1e-10 * chat.cwiseAbs().maxCoeff());
  }
  SUBCASE("zero covariance") {
    const GaussianSpace z = gaussian_params_for_lognormal(mu, Eigen::MatrixXd::Zero(540, 540));
    CHECK(z.covariance.cwiseAbs().maxCoeff() == 0.0);
    CHECK((z.mean - mu.array().log().matrix()).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("errors") {
    Eigen::VectorXd bad = Eigen::VectorXd::Ones(2);
    bad[1] = 0.0;
    CHECK_THROWS_AS(gaussian_params_for_lognormal(bad, Eigen::MatrixXd::Zero(2, 2)), DomainError);
    Eigen::MatrixXd neg(2, 2);
    neg << 0.5, -2.0, -2.0, 0.5;
    try {
      gaussian_params_for_lognormal(Eigen::VectorXd::Ones(2), neg);
      FAIL("expected a domain error");
    } catch (const DomainError& e) {
      CHECK(std::string(e.what()).find("(0, 1)") != std::string::npos);
    }
  }
}

TEST_CASE("make_slip_distribution") {
  const FaultModel f = build_1d_fault(100e3, 13.0, 5e3, 50, 1e6);
  const TaperSpec t{22500.0, 20.0, 5000.0};
  const auto acf = AcfSpec::isotropic(AcfKind::exponential, 40e3);
  const SlipDistribution g = make_slip_distribution(f, t, acf, 0.75, DistributionKind::gaussian, 9.0);
  CHECK(&g.expansion_covariance() == &g.covariance);
  for (Eigen::Index i = 0; i < 50; ++i) {
    CHECK(g.covariance(i, i) == doctest::Approx(std::pow(0.75 * g.mean[i], 2)).epsilon(1e-12));
  }
  const SlipDistribution l = make_slip_distribution(f, t, acf, 0.5, DistributionKind::lognormal, 9.0);
  REQUIRE(l.gaussian.has_value());
  CHECK(&l.expansion_covariance() == &l.gaussian->covariance);
  CHECK(parse_distribution_kind("lognormal") == DistributionKind::lognormal);
  CHECK_THROWS_AS(parse_distribution_kind("cauchy"), ConfigError);
  CHECK_THROWS_AS(parse_acf_kind("vonkarman"), ConfigError);
}
