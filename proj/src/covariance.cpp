#include "slipgen/covariance.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "slipgen/errors.hpp"

namespace slipgen {

double taper_value(double depth, const TaperSpec& spec) {
  const double d = std::clamp(depth - spec.reference_depth, 0.0, spec.d_max);
  const double tau = 1.0 - std::exp(spec.steepness * (d - spec.d_max) / spec.d_max);
  return std::clamp(tau, 0.0, 1.0);
}

Eigen::VectorXd taper_vector(const FaultModel& fault, const TaperSpec& spec) {
  if (!(spec.d_max > 0.0) || !(spec.steepness > 0.0)) {
    throw DomainError("taper needs d_max > 0 and steepness > 0");
  }
  Eigen::VectorXd tau(static_cast<Eigen::Index>(fault.size()));
  for (std::size_t i = 0; i < fault.size(); ++i) {
    tau[static_cast<Eigen::Index>(i)] = taper_value(fault[i].depth, spec);
  }
  return tau;
}

AcfKind parse_acf_kind(std::string_view name) {
  if (name == "exponential") return AcfKind::exponential;
  if (name == "gaussian") return AcfKind::gaussian;
  throw ConfigError(fmt::format("unknown autocorrelation kind '{}'", name));
}

double acf_value(AcfKind kind, double r) {
  switch (kind) {
    case AcfKind::exponential:
      return std::exp(-r);
    case AcfKind::gaussian:
      return std::exp(-r * r);
  }
  return 0.0;
}

Eigen::VectorXd mean_slip(const FaultModel& fault, const TaperSpec& taper, double target_mw,
                          const MomentSpec& moment) {
  const Eigen::VectorXd tau = taper_vector(fault, taper);
  if (!(tau.maxCoeff() > 0.0)) {
    throw DegenerateTaperError("taper vanishes on every patch; cannot scale a mean slip");
  }
  return rescale_to_magnitude(fault, tau, target_mw, moment);
}

Eigen::MatrixXd correlation_matrix(const FaultModel& fault, const AcfSpec& acf) {
  const auto n = static_cast<Eigen::Index>(fault.size());
  if (acf.is_anisotropic()) {
    if (!(acf.r_strike > 0.0) || !(acf.r_dip > 0.0)) {
      throw DomainError("anisotropic correlation lengths must be > 0");
    }
  }
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    c(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const PatchDistance d =
          patch_distance(fault, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      double r = 0.0;
      if (!acf.is_anisotropic()) {
        r = d.euclidean / acf.r0;
      } else if (acf.kind == AcfKind::exponential) {
        r = d.strike / acf.r_strike + d.dip / acf.r_dip;
      } else {
        r = std::hypot(d.strike / acf.r_strike, d.dip / acf.r_dip);
      }
      c(i, j) = c(j, i) = acf_value(acf.kind, r);
    }
  }
  return c;
}

Eigen::MatrixXd scale_covariance(const Eigen::MatrixXd& correlation, const Eigen::VectorXd& mean,
                                 double alpha) {
  if (correlation.rows() != mean.size() || correlation.cols() != mean.size()) {
    throw DomainError(fmt::format("correlation is {}x{} but mean has {} entries",
                                  correlation.rows(), correlation.cols(), mean.size()));
  }
  const Eigen::VectorXd sigma = alpha * mean;
  // sigma_i sigma_j first so the result is exactly symmetric
  return (sigma * sigma.transpose()).cwiseProduct(correlation);
}

GaussianSpace gaussian_params_for_lognormal(const Eigen::VectorXd& mean,
                                            const Eigen::MatrixXd& covariance) {
  const Eigen::Index n = mean.size();
  if (covariance.rows() != n || covariance.cols() != n) {
    throw DomainError("covariance dimensions do not match the mean");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(mean[i] > 0.0)) {
      throw DomainError(fmt::format("lognormal mean must be > 0 (entry {} is {})", i, mean[i]));
    }
  }
  GaussianSpace g;
  g.covariance.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double arg = covariance(i, j) / (mean[i] * mean[j]) + 1.0;
      if (!(arg > 0.0)) {
        throw DomainError(fmt::format("log argument {} <= 0 at ({}, {})", arg, i, j));
      }
      g.covariance(i, j) = std::log(arg);
    }
  }
  g.mean.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) g.mean[i] = std::log(mean[i]) - 0.5 * g.covariance(i, i);
  return g;
}

GaussianSpace lognormal_moments(const Eigen::VectorXd& gaussian_mean,
                                const Eigen::MatrixXd& gaussian_covariance) {
  const Eigen::Index n = gaussian_mean.size();
  GaussianSpace out;
  out.mean.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.mean[i] = std::exp(gaussian_mean[i] + 0.5 * gaussian_covariance(i, i));
  }
  out.covariance.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      out.covariance(i, j) = out.mean[i] * out.mean[j] * std::expm1(gaussian_covariance(i, j));
    }
  }
  return out;
}

DistributionKind parse_distribution_kind(std::string_view name) {
  if (name == "gaussian") return DistributionKind::gaussian;
  if (name == "lognormal") return DistributionKind::lognormal;
  throw ConfigError(fmt::format("unknown distribution kind '{}'", name));
}

std::string_view to_string(DistributionKind kind) {
  return kind == DistributionKind::gaussian ? "gaussian" : "lognormal";
}

const Eigen::MatrixXd& SlipDistribution::expansion_covariance() const {
  return gaussian ? gaussian->covariance : covariance;
}

const Eigen::VectorXd& SlipDistribution::expansion_mean() const {
  return gaussian ? gaussian->mean : mean;
}

SlipDistribution make_slip_distribution(const FaultModel& fault, const TaperSpec& taper,
                                        const AcfSpec& acf, double alpha, DistributionKind kind,
                                        double target_mw, const MomentSpec& moment) {
  SlipDistribution d;
  d.kind = kind;
  d.alpha = alpha;
  d.taper = taper_vector(fault, taper);
  d.mean = mean_slip(fault, taper, target_mw, moment);
  d.mean_scalar = d.mean.sum() / d.taper.sum();
  d.covariance = scale_covariance(correlation_matrix(fault, acf), d.mean, alpha);
  if (kind == DistributionKind::lognormal) {
    d.gaussian = gaussian_params_for_lognormal(d.mean, d.covariance);
  }
  return d;
}

}  // namespace slipgen
