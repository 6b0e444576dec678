#pragma once

#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "slipgen/geometry.hpp"
#include "slipgen/moment.hpp"

namespace slipgen {

/// Depth taper tau(d) = 1 - exp(steepness * (d' - d_max) / d_max), d' = depth - reference_depth,
/// with d' clamped to (0, d_max]. tau(d_max) = 0 and tau -> 1 up-dip.
struct TaperSpec {
  double d_max = 0.0;
  double steepness = 20.0;
  /// Depth subtracted before evaluation, e.g. the depth of the fault's up-dip edge
  /// when d_max is given as a depth extent. Zero means absolute depth.
  double reference_depth = 0.0;
};

double taper_value(double depth, const TaperSpec& spec);
Eigen::VectorXd taper_vector(const FaultModel& fault, const TaperSpec& spec);

enum class AcfKind { exponential, gaussian };

AcfKind parse_acf_kind(std::string_view name);

/// Autocorrelation. Isotropic mode uses the 3-D centroid distance with one length
/// `r0`; anisotropic mode splits the distance into strike and dip parts.
struct AcfSpec {
  AcfKind kind = AcfKind::exponential;
  double r0 = 0.0;
  double r_strike = 0.0;
  double r_dip = 0.0;

  static AcfSpec isotropic(AcfKind kind, double r0) { return {kind, r0, 0.0, 0.0}; }
  static AcfSpec anisotropic(AcfKind kind, double r_strike, double r_dip) {
    return {kind, 0.0, r_strike, r_dip};
  }
  bool is_anisotropic() const { return r0 <= 0.0; }
};

/// corr(r) for one scaled distance r / length.
double acf_value(AcfKind kind, double scaled_distance);

/// mu_i = c * tau(depth_i) with c chosen so the moment magnitude equals `target_mw`.
Eigen::VectorXd mean_slip(const FaultModel& fault, const TaperSpec& taper, double target_mw,
                          const MomentSpec& moment = {});

Eigen::MatrixXd correlation_matrix(const FaultModel& fault, const AcfSpec& acf);

/// C_hat_ij = alpha^2 mu_i mu_j C_ij.
Eigen::MatrixXd scale_covariance(const Eigen::MatrixXd& correlation, const Eigen::VectorXd& mean,
                                 double alpha);

struct GaussianSpace {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

/// Mean and covariance of the Gaussian g such that exp(g) has the given
/// lognormal moments.
GaussianSpace gaussian_params_for_lognormal(const Eigen::VectorXd& mean,
                                            const Eigen::MatrixXd& covariance);

/// Forward map: moments of exp(g) for g ~ N(mean, covariance).
GaussianSpace lognormal_moments(const Eigen::VectorXd& gaussian_mean,
                                const Eigen::MatrixXd& gaussian_covariance);

enum class DistributionKind { gaussian, lognormal };

DistributionKind parse_distribution_kind(std::string_view name);
std::string_view to_string(DistributionKind kind);

struct SlipDistribution {
  DistributionKind kind = DistributionKind::gaussian;
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  double alpha = 0.0;
  double mean_scalar = 0.0;  // c in mu = c * tau
  Eigen::VectorXd taper;
  std::optional<GaussianSpace> gaussian;  // lognormal only

  /// Matrix to eigendecompose: C_hat for Gaussian fields, C_hat^g for lognormal.
  const Eigen::MatrixXd& expansion_covariance() const;
  const Eigen::VectorXd& expansion_mean() const;
};

SlipDistribution make_slip_distribution(const FaultModel& fault, const TaperSpec& taper,
                                        const AcfSpec& acf, double alpha, DistributionKind kind,
                                        double target_mw, const MomentSpec& moment = {});

}  // namespace slipgen
