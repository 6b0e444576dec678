#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "slipgen/geometry.hpp"

namespace slipgen {

struct MomentSpec {
  double rigidity = 3.55e10;  // Pa
};

struct SeismicMoment {
  double value = 0.0;  // N m
  /// Patches carrying negative slip (possible for Gaussian fields); the
  /// value is still the signed area-weighted sum.
  std::size_t negative_patches = 0;
};

/// M0 = rigidity * sum_i(length_i * width_i * slip_i).
SeismicMoment seismic_moment(const FaultModel& fault, const Eigen::VectorXd& slip,
                             const MomentSpec& spec = {});

/// Mw = 2/3 (log10(M0) - 9.05). Throws DomainError for M0 <= 0.
double moment_magnitude(double m0);

/// Inverse of moment_magnitude.
double magnitude_to_moment(double mw);

/// Returns c * slip such that the moment magnitude equals `target_mw`.
Eigen::VectorXd rescale_to_magnitude(const FaultModel& fault, const Eigen::VectorXd& slip,
                                     double target_mw, const MomentSpec& spec = {});

}  // namespace slipgen
