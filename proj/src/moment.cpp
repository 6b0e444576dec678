#include "slipgen/moment.hpp"

#include <cmath>

#include <fmt/format.h>

#include "slipgen/errors.hpp"

namespace slipgen {

SeismicMoment seismic_moment(const FaultModel& fault, const Eigen::VectorXd& slip,
                             const MomentSpec& spec) {
  if (static_cast<std::size_t>(slip.size()) != fault.size()) {
    throw DomainError(
        fmt::format("slip has {} entries but the fault has {} patches", slip.size(), fault.size()));
  }
  if (!(spec.rigidity > 0.0)) throw DomainError("rigidity must be > 0");
  SeismicMoment out;
  double sum = 0.0;
  for (std::size_t i = 0; i < fault.size(); ++i) {
    const double s = slip[static_cast<Eigen::Index>(i)];
    if (s < 0.0) ++out.negative_patches;
    sum += fault[i].area() * s;
  }
  out.value = spec.rigidity * sum;
  return out;
}

double moment_magnitude(double m0) {
  if (!(m0 > 0.0)) throw DomainError(fmt::format("seismic moment must be > 0 (got {})", m0));
  return 2.0 / 3.0 * (std::log10(m0) - 9.05);
}

double magnitude_to_moment(double mw) { return std::pow(10.0, 1.5 * mw + 9.05); }

Eigen::VectorXd rescale_to_magnitude(const FaultModel& fault, const Eigen::VectorXd& slip,
                                     double target_mw, const MomentSpec& spec) {
  const double current = seismic_moment(fault, slip, spec).value;
  if (!(current > 0.0)) {
    throw DomainError(fmt::format("cannot rescale a slip vector with moment {}", current));
  }
  return slip * (magnitude_to_moment(target_mw) / current);
}

}  // namespace slipgen
