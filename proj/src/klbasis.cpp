#include "slipgen/klbasis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <fmt/format.h>

#include "slipgen/errors.hpp"

namespace slipgen {

namespace {

// Largest exponent exp() can take without overflowing a double.
const double kMaxExponent = std::log(std::numeric_limits<double>::max());

}  // namespace

KLBasis::KLBasis(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors, Eigen::VectorXd mean,
                 DistributionKind kind, std::uint64_t fault_hash)
    : eigenvalues_(std::move(eigenvalues)),
      eigenvectors_(std::move(eigenvectors)),
      mean_(std::move(mean)),
      kind_(kind),
      fault_hash_(fault_hash) {
  const Eigen::Index n = eigenvalues_.size();
  if (eigenvectors_.rows() != n || eigenvectors_.cols() != n || mean_.size() != n) {
    throw DomainError("basis dimensions are inconsistent");
  }
}

Eigen::MatrixXd KLBasis::scaled_modes(Eigen::Index first, Eigen::Index count) const {
  if (first < 0 || count < 0 || first + count > size()) {
    throw TruncationError(fmt::format("modes [{}, {}) exceed basis size {}", first, first + count,
                                      size()));
  }
  return eigenvectors_.middleCols(first, count) *
         eigenvalues_.segment(first, count).cwiseSqrt().asDiagonal();
}

KLBasis eigendecompose(const Eigen::MatrixXd& covariance, Eigen::VectorXd mean,
                       DistributionKind kind, std::uint64_t fault_hash) {
  const Eigen::Index n = covariance.rows();
  if (covariance.cols() != n || n == 0) throw DomainError("covariance must be square and non-empty");
  if (mean.size() != n) throw DomainError("mean length does not match covariance");

  const Eigen::MatrixXd sym = 0.5 * (covariance + covariance.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");

  const Eigen::VectorXd& raw_values = solver.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return raw_values[a] > raw_values[b]; });

  const double top = std::max(raw_values[order.front()], 0.0);
  Eigen::VectorXd values(n);
  Eigen::MatrixXd vectors(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    double lambda = raw_values[src];
    if (lambda < 0.0) {
      if (lambda < -1e-8 * top) {
        throw NotPositiveSemidefiniteError(fmt::format(
            "eigenvalue {} = {} is significantly negative (lambda_0 = {})", k, lambda, top));
      }
      lambda = 0.0;
    }
    values[k] = lambda;
    Eigen::VectorXd v = solver.eigenvectors().col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0.0) v = -v;
    vectors.col(k) = v;
  }
  return KLBasis(std::move(values), std::move(vectors), std::move(mean), kind, fault_hash);
}

KLBasis eigendecompose(const SlipDistribution& distribution, std::uint64_t fault_hash) {
  return eigendecompose(distribution.expansion_covariance(), distribution.expansion_mean(),
                        distribution.kind, fault_hash);
}

ActiveModes active_modes(std::size_t m, bool skip_mode0, Eigen::Index n) {
  if (m > static_cast<std::size_t>(n)) {
    throw TruncationError(fmt::format("truncation m = {} exceeds basis size {}", m, n));
  }
  const auto mm = static_cast<Eigen::Index>(m);
  if (skip_mode0) return {1, std::min(mm, n - 1)};
  return {0, mm};
}

Eigen::VectorXd mode_coefficients(const Eigen::VectorXd& draws, std::size_t m, bool skip_mode0,
                                  Eigen::Index n) {
  const ActiveModes active = active_modes(m, skip_mode0, n);
  if (draws.size() < active.count) {
    throw DomainError(
        fmt::format("need {} coefficients for {} active modes, got {}", active.count, m,
                    draws.size()));
  }
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  z.segment(active.first, active.count) = draws.head(active.count);
  return z;
}

namespace {

Eigen::VectorXd active_z(const KLBasis& basis, const Eigen::VectorXd& z, const ActiveModes& act) {
  if (z.size() > basis.size()) {
    throw DomainError(fmt::format("coefficient vector has {} entries for a basis of size {}",
                                  z.size(), basis.size()));
  }
  Eigen::VectorXd full = Eigen::VectorXd::Zero(basis.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(basis.size());
  full.head(z.size()) = z;
  out.segment(act.first, act.count) = full.segment(act.first, act.count);
  return out;
}

}  // namespace

Realization realize_gaussian(const KLBasis& basis, const Eigen::VectorXd& z, std::size_t m,
                             bool skip_mode0) {
  if (basis.kind() != DistributionKind::gaussian) {
    throw UnsupportedDistributionError("realize_gaussian needs a Gaussian basis");
  }
  const ActiveModes act = active_modes(m, skip_mode0, basis.size());
  Realization r;
  r.z = active_z(basis, z, act);
  r.m = m;
  r.skip_mode0 = skip_mode0;
  r.slip = basis.mean() +
           basis.scaled_modes(act.first, act.count) * r.z.segment(act.first, act.count);
  return r;
}

Realization realize_lognormal(const KLBasis& basis, const Eigen::VectorXd& z, std::size_t m,
                              const Eigen::VectorXd& taper, const FaultModel& fault,
                              double target_mw, const MomentSpec& moment) {
  if (basis.kind() != DistributionKind::lognormal) {
    throw UnsupportedDistributionError("realize_lognormal needs a lognormal basis");
  }
  if (taper.size() != basis.size() || static_cast<Eigen::Index>(fault.size()) != basis.size()) {
    throw DomainError("taper/fault size does not match the basis");
  }
  if (!(taper.maxCoeff() > 0.0)) throw DegenerateTaperError("taper vanishes on every patch");
  const ActiveModes act = active_modes(m, true, basis.size());
  Realization r;
  r.z = active_z(basis, z, act);
  r.m = m;
  r.skip_mode0 = true;
  const Eigen::VectorXd exponent =
      basis.scaled_modes(act.first, act.count) * r.z.segment(act.first, act.count);
  const double max_exp = exponent.size() ? exponent.maxCoeff() : 0.0;
  if (!(max_exp < kMaxExponent)) {
    throw SaturationError(fmt::format("lognormal exponent {} overflows exp()", max_exp), max_exp);
  }
  const Eigen::VectorXd raw = taper.cwiseProduct(exponent.array().exp().matrix());
  r.slip = rescale_to_magnitude(fault, raw, target_mw, moment);
  r.mw = moment_magnitude(seismic_moment(fault, r.slip, moment).value);
  return r;
}

}  // namespace slipgen
