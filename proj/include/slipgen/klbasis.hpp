#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "slipgen/covariance.hpp"
#include "slipgen/geometry.hpp"
#include "slipgen/moment.hpp"

namespace slipgen {

/// Eigenpairs of a covariance matrix, eigenvalues descending, with the mean
/// field the expansion is built around (mu for Gaussian slip, mu^g for lognormal).
class KLBasis {
 public:
  KLBasis(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors, Eigen::VectorXd mean,
          DistributionKind kind, std::uint64_t fault_hash = 0);

  Eigen::Index size() const { return eigenvalues_.size(); }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  DistributionKind kind() const { return kind_; }
  std::uint64_t fault_hash() const { return fault_hash_; }

  /// Columns sqrt(lambda_k) v_k for k in [first, first + count).
  Eigen::MatrixXd scaled_modes(Eigen::Index first, Eigen::Index count) const;

 private:
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
  Eigen::VectorXd mean_;
  DistributionKind kind_;
  std::uint64_t fault_hash_;
};

/// Symmetrizes `covariance`, then eigendecomposes it. Eigenvalues below
/// -1e-8 * lambda_0 raise NotPositiveSemidefiniteError; smaller negatives clamp to 0.
/// Each eigenvector is signed so that its largest-magnitude entry is positive.
KLBasis eigendecompose(const Eigen::MatrixXd& covariance, Eigen::VectorXd mean,
                       DistributionKind kind, std::uint64_t fault_hash = 0);

KLBasis eigendecompose(const SlipDistribution& distribution, std::uint64_t fault_hash = 0);

/// Mode range used by an m-term expansion: modes 1..m when mode 0 is skipped
/// (capped at N-1), otherwise modes 0..m-1. Throws TruncationError for m > N.
struct ActiveModes {
  Eigen::Index first = 0;
  Eigen::Index count = 0;
};
ActiveModes active_modes(std::size_t m, bool skip_mode0, Eigen::Index n);

/// Places `draws` (one deviate per active mode, in mode order) into a
/// mode-indexed coefficient vector of length n. Extra draws are ignored.
Eigen::VectorXd mode_coefficients(const Eigen::VectorXd& draws, std::size_t m, bool skip_mode0,
                                  Eigen::Index n);

struct SeedInfo {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t draw_index = 0;
};

struct Realization {
  Eigen::VectorXd z;  // mode-indexed, zero outside the active modes
  std::size_t m = 0;
  bool skip_mode0 = true;
  Eigen::VectorXd slip;
  std::optional<double> mw;
  std::optional<SeedInfo> seed_info;
};

/// slip = mean + sum over active modes of z_k sqrt(lambda_k) v_k.
/// `z` is mode-indexed; entries past its end count as zero.
Realization realize_gaussian(const KLBasis& basis, const Eigen::VectorXd& z, std::size_t m,
                             bool skip_mode0 = true);

/// slip_i = s * tau_i * exp(sum_{k=1..m} z_k sqrt(lambda_k) v_k,i), with the scalar s
/// fixed so the realization has magnitude `target_mw`. Mode 0 is always skipped.
Realization realize_lognormal(const KLBasis& basis, const Eigen::VectorXd& z, std::size_t m,
                              const Eigen::VectorXd& taper, const FaultModel& fault,
                              double target_mw, const MomentSpec& moment = {});

}  // namespace slipgen
