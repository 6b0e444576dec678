#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace slipgen {

/// Counter-based source of standard normal deviates: the vector for a given
/// (seed, stream, draw index) is fixed, independent of call order or of which
/// worker asks for it. Longer requests extend shorter ones (prefix property).
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  Eigen::VectorXd draw(std::uint64_t index, Eigen::Index n) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace slipgen
