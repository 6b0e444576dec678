#include "slipgen/rng.hpp"

#include <random>

namespace slipgen {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Eigen::VectorXd NormalStream::draw(std::uint64_t index, Eigen::Index n) const {
  Eigen::VectorXd z(n);
  if (n == 0) return z;
  const std::uint64_t a = splitmix64(seed_);
  const std::uint64_t b = splitmix64(a ^ stream_);
  const std::uint64_t c = splitmix64(b ^ index);
  std::seed_seq seq{static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(stream_)};
  std::mt19937_64 engine(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index k = 0; k < n; ++k) z[k] = normal(engine);
  return z;
}

}  // namespace slipgen
