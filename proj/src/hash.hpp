#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string_view>

namespace slipgen::detail {

// FNV-1a, 64-bit. Used for cache keys only, so stability across builds is
// what matters, not distribution quality.
class Fnv1a {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001b3ULL;
    }
  }
  void add(double v) {
    if (v == 0.0) v = 0.0;  // fold -0.0
    bytes(&v, sizeof v);
  }
  void add(std::uint64_t v) { bytes(&v, sizeof v); }
  void add(std::string_view s) {
    add(static_cast<std::uint64_t>(s.size()));
    bytes(s.data(), s.size());
  }
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace slipgen::detail
