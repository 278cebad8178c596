#pragma once

#include <cstdint>

#include "qimg/common.hpp"

namespace qimg {

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Counter-based random stream keyed by (seed, stream, index). Every pixel or
// trial gets its own stream, so results never depend on evaluation order and
// are reproducible bit for bit from the key alone.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
      : state_(mix64(mix64(mix64(seed) ^ stream) ^ index)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in the open interval (0, 1), 53-bit resolution.
  double next_open() {
    std::uint64_t u = next_u64() >> 11;
    return (static_cast<double>(u) + 0.5) * 0x1p-53;
  }

  // Standard normal via Box-Muller. Two uniforms per draw, fixed order.
  double next_normal() {
    double u1 = next_open();
    double u2 = next_open();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace qimg
