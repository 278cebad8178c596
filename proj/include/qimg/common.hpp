#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qimg {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = kPi / 2.0;
inline constexpr double kTwoPi = 2.0 * kPi;

// Guard band keeping encoded phases strictly inside (0, pi/2).
inline constexpr double kDefaultEpsilon = 0.01;

// Largest supported image exponent. A 2^n x 2^n image needs a 2^(2n+1)
// dimensional statevector and the brute-force oracles have to stay cheap.
inline constexpr int kMaxImageExponent = 6;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResourceCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Wraps an angle into [0, 2pi).
inline double wrap_two_pi(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// Wraps an angle into (-pi, pi].
inline double wrap_pi(double x) {
  double r = wrap_two_pi(x);
  return r > kPi ? r - kTwoPi : r;
}

// The overflow-control map: (pi/2) tanh, taking phase sums from (0, pi)
// into (0, pi/2). Shared by operator construction and ratio analysis.
inline double squash(double x) { return kHalfPi * std::tanh(x); }

// Compensated accumulator so aggregate metrics do not depend on
// summation order beyond the deterministic loop used here.
class KahanSum {
 public:
  void add(double x) {
    double y = x - carry_;
    double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace qimg
