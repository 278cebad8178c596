#include "qimg/phase_image.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace qimg {

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < kPi / 8.0)) {
    throw ValidationError("epsilon must lie in (0, pi/8), got " +
                          std::to_string(epsilon));
  }
}

// Round to nearest, ties to even. Input is expected in [0, 255] already.
int round_half_even(double x) {
  double f = std::floor(x);
  double frac = x - f;
  if (frac > 0.5) return static_cast<int>(f) + 1;
  if (frac < 0.5) return static_cast<int>(f);
  int lo = static_cast<int>(f);
  return (lo % 2 == 0) ? lo : lo + 1;
}

}  // namespace

GrayImage make_gray_image(int n, std::vector<std::uint8_t> pixels) {
  if (n < 0) throw ValidationError("image exponent must be non-negative");
  if (n > kMaxImageExponent) {
    throw ResourceCapError("image exponent " + std::to_string(n) +
                           " exceeds the desk-scale cap of " +
                           std::to_string(kMaxImageExponent));
  }
  const std::size_t expect = std::size_t{1} << (2 * n);
  if (pixels.size() != expect) {
    throw ValidationError("gray image with n=" + std::to_string(n) +
                          " needs " + std::to_string(expect) +
                          " pixels, got " + std::to_string(pixels.size()));
  }
  return GrayImage{n, std::move(pixels)};
}

PhaseImage make_phase_image(int n, std::vector<double> phases) {
  if (n < 0) throw ValidationError("image exponent must be non-negative");
  if (n > kMaxImageExponent) {
    throw ResourceCapError("image exponent " + std::to_string(n) +
                           " exceeds the desk-scale cap of " +
                           std::to_string(kMaxImageExponent));
  }
  const std::size_t expect = std::size_t{1} << (2 * n);
  if (phases.size() != expect) {
    throw ValidationError("phase image with n=" + std::to_string(n) +
                          " needs " + std::to_string(expect) +
                          " phases, got " + std::to_string(phases.size()));
  }
  for (double t : phases) {
    if (!(t > 0.0) || !(t < kHalfPi)) {
      throw ValidationError("pixel phase " + std::to_string(t) +
                            " outside the open band (0, pi/2)");
    }
  }
  return PhaseImage{n, std::move(phases)};
}

int image_exponent(int width, int height) {
  if (width != height) {
    throw ValidationError("image must be square, got " +
                          std::to_string(width) + "x" +
                          std::to_string(height));
  }
  if (width <= 0 || (width & (width - 1)) != 0) {
    throw ValidationError("image side must be a power of two, got " +
                          std::to_string(width));
  }
  int n = 0;
  while ((1 << n) < width) ++n;
  if (n > kMaxImageExponent) {
    throw ResourceCapError("image side " + std::to_string(width) +
                           " exceeds the desk-scale cap of " +
                           std::to_string(1 << kMaxImageExponent));
  }
  return n;
}

double gray_to_phase(std::uint8_t g, double epsilon) {
  check_epsilon(epsilon);
  return epsilon + (static_cast<double>(g) / 255.0) * (kHalfPi - 2.0 * epsilon);
}

std::uint8_t phase_to_gray(double theta, double epsilon) {
  check_epsilon(epsilon);
  const double lo = epsilon;
  const double hi = kHalfPi - epsilon;
  if (theta < lo) theta = lo;
  if (theta > hi) theta = hi;
  const double g = (theta - lo) / (hi - lo) * 255.0;
  int r = round_half_even(g);
  if (r < 0) r = 0;
  if (r > 255) r = 255;
  return static_cast<std::uint8_t>(r);
}

double restrict_phase(double phi, double floor_eps) {
  return restrict_phase_checked(phi, floor_eps).phase;
}

RestrictedPhase restrict_phase_checked(double phi, double floor_eps) {
  check_epsilon(floor_eps);
  if (!std::isfinite(phi)) throw ValidationError("phase must be finite");
  if (phi <= 0.0) phi = wrap_two_pi(phi);
  if (phi > kHalfPi) phi = std::fmod(phi, kHalfPi);
  if (phi == 0.0) return {floor_eps, true};
  return {phi, false};
}

PhaseImage encode_image(const GrayImage& img, double epsilon) {
  std::vector<double> phases(img.pixel_count());
  for (std::size_t j = 0; j < phases.size(); ++j) {
    phases[j] = gray_to_phase(img.pixels[j], epsilon);
  }
  return make_phase_image(img.n, std::move(phases));
}

GrayImage decode_image(const PhaseImage& img, double epsilon) {
  std::vector<std::uint8_t> pixels(img.pixel_count());
  for (std::size_t j = 0; j < pixels.size(); ++j) {
    pixels[j] = phase_to_gray(img.phases[j], epsilon);
  }
  return GrayImage{img.n, std::move(pixels)};
}

}  // namespace qimg
