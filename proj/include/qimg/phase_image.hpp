#pragma once

#include <cstdint>
#include <vector>

#include "qimg/common.hpp"

namespace qimg {

// Square 2^n x 2^n grayscale image, row-major, 8 bit.
struct GrayImage {
  int n = 0;
  std::vector<std::uint8_t> pixels;

  int side() const { return 1 << n; }
  std::size_t pixel_count() const { return pixels.size(); }
};

// Phase-valued image: phases[j] is the phase of pixel coordinate j,
// row-major. Encoded images keep every phase strictly inside (0, pi/2);
// that band is enforced at the encoding boundary (make_phase_image,
// state preparation), not by the struct, because synthesized outputs
// legitimately carry raw phases outside it.
struct PhaseImage {
  int n = 0;
  std::vector<double> phases;

  std::size_t pixel_count() const { return phases.size(); }
};

// Validating constructors. Throw ValidationError on a size mismatch or,
// for phase images, a phase outside the open (0, pi/2) band.
GrayImage make_gray_image(int n, std::vector<std::uint8_t> pixels);
PhaseImage make_phase_image(int n, std::vector<double> phases);

// Derives n from image dimensions. Throws ValidationError unless
// width == height == 2^n, and ResourceCapError when n exceeds the cap.
int image_exponent(int width, int height);

double gray_to_phase(std::uint8_t g, double epsilon = kDefaultEpsilon);
std::uint8_t phase_to_gray(double theta, double epsilon = kDefaultEpsilon);

// Reduces an arbitrary finite angle into (0, pi/2]. Values already in
// (0, pi/2] pass through; larger values are taken mod pi/2; negatives wrap
// by 2 pi first. An exact multiple of pi/2 would reduce to 0, which the
// phase band forbids, so it is remapped to the floor value instead.
double restrict_phase(double phi, double floor_eps = kDefaultEpsilon);

struct RestrictedPhase {
  double phase = 0.0;
  bool remapped = false;  // true when the zero-boundary remap fired
};
RestrictedPhase restrict_phase_checked(double phi,
                                       double floor_eps = kDefaultEpsilon);

PhaseImage encode_image(const GrayImage& img, double epsilon = kDefaultEpsilon);
GrayImage decode_image(const PhaseImage& img, double epsilon = kDefaultEpsilon);

}  // namespace qimg
