#include "qimg/statevec.hpp"

#include <cmath>
#include <string>

#include "qimg/common.hpp"

namespace qimg {

namespace {

constexpr double kStructureTol = 1e-10;

void apply_hadamard(StateVector& s, int qubit) {
  const std::size_t step = std::size_t{1} << qubit;
  const double inv = 1.0 / std::sqrt(2.0);
  for (std::size_t base = 0; base < s.dim(); base += 2 * step) {
    for (std::size_t k = 0; k < step; ++k) {
      const Amp a = s.amps[base + k];
      const Amp b = s.amps[base + k + step];
      s.amps[base + k] = (a + b) * inv;
      s.amps[base + k + step] = (a - b) * inv;
    }
  }
}

// Controlled Ry(2 beta) on the grey qubit, control: coordinate == j.
// The grey branch of |j> is still empty during preparation, so the
// rotation reduces to the (cos, sin) split of the |0> amplitude.
void apply_controlled_ry(StateVector& s, std::size_t pixels, std::size_t j,
                         double beta) {
  const Amp a = s.amps[j];
  s.amps[j] = std::cos(beta) * a;
  s.amps[pixels + j] = std::sin(beta) * a;
}

// Checks dim == 2^{2n+1} and returns the pixel count 2^{2n}.
std::size_t image_half_dim(const StateVector& s, const char* who) {
  std::size_t d = s.dim();
  if (d < 2) throw ValidationError(std::string(who) + ": state too small");
  int bits = 0;
  while ((std::size_t{1} << bits) < d) ++bits;
  if ((std::size_t{1} << bits) != d || bits % 2 == 0) {
    throw ValidationError(std::string(who) +
                          ": dimension is not 2^(2n+1), got " +
                          std::to_string(d));
  }
  return d / 2;
}

}  // namespace

double StateVector::norm() const {
  KahanSum s;
  for (const Amp& a : amps) s.add(std::norm(a));
  return std::sqrt(s.value());
}

PreparedState prepare_image_state(const PhaseImage& img) {
  if (img.n < 0) throw ValidationError("image exponent must be non-negative");
  if (img.n > kMaxImageExponent) {
    throw ResourceCapError("image exponent " + std::to_string(img.n) +
                           " exceeds the desk-scale cap of " +
                           std::to_string(kMaxImageExponent));
  }
  const std::size_t pixels = std::size_t{1} << (2 * img.n);
  if (img.phases.size() != pixels) {
    throw ValidationError("phase image has " +
                          std::to_string(img.phases.size()) +
                          " entries, expected " + std::to_string(pixels));
  }
  for (double t : img.phases) {
    if (!(t > 0.0) || !(t < kHalfPi)) {
      throw ValidationError("pixel phase " + std::to_string(t) +
                            " outside the open band (0, pi/2)");
    }
  }

  PreparedState out;
  out.state.amps.assign(2 * pixels, Amp{0.0, 0.0});
  out.state.amps[0] = Amp{1.0, 0.0};

  const int qubits = 2 * img.n + 1;
  for (int q = 0; q < qubits; ++q) {
    apply_hadamard(out.state, q);
    ++out.trace.hadamard_count;
  }
  // One controlled rotation per pixel: phase e^{i theta_j} on |1>|j>.
  for (std::size_t j = 0; j < pixels; ++j) {
    out.state.amps[pixels + j] *= std::polar(1.0, img.phases[j]);
    ++out.trace.controlled_rotation_count;
  }
  return out;
}

StateVector prepare_frqi_angle_state(const PhaseImage& angles) {
  if (angles.n < 0) throw ValidationError("image exponent must be non-negative");
  if (angles.n > kMaxImageExponent) {
    throw ResourceCapError("image exponent " + std::to_string(angles.n) +
                           " exceeds the desk-scale cap of " +
                           std::to_string(kMaxImageExponent));
  }
  const std::size_t pixels = std::size_t{1} << (2 * angles.n);
  if (angles.phases.size() != pixels) {
    throw ValidationError("angle list has " +
                          std::to_string(angles.phases.size()) +
                          " entries, expected " + std::to_string(pixels));
  }
  for (double b : angles.phases) {
    if (!(b >= 0.0) || !(b <= kHalfPi)) {
      throw ValidationError("rotation angle " + std::to_string(b) +
                            " outside [0, pi/2]");
    }
  }

  StateVector s;
  s.amps.assign(2 * pixels, Amp{0.0, 0.0});
  s.amps[0] = Amp{1.0, 0.0};
  for (int q = 0; q < 2 * angles.n; ++q) apply_hadamard(s, q);
  for (std::size_t j = 0; j < pixels; ++j) {
    apply_controlled_ry(s, pixels, j, angles.phases[j]);
  }
  return s;
}

StateVector reindex_to_mpe_form(const StateVector& state) {
  const std::size_t pixels = image_half_dim(state, "reindex_to_mpe_form");
  const Amp ref = state.amps[0];
  if (std::abs(ref) < kStructureTol) {
    throw ValidationError("reindex_to_mpe_form: vanishing |0>-branch amplitude");
  }
  for (std::size_t j = 1; j < pixels; ++j) {
    if (std::abs(state.amps[j] - ref) > kStructureTol) {
      throw ValidationError(
          "reindex_to_mpe_form: |0>-branch amplitudes differ at index " +
          std::to_string(j));
    }
  }

  const std::size_t d = pixels + 1;
  const double mag = 1.0 / std::sqrt(static_cast<double>(d));
  StateVector out;
  out.amps.resize(d);
  out.amps[0] = Amp{mag, 0.0};
  for (std::size_t j = 0; j < pixels; ++j) {
    const double rel = std::arg(state.amps[pixels + j]) - std::arg(state.amps[j]);
    out.amps[1 + j] = std::polar(mag, rel);
  }
  return out;
}

StateVector apply_diagonal(const DiagonalUnitary& u, const StateVector& state) {
  if (u.dim() != state.dim()) {
    throw ValidationError("apply_diagonal: operator dim " +
                          std::to_string(u.dim()) + " vs state dim " +
                          std::to_string(state.dim()));
  }
  StateVector out = state;
  for (std::size_t k = 0; k < out.dim(); ++k) {
    out.amps[k] *= std::polar(1.0, u.angles[k]);
  }
  return out;
}

PhaseImage extract_phases_exact(const StateVector& state) {
  const std::size_t pixels = image_half_dim(state, "extract_phases_exact");
  const double m0 = std::abs(state.amps[0]);
  for (std::size_t k = 1; k < state.dim(); ++k) {
    if (std::abs(std::abs(state.amps[k]) - m0) > kStructureTol) {
      throw ValidationError(
          "extract_phases_exact: amplitude moduli are not uniform");
    }
  }
  if (m0 < kStructureTol) {
    throw ValidationError("extract_phases_exact: vanishing amplitudes");
  }

  int n = 0;
  while ((std::size_t{1} << (2 * n)) < pixels) ++n;
  PhaseImage img;
  img.n = n;
  img.phases.resize(pixels);
  for (std::size_t j = 0; j < pixels; ++j) {
    img.phases[j] =
        wrap_two_pi(std::arg(state.amps[pixels + j]) - std::arg(state.amps[j]));
  }
  return img;
}

}  // namespace qimg
