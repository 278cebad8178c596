#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qimg/phase_image.hpp"

namespace qimg {

using Amp = std::complex<double>;

struct StateVector {
  std::vector<Amp> amps;

  std::size_t dim() const { return amps.size(); }
  double norm() const;
};

// Diagonal operator: entry k is e^{i angle[k]}. Image-synthesis operators
// keep the first half of the angles at zero (the identity block acting on
// the |0> branch).
struct DiagonalUnitary {
  std::vector<double> angles;

  std::size_t dim() const { return angles.size(); }
};

struct GateTrace {
  std::size_t hadamard_count = 0;
  std::size_t controlled_rotation_count = 0;
};

struct PreparedState {
  StateVector state;
  GateTrace trace;
};

// Builds the phase-encoded image state gate by gate: one Hadamard per qubit
// (2n+1 of them), then one controlled phase rotation per pixel. The grey
// qubit is the most significant index, so
//   amps[j]          = 1/(2^n sqrt 2)
//   amps[2^{2n} + j] = e^{i theta_j}/(2^n sqrt 2).
PreparedState prepare_image_state(const PhaseImage& img);

// Amplitude-encoded reference variant: coordinate register gets Hadamards,
// then each pixel applies a controlled Ry(2 beta_j) to the grey qubit,
// giving (1/2^n) sum_j (cos beta_j |0> + sin beta_j |1>) |j>. Angles may
// close the interval: beta_j in [0, pi/2].
StateVector prepare_frqi_angle_state(const PhaseImage& angles);

// Collapses the uniform |0> branch to one reference basis state of zero
// phase: dim 2^{2n+1} -> d = 2^{2n}+1, output (1/sqrt d)(|0> + sum_j
// e^{i theta_j}|j+1>). Requires the |0>-branch amplitudes equal within 1e-10.
StateVector reindex_to_mpe_form(const StateVector& state);

StateVector apply_diagonal(const DiagonalUnitary& u, const StateVector& state);

// Noiseless phase readout: theta_j = arg(amps[2^{2n}+j]) - arg(amps[j]),
// wrapped to [0, 2pi). Exact inverse of prepare_image_state.
PhaseImage extract_phases_exact(const StateVector& state);

}  // namespace qimg
