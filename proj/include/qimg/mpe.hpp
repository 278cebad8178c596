#pragma once

#include <cstdint>
#include <vector>

#include "qimg/phase_image.hpp"

namespace qimg {

enum class NoiseMode { Analytic, PovmOracle };

const char* noise_mode_name(NoiseMode mode);

struct PhaseEstimate {
  std::vector<double> estimates;  // post-restriction, each in (0, pi/2]
  int resource = 0;               // copy count N per phase
  NoiseMode mode = NoiseMode::Analytic;
  std::uint64_t seed = 0;
};

struct VarianceStats {
  double circular_variance = 0.0;  // Holevo variance
  double delta_n = 0.0;            // sqrt(N)/2
  double product = 0.0;            // sqrt(circular_variance) * delta_n
};

// Number-operator spread of the N-qubit uniform probe: binomial(N, 1/2)
// has variance N/4.
inline double number_spread(int resource) {
  return std::sqrt(static_cast<double>(resource)) / 2.0;
}

// Outcome density of the canonical covariant phase measurement on the
// binomially weighted symmetric probe:
//   p(delta) = (1/2pi) |sum_{m=0}^{N} c_m e^{i m delta}|^2,
//   c_m = sqrt(binomial(N, m) / 2^N).
double povm_density(int resource, double delta);

// Inverse-CDF table for povm_density over (-pi, pi]. The density is a
// degree-N trigonometric polynomial, so the default 2^14-point grid
// resolves it fully for the small resources this oracle is meant for.
class PovmSampler {
 public:
  explicit PovmSampler(int resource, int grid_bits = 14);

  // Maps a uniform u in (0, 1) to an outcome in (-pi, pi].
  double sample(double u) const;

 private:
  std::vector<double> grid_;
  std::vector<double> cdf_;
};

// Resources beyond this would alias on the sampler grid; the analytic mode
// covers large N.
inline constexpr int kMaxPovmResource = 4096;

// One simulated reading of a true phase: theta + measurement error, wrapped
// to (-pi, pi]. Fully determined by (seed, stream, index). A prebuilt
// sampler can be passed to amortize the table across calls; it must match
// the resource.
double sample_reading(double theta, int resource, NoiseMode mode,
                      std::uint64_t seed, std::uint64_t stream,
                      std::uint64_t index, const PovmSampler* table = nullptr);

std::vector<double> sample_readings(double theta, int resource, NoiseMode mode,
                                    std::uint64_t seed, std::uint64_t stream,
                                    std::size_t count);

// Estimates every pixel phase independently: one reading per pixel, then
// restrict_phase. Deterministic per (seed, pixel index).
PhaseEstimate estimate_phases(const PhaseImage& img, int resource,
                              NoiseMode mode, std::uint64_t seed,
                              std::uint64_t stream = 0);

// Holevo circular variance D{e^{i phi}} / |E{e^{i phi}}|^2.
double holevo_variance(const std::vector<double>& samples);

VarianceStats variance_stats(const std::vector<double>& samples, int resource);

// Estimation fidelity for d-dimensional multiple phase estimation, fed with
// the residuals r_j = est_j - true_j (both lists have length d-1):
//   F = (1/d^2) [d + 2 sum_j cos r_j + 2 sum_{j>k} cos(r_j - r_k)].
double mpe_fidelity(const std::vector<double>& true_phases,
                    const std::vector<double>& est_phases, std::size_t d);

}  // namespace qimg
