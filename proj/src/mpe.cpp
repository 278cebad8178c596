#include "qimg/mpe.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "qimg/common.hpp"
#include "qimg/rng.hpp"

namespace qimg {

namespace {

// c_m = sqrt(binomial(N, m) / 2^N), via log-gamma so large N stays finite.
std::vector<double> probe_coefficients(int resource) {
  std::vector<double> c(static_cast<std::size_t>(resource) + 1);
  const double n = static_cast<double>(resource);
  const double log2v = std::log(2.0);
  for (int m = 0; m <= resource; ++m) {
    const double logc2 = std::lgamma(n + 1.0) - std::lgamma(m + 1.0) -
                         std::lgamma(n - m + 1.0) - n * log2v;
    c[static_cast<std::size_t>(m)] = std::exp(0.5 * logc2);
  }
  return c;
}

double density_from_coeffs(const std::vector<double>& c, double delta) {
  // sum_m c_m e^{i m delta}, evaluated with an incremental phasor.
  const std::complex<double> z = std::polar(1.0, delta);
  std::complex<double> zpow{1.0, 0.0};
  std::complex<double> acc{0.0, 0.0};
  for (double cm : c) {
    acc += cm * zpow;
    zpow *= z;
  }
  return std::norm(acc) / kTwoPi;
}

void check_resource(int resource) {
  if (resource < 1) {
    throw ValidationError("resource must be >= 1, got " +
                          std::to_string(resource));
  }
}

}  // namespace

const char* noise_mode_name(NoiseMode mode) {
  return mode == NoiseMode::Analytic ? "analytic" : "povm";
}

double povm_density(int resource, double delta) {
  check_resource(resource);
  return density_from_coeffs(probe_coefficients(resource), delta);
}

PovmSampler::PovmSampler(int resource, int grid_bits) {
  check_resource(resource);
  if (resource > kMaxPovmResource) {
    throw ValidationError(
        "povm oracle supports N <= " + std::to_string(kMaxPovmResource) +
        " (got " + std::to_string(resource) + "); use the analytic mode");
  }
  const std::size_t cells = std::size_t{1} << grid_bits;
  const auto coeffs = probe_coefficients(resource);

  grid_.resize(cells + 1);
  cdf_.resize(cells + 1);
  const double h = kTwoPi / static_cast<double>(cells);
  for (std::size_t i = 0; i <= cells; ++i) {
    grid_[i] = -kPi + h * static_cast<double>(i);
  }
  // Trapezoid CDF. The density is a trig polynomial of degree N well below
  // the grid Nyquist limit, so the total mass is 1 to machine precision;
  // normalize anyway to make the table exactly a CDF.
  cdf_[0] = 0.0;
  double prev = density_from_coeffs(coeffs, grid_[0]);
  KahanSum mass;
  for (std::size_t i = 1; i <= cells; ++i) {
    const double cur = density_from_coeffs(coeffs, grid_[i]);
    mass.add(0.5 * h * (prev + cur));
    cdf_[i] = mass.value();
    prev = cur;
  }
  const double total = cdf_[cells];
  for (double& v : cdf_) v /= total;
  cdf_[cells] = 1.0;
}

double PovmSampler::sample(double u) const {
  if (!(u > 0.0) || !(u < 1.0)) {
    throw ValidationError("sampler input must lie in (0, 1)");
  }
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  std::size_t hi = static_cast<std::size_t>(it - cdf_.begin());
  if (hi == 0) hi = 1;
  if (hi >= cdf_.size()) hi = cdf_.size() - 1;
  const std::size_t lo = hi - 1;
  const double span = cdf_[hi] - cdf_[lo];
  const double t = span > 0.0 ? (u - cdf_[lo]) / span : 0.5;
  return grid_[lo] + t * (grid_[hi] - grid_[lo]);
}

double sample_reading(double theta, int resource, NoiseMode mode,
                      std::uint64_t seed, std::uint64_t stream,
                      std::uint64_t index, const PovmSampler* table) {
  check_resource(resource);
  RandomStream rng(seed, stream, index);
  double err;
  if (mode == NoiseMode::Analytic) {
    const double sigma = 1.0 / std::sqrt(static_cast<double>(resource));
    err = wrap_pi(sigma * rng.next_normal());
  } else {
    if (table != nullptr) {
      err = table->sample(rng.next_open());
    } else {
      PovmSampler local(resource);
      err = local.sample(rng.next_open());
    }
  }
  return wrap_pi(theta + err);
}

std::vector<double> sample_readings(double theta, int resource, NoiseMode mode,
                                    std::uint64_t seed, std::uint64_t stream,
                                    std::size_t count) {
  check_resource(resource);
  std::vector<double> out(count);
  if (mode == NoiseMode::PovmOracle) {
    PovmSampler table(resource);
    for (std::size_t i = 0; i < count; ++i) {
      out[i] = sample_reading(theta, resource, mode, seed, stream, i, &table);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      out[i] = sample_reading(theta, resource, mode, seed, stream, i);
    }
  }
  return out;
}

PhaseEstimate estimate_phases(const PhaseImage& img, int resource,
                              NoiseMode mode, std::uint64_t seed,
                              std::uint64_t stream) {
  check_resource(resource);
  PhaseEstimate est;
  est.resource = resource;
  est.mode = mode;
  est.seed = seed;
  est.estimates.resize(img.pixel_count());

  if (mode == NoiseMode::PovmOracle) {
    PovmSampler table(resource);
    for (std::size_t j = 0; j < img.phases.size(); ++j) {
      const double reading =
          sample_reading(img.phases[j], resource, mode, seed, stream, j, &table);
      est.estimates[j] = restrict_phase(reading);
    }
  } else {
    for (std::size_t j = 0; j < img.phases.size(); ++j) {
      const double reading =
          sample_reading(img.phases[j], resource, mode, seed, stream, j);
      est.estimates[j] = restrict_phase(reading);
    }
  }
  return est;
}

double holevo_variance(const std::vector<double>& samples) {
  if (samples.size() < 2) {
    throw ValidationError("holevo_variance needs at least 2 samples");
  }
  KahanSum re, im;
  for (double phi : samples) {
    re.add(std::cos(phi));
    im.add(std::sin(phi));
  }
  const double inv = 1.0 / static_cast<double>(samples.size());
  const std::complex<double> mean{re.value() * inv, im.value() * inv};
  const double mod = std::abs(mean);
  if (mod <= 1e-9) {
    throw ValidationError(
        "holevo_variance: degenerate distribution (vanishing resultant)");
  }
  KahanSum dev;
  for (double phi : samples) {
    dev.add(std::norm(std::polar(1.0, phi) - mean));
  }
  return dev.value() * inv / (mod * mod);
}

VarianceStats variance_stats(const std::vector<double>& samples, int resource) {
  check_resource(resource);
  VarianceStats v;
  v.circular_variance = holevo_variance(samples);
  v.delta_n = number_spread(resource);
  v.product = std::sqrt(v.circular_variance) * v.delta_n;
  return v;
}

double mpe_fidelity(const std::vector<double>& true_phases,
                    const std::vector<double>& est_phases, std::size_t d) {
  if (d < 2 || true_phases.size() != d - 1 || est_phases.size() != d - 1) {
    throw ValidationError("mpe_fidelity: both phase lists must have d-1 entries");
  }
  std::vector<double> r(d - 1);
  for (std::size_t j = 0; j + 1 < d; ++j) {
    r[j] = est_phases[j] - true_phases[j];
  }
  KahanSum singles;
  for (double rj : r) singles.add(std::cos(rj));
  KahanSum pairs;
  for (std::size_t j = 1; j < r.size(); ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      pairs.add(std::cos(r[j] - r[k]));
    }
  }
  const double dd = static_cast<double>(d);
  return (dd + 2.0 * singles.value() + 2.0 * pairs.value()) / (dd * dd);
}

}  // namespace qimg
