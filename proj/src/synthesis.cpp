#include "qimg/synthesis.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "qimg/common.hpp"

namespace qimg {

namespace {

void check_estimate(const PhaseEstimate& est, std::size_t pixels,
                    const char* name) {
  if (est.estimates.size() != pixels) {
    throw ValidationError(std::string(name) + " estimate has " +
                          std::to_string(est.estimates.size()) +
                          " entries, expected " + std::to_string(pixels));
  }
  for (double p : est.estimates) {
    if (!(p > 0.0) || !(p <= kHalfPi)) {
      throw ValidationError(std::string(name) + " estimate " +
                            std::to_string(p) + " outside (0, pi/2]");
    }
  }
}

std::size_t pixel_count_for(int n) {
  if (n < 0) throw ValidationError("image exponent must be non-negative");
  if (n > kMaxImageExponent) {
    throw ResourceCapError("image exponent " + std::to_string(n) +
                           " exceeds the desk-scale cap of " +
                           std::to_string(kMaxImageExponent));
  }
  return std::size_t{1} << (2 * n);
}

// Sample count for the dedicated uncertainty residual streams; has to be
// >= the uncertainty_report minimum regardless of image size.
constexpr std::size_t kUncertaintyDraws = 4096;
constexpr std::uint64_t kEmbedderStream = 0;
constexpr std::uint64_t kCarrierStream = 1;
constexpr std::uint64_t kUncertaintyPhiStream = 2;
constexpr std::uint64_t kUncertaintyThetaStream = 3;

}  // namespace

const char* operator_kind_name(OperatorKind kind) {
  return kind == OperatorKind::Corrected ? "corrected" : "naive";
}

DiagonalUnitary build_corrected_operator(const PhaseEstimate& embedder_est,
                                         const PhaseEstimate& carrier_est,
                                         int n) {
  const std::size_t pixels = pixel_count_for(n);
  check_estimate(embedder_est, pixels, "embedder");
  check_estimate(carrier_est, pixels, "carrier");

  DiagonalUnitary u;
  u.angles.assign(2 * pixels, 0.0);
  for (std::size_t j = 0; j < pixels; ++j) {
    const double theta_e = embedder_est.estimates[j];
    const double phi_e = carrier_est.estimates[j];
    u.angles[pixels + j] = squash(theta_e + phi_e) - phi_e;
  }
  return u;
}

DiagonalUnitary build_naive_operator(const PhaseEstimate& embedder_est, int n) {
  const std::size_t pixels = pixel_count_for(n);
  check_estimate(embedder_est, pixels, "embedder");

  DiagonalUnitary u;
  u.angles.assign(2 * pixels, 0.0);
  for (std::size_t j = 0; j < pixels; ++j) {
    u.angles[pixels + j] = embedder_est.estimates[j];
  }
  return u;
}

SynthesisRun synthesize_with_estimates(const PhaseImage& carrier,
                                       const PhaseImage& embedder,
                                       std::optional<PhaseEstimate> carrier_est,
                                       PhaseEstimate embedder_est,
                                       OperatorKind kind) {
  if (carrier.n != embedder.n) {
    throw ValidationError("carrier and embedder exponents differ: " +
                          std::to_string(carrier.n) + " vs " +
                          std::to_string(embedder.n));
  }
  const std::size_t pixels = pixel_count_for(carrier.n);
  if (carrier.phases.size() != pixels || embedder.phases.size() != pixels) {
    throw ValidationError("image pixel counts do not match the exponent");
  }
  if (kind == OperatorKind::Corrected && !carrier_est.has_value()) {
    throw ValidationError("corrected operator needs a carrier estimate");
  }

  SynthesisRun run;
  run.carrier = carrier;
  run.embedder = embedder;
  run.operator_kind = kind;
  run.embedder_estimate = std::move(embedder_est);
  run.carrier_estimate = std::move(carrier_est);

  const DiagonalUnitary op =
      kind == OperatorKind::Corrected
          ? build_corrected_operator(run.embedder_estimate,
                                     *run.carrier_estimate, carrier.n)
          : build_naive_operator(run.embedder_estimate, carrier.n);

  const PreparedState prep = prepare_image_state(carrier);
  run.result_state = apply_diagonal(op, prep.state);

  const PhaseImage raw = extract_phases_exact(run.result_state);
  run.result_image.n = carrier.n;
  run.result_image.phases.resize(pixels);

  run.metrics.per_pixel.resize(pixels);
  for (std::size_t j = 0; j < pixels; ++j) {
    const double out = wrap_pi(raw.phases[j]);
    run.result_image.phases[j] = out;

    PixelRecord& rec = run.metrics.per_pixel[j];
    rec.pixel = j;
    rec.output_phase = out;
    rec.overflow_class = classify_overflow(out);
    if (kind == OperatorKind::Corrected) {
      rec.input_sum = run.embedder_estimate.estimates[j] +
                      run.carrier_estimate->estimates[j];
      rec.delta = carrier.phases[j] - run.carrier_estimate->estimates[j];
    } else {
      rec.input_sum = run.embedder_estimate.estimates[j] + carrier.phases[j];
      rec.delta.reset();
    }
    rec.pointwise_ratio = out / rec.input_sum;
  }

  run.metrics.aggregate = aggregate_records(run.metrics.per_pixel);

  // Fidelity of the estimation stage whose residual feeds the result:
  // the carrier estimate for the corrected kind, the embedder estimate
  // for the naive kind.
  const std::size_t d = pixels + 1;
  if (kind == OperatorKind::Corrected) {
    run.metrics.aggregate.fidelity =
        mpe_fidelity(carrier.phases, run.carrier_estimate->estimates, d);
  } else {
    run.metrics.aggregate.fidelity =
        mpe_fidelity(embedder.phases, run.embedder_estimate.estimates, d);
  }
  return run;
}

SynthesisRun synthesize(const PhaseImage& carrier, const PhaseImage& embedder,
                        int n1, int n2, NoiseMode mode, std::uint64_t seed,
                        OperatorKind kind) {
  if (n1 < 1 || n2 < 1) {
    throw ValidationError("estimation resources must be >= 1");
  }

  PhaseEstimate emb = estimate_phases(embedder, n2, mode, seed, kEmbedderStream);
  std::optional<PhaseEstimate> car;
  if (kind == OperatorKind::Corrected) {
    car = estimate_phases(carrier, n1, mode, seed, kCarrierStream);
  }

  SynthesisRun run = synthesize_with_estimates(carrier, embedder,
                                               std::move(car), std::move(emb),
                                               kind);

  if (kind == OperatorKind::Corrected) {
    const auto phi = sample_readings(0.0, n1, mode, seed,
                                     kUncertaintyPhiStream, kUncertaintyDraws);
    const auto theta = sample_readings(0.0, n2, mode, seed,
                                       kUncertaintyThetaStream,
                                       kUncertaintyDraws);
    run.metrics.aggregate.uncertainty = uncertainty_report(phi, theta, n1, n2);
  }
  return run;
}

}  // namespace qimg
