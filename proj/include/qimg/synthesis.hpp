#pragma once

#include <cstdint>
#include <optional>

#include "qimg/analysis.hpp"
#include "qimg/mpe.hpp"
#include "qimg/statevec.hpp"

namespace qimg {

enum class OperatorKind { Corrected, Naive };

const char* operator_kind_name(OperatorKind kind);

// Overflow-controlled rotation operator: identity on the |0> branch,
// angle[2^{2n}+j] = squash(theta'_j + phi'_j) - phi'_j on the grey branch.
DiagonalUnitary build_corrected_operator(const PhaseEstimate& embedder_est,
                                         const PhaseEstimate& carrier_est,
                                         int n);

// Plain accumulation operator: angle[2^{2n}+j] = theta'_j. No overflow
// control; kept as the comparison baseline.
DiagonalUnitary build_naive_operator(const PhaseEstimate& embedder_est, int n);

struct SynthesisRun {
  PhaseImage carrier;
  PhaseImage embedder;
  std::optional<PhaseEstimate> carrier_estimate;  // absent for the naive kind
  PhaseEstimate embedder_estimate;
  OperatorKind operator_kind = OperatorKind::Corrected;
  StateVector result_state;
  PhaseImage result_image;  // raw synthesized phases, wrapped to (-pi, pi]
  MetricsReport metrics;
};

// Full pipeline: estimate the embedder (and the carrier for the corrected
// kind), build the operator, prepare the carrier state, apply, extract.
// n1 is the carrier resource, n2 the embedder resource. Deterministic in
// (config, seed); the seeded corrected path also fills the uncertainty
// block from dedicated 4096-draw residual streams.
SynthesisRun synthesize(const PhaseImage& carrier, const PhaseImage& embedder,
                        int n1, int n2, NoiseMode mode, std::uint64_t seed,
                        OperatorKind kind);

// Same pipeline with caller-supplied estimates. Passing the true phases as
// estimates gives the exact-estimate (delta = 0) scenario. No uncertainty
// block is produced on this path.
SynthesisRun synthesize_with_estimates(const PhaseImage& carrier,
                                       const PhaseImage& embedder,
                                       std::optional<PhaseEstimate> carrier_est,
                                       PhaseEstimate embedder_est,
                                       OperatorKind kind);

inline double interval_ratio(const SynthesisRun& run) {
  return interval_ratio(run.metrics.per_pixel);
}

}  // namespace qimg
