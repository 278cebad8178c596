#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qimg/mpe.hpp"

namespace qimg {

// A synthesized phase is an exception when it leaves (0, pi/2):
// underflow at or below 0, overflow at or above pi/2.
enum class OverflowClass { Underflow, Ok, Overflow };

const char* overflow_class_name(OverflowClass c);

OverflowClass classify_overflow(double phase);

// The pointwise compression quotient (squash(theta_e + phi_e) + delta) over
// (theta_e + phi_e). Tends to pi/2 as the sum vanishes, to 1/2 as it grows;
// the interval ratio below captures the 1/2 limit directly.
double pointwise_ratio(double theta_est, double phi_est, double delta);

struct PixelRecord {
  std::size_t pixel = 0;
  double input_sum = 0.0;             // estimated embedder + carrier phases
  double output_phase = 0.0;          // raw synthesized phase, in (-pi, pi]
  std::optional<double> delta;        // carrier residual; absent for naive runs
  double pointwise_ratio = 0.0;
  OverflowClass overflow_class = OverflowClass::Ok;
};

// Span of outputs over span of input sums. The record overload drops
// exception pixels from both spans. Throws ValidationError when fewer than
// two pixels remain or the input span is degenerate.
double interval_ratio(const std::vector<double>& input_sums,
                      const std::vector<double>& output_phases);
double interval_ratio(const std::vector<PixelRecord>& records);

struct UncertaintyBlock {
  double delta_phi = 0.0;    // carrier phase spread (Holevo std)
  double delta_theta = 0.0;  // embedder phase spread
  double delta_n1 = 0.0;
  double delta_n2 = 0.0;
  double product1 = 0.0;     // delta_phi * delta_n1
  double product2 = 0.0;     // delta_theta * delta_n2
  double joint_lhs = 0.0;    // tanh(product1 + product2) + product1
  double joint_bound = 0.0;  // tanh(1) + 1/2
};

double joint_uncertainty_lhs(double product1, double product2);

inline constexpr double joint_uncertainty_bound() { return 1.2615941559557649; }

// Requires at least 1000 samples per stream.
UncertaintyBlock uncertainty_report(const std::vector<double>& samples_phi,
                                    const std::vector<double>& samples_theta,
                                    int n1, int n2);

struct AggregateMetrics {
  std::optional<double> interval_ratio;  // absent when degenerate
  double overflow_rate = 0.0;
  double underflow_rate = 0.0;
  double ok_rate = 0.0;
  double mean_pointwise_ratio = 0.0;
  std::optional<double> fidelity;
  std::optional<UncertaintyBlock> uncertainty;
};

struct MetricsReport {
  std::vector<PixelRecord> per_pixel;
  AggregateMetrics aggregate;
};

// Rates, mean ratio and interval ratio from per-pixel records. Fidelity and
// uncertainty are filled by the pipeline that owns the estimates.
AggregateMetrics aggregate_records(const std::vector<PixelRecord>& records);

// Standard error of the uncertainty product via batch means: the sample
// list is cut into `batches` consecutive blocks, the product is computed
// per block, and the SE is the block standard deviation over sqrt(batches).
double product_batch_se(const std::vector<double>& samples, int resource,
                        std::size_t batches = 100);

struct SingleTrend {
  int resource = 0;
  double spread = 0.0;   // Holevo std of the reading error
  double product = 0.0;  // spread * sqrt(N)/2
  double product_se = 0.0;
};

struct JointTrend {
  int n1 = 0;
  int n2 = 0;
  double product1 = 0.0;
  double product2 = 0.0;
  double joint_spread = 0.0;  // Holevo std of the summed error
  double joint_lhs = 0.0;
  double joint_lhs_se = 0.0;
};

struct TrendTable {
  std::vector<SingleTrend> single;
  std::vector<JointTrend> joint;
};

// Error-spread trends per resource and per resource pair. Deterministic in
// the seed; each row draws from its own counter-based streams.
TrendTable trend_table(const std::vector<int>& resources, std::size_t trials,
                       std::uint64_t seed,
                       NoiseMode mode = NoiseMode::PovmOracle);

}  // namespace qimg
