#include "qimg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qimg/common.hpp"

namespace qimg {

namespace {

constexpr double kSumFloor = 1e-9;
constexpr double kSpanFloor = 1e-12;

double span_ratio(const std::vector<double>& sums,
                  const std::vector<double>& outs) {
  const auto [in_min, in_max] = std::minmax_element(sums.begin(), sums.end());
  const double in_span = *in_max - *in_min;
  if (in_span <= kSpanFloor) {
    throw ValidationError("interval_ratio: degenerate input interval");
  }
  const auto [out_min, out_max] = std::minmax_element(outs.begin(), outs.end());
  return (*out_max - *out_min) / in_span;
}

// Batch-means standard error of a per-batch statistic.
template <typename Stat>
double batch_se(const std::vector<double>& samples, std::size_t batches,
                Stat stat) {
  if (batches < 2 || samples.size() < 2 * batches) {
    throw ValidationError("batch SE needs at least 2 samples per batch");
  }
  const std::size_t block = samples.size() / batches;
  std::vector<double> vals(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    const auto first = samples.begin() + static_cast<std::ptrdiff_t>(b * block);
    std::vector<double> chunk(first, first + static_cast<std::ptrdiff_t>(block));
    vals[b] = stat(chunk);
  }
  KahanSum acc;
  for (double v : vals) acc.add(v);
  const double mean = acc.value() / static_cast<double>(batches);
  KahanSum dev;
  for (double v : vals) dev.add((v - mean) * (v - mean));
  const double var = dev.value() / static_cast<double>(batches - 1);
  return std::sqrt(var / static_cast<double>(batches));
}

}  // namespace

const char* overflow_class_name(OverflowClass c) {
  switch (c) {
    case OverflowClass::Underflow: return "underflow";
    case OverflowClass::Overflow: return "overflow";
    default: return "ok";
  }
}

OverflowClass classify_overflow(double phase) {
  if (phase <= 0.0) return OverflowClass::Underflow;
  if (phase >= kHalfPi) return OverflowClass::Overflow;
  return OverflowClass::Ok;
}

double pointwise_ratio(double theta_est, double phi_est, double delta) {
  const double sum = theta_est + phi_est;
  if (sum <= kSumFloor) {
    throw ValidationError("pointwise_ratio: vanishing phase sum");
  }
  return (squash(sum) + delta) / sum;
}

double interval_ratio(const std::vector<double>& input_sums,
                      const std::vector<double>& output_phases) {
  if (input_sums.size() != output_phases.size() || input_sums.size() < 2) {
    throw ValidationError("interval_ratio needs >= 2 matched pixels");
  }
  return span_ratio(input_sums, output_phases);
}

double interval_ratio(const std::vector<PixelRecord>& records) {
  std::vector<double> sums, outs;
  sums.reserve(records.size());
  outs.reserve(records.size());
  for (const PixelRecord& r : records) {
    if (r.overflow_class != OverflowClass::Ok) continue;
    sums.push_back(r.input_sum);
    outs.push_back(r.output_phase);
  }
  if (sums.size() < 2) {
    throw ValidationError(
        "interval_ratio needs >= 2 non-exception pixels");
  }
  return span_ratio(sums, outs);
}

double joint_uncertainty_lhs(double product1, double product2) {
  return std::tanh(product1 + product2) + product1;
}

UncertaintyBlock uncertainty_report(const std::vector<double>& samples_phi,
                                    const std::vector<double>& samples_theta,
                                    int n1, int n2) {
  if (samples_phi.size() < 1000 || samples_theta.size() < 1000) {
    throw ValidationError("uncertainty_report needs >= 1000 samples per stream");
  }
  if (n1 < 1 || n2 < 1) {
    throw ValidationError("uncertainty_report: resources must be >= 1");
  }
  UncertaintyBlock u;
  u.delta_phi = std::sqrt(holevo_variance(samples_phi));
  u.delta_theta = std::sqrt(holevo_variance(samples_theta));
  u.delta_n1 = number_spread(n1);
  u.delta_n2 = number_spread(n2);
  u.product1 = u.delta_phi * u.delta_n1;
  u.product2 = u.delta_theta * u.delta_n2;
  u.joint_lhs = joint_uncertainty_lhs(u.product1, u.product2);
  u.joint_bound = std::tanh(1.0) + 0.5;
  return u;
}

AggregateMetrics aggregate_records(const std::vector<PixelRecord>& records) {
  AggregateMetrics agg;
  if (records.empty()) return agg;

  std::size_t under = 0, over = 0;
  KahanSum ratio_sum;
  for (const PixelRecord& r : records) {
    if (r.overflow_class == OverflowClass::Underflow) ++under;
    if (r.overflow_class == OverflowClass::Overflow) ++over;
    ratio_sum.add(r.pointwise_ratio);
  }
  const double total = static_cast<double>(records.size());
  agg.underflow_rate = static_cast<double>(under) / total;
  agg.overflow_rate = static_cast<double>(over) / total;
  agg.ok_rate =
      static_cast<double>(records.size() - under - over) / total;
  agg.mean_pointwise_ratio = ratio_sum.value() / total;
  try {
    agg.interval_ratio = interval_ratio(records);
  } catch (const ValidationError&) {
    agg.interval_ratio.reset();
  }
  return agg;
}

double product_batch_se(const std::vector<double>& samples, int resource,
                        std::size_t batches) {
  const double dn = number_spread(resource);
  return batch_se(samples, batches, [dn](const std::vector<double>& chunk) {
    return std::sqrt(holevo_variance(chunk)) * dn;
  });
}

TrendTable trend_table(const std::vector<int>& resources, std::size_t trials,
                       std::uint64_t seed, NoiseMode mode) {
  if (resources.empty()) {
    throw ValidationError("trend_table needs at least one resource");
  }
  for (int r : resources) {
    if (r < 1) throw ValidationError("trend_table: resources must be >= 1");
  }
  if (trials < 1000) {
    throw ValidationError("trend_table needs >= 1000 trials per row");
  }

  // Stream tags. Every row draws its own streams keyed by list position,
  // so adding a resource never changes the other rows.
  constexpr std::uint64_t kSingleTag = 0x10000000ull;
  constexpr std::uint64_t kJointFirstTag = 0x20000000ull;
  constexpr std::uint64_t kJointSecondTag = 0x30000000ull;

  TrendTable table;
  table.single.reserve(resources.size());
  for (std::size_t i = 0; i < resources.size(); ++i) {
    const int n = resources[i];
    const auto errs =
        sample_readings(0.0, n, mode, seed, kSingleTag + i, trials);
    SingleTrend row;
    row.resource = n;
    const VarianceStats v = variance_stats(errs, n);
    row.spread = std::sqrt(v.circular_variance);
    row.product = v.product;
    row.product_se = product_batch_se(errs, n);
    table.single.push_back(row);
  }

  const std::size_t k = resources.size();
  table.joint.reserve(k * k);
  for (std::size_t i1 = 0; i1 < k; ++i1) {
    for (std::size_t i2 = 0; i2 < k; ++i2) {
      const int n1 = resources[i1];
      const int n2 = resources[i2];
      const std::uint64_t pair = i1 * k + i2;
      const auto e1 =
          sample_readings(0.0, n1, mode, seed, kJointFirstTag + pair, trials);
      const auto e2 =
          sample_readings(0.0, n2, mode, seed, kJointSecondTag + pair, trials);

      std::vector<double> sum(trials);
      for (std::size_t t = 0; t < trials; ++t) {
        sum[t] = wrap_pi(e1[t] + e2[t]);
      }

      JointTrend row;
      row.n1 = n1;
      row.n2 = n2;
      row.product1 = variance_stats(e1, n1).product;
      row.product2 = variance_stats(e2, n2).product;
      row.joint_spread = std::sqrt(holevo_variance(sum));
      row.joint_lhs = joint_uncertainty_lhs(row.product1, row.product2);

      // Batch-means SE of the joint statistic: both streams are cut into
      // the same blocks so each block yields one lhs value.
      const std::size_t batches = 100;
      const std::size_t block = trials / batches;
      const double dn1 = number_spread(n1);
      const double dn2 = number_spread(n2);
      std::vector<double> lhs_vals(batches);
      for (std::size_t b = 0; b < batches; ++b) {
        const auto s1 = e1.begin() + static_cast<std::ptrdiff_t>(b * block);
        const auto s2 = e2.begin() + static_cast<std::ptrdiff_t>(b * block);
        std::vector<double> c1(s1, s1 + static_cast<std::ptrdiff_t>(block));
        std::vector<double> c2(s2, s2 + static_cast<std::ptrdiff_t>(block));
        const double p1 = std::sqrt(holevo_variance(c1)) * dn1;
        const double p2 = std::sqrt(holevo_variance(c2)) * dn2;
        lhs_vals[b] = joint_uncertainty_lhs(p1, p2);
      }
      KahanSum acc;
      for (double v : lhs_vals) acc.add(v);
      const double mean = acc.value() / static_cast<double>(batches);
      KahanSum dev;
      for (double v : lhs_vals) dev.add((v - mean) * (v - mean));
      row.joint_lhs_se = std::sqrt(dev.value() /
                                   static_cast<double>(batches - 1) /
                                   static_cast<double>(batches));
      table.joint.push_back(row);
    }
  }
  return table;
}

}  // namespace qimg
