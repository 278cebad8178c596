#include <cmath>
#include <cstddef>
#include <vector>

#include "doctest.h"
#include "qimg/analysis.hpp"
#include "qimg/common.hpp"
#include "qimg/rng.hpp"

using namespace qimg;

namespace {

PixelRecord ok_record(std::size_t pixel, double sum, double out) {
  PixelRecord r;
  r.pixel = pixel;
  r.input_sum = sum;
  r.output_phase = out;
  r.pointwise_ratio = out / sum;
  r.overflow_class = classify_overflow(out);
  return r;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("exception classes split at the band edges") {
  CHECK(classify_overflow(0.7) == OverflowClass::Ok);
  CHECK(classify_overflow(1e-12) == OverflowClass::Ok);
  CHECK(classify_overflow(kHalfPi - 1e-12) == OverflowClass::Ok);
  CHECK(classify_overflow(0.0) == OverflowClass::Underflow);
  CHECK(classify_overflow(-0.4) == OverflowClass::Underflow);
  CHECK(classify_overflow(kHalfPi) == OverflowClass::Overflow);
  CHECK(classify_overflow(2.0) == OverflowClass::Overflow);
  CHECK(overflow_class_name(OverflowClass::Ok) == std::string("ok"));
  CHECK(overflow_class_name(OverflowClass::Overflow) == std::string("overflow"));
  CHECK(overflow_class_name(OverflowClass::Underflow) ==
        std::string("underflow"));
}

TEST_CASE("squash saturates at the band edge") {
  CHECK(std::abs(squash(3.0) - 1.5630283520509168) < 1e-12);
  CHECK(std::abs(squash(kPi) - 1.5649405178158793) < 1e-12);
  CHECK(std::abs(squash(1.3) - 1.3535915733634351) < 1e-12);
  CHECK(std::abs(squash(0.95) - 1.1620484995663266) < 1e-12);
  CHECK(squash(0.0) == 0.0);
  // tanh saturates to 1.0 in doubles far out, so the edge is reachable
  // but never crossed
  CHECK(squash(50.0) <= kHalfPi);
  CHECK(squash(-50.0) >= -kHalfPi);
  CHECK(squash(kPi) < kHalfPi);
  // the overflow-control shift at sum 1.1
  CHECK(std::abs((1.1 - squash(1.1)) - (-0.15742092298450516)) < 1e-12);
}

TEST_CASE("pointwise quotient follows the squash curve") {
  CHECK(std::abs(pointwise_ratio(1.5, 1.5, 0.0) - 0.52100945068363894) <
        1e-12);
  // small sums approach the pi/2 slope of tanh
  CHECK(pointwise_ratio(1e-6, 1e-6, 0.0) == doctest::Approx(kHalfPi).epsilon(1e-6));
  // an estimation residual shifts the numerator additively
  const double sum = kPi / 10.0;
  const double expected = (0.79202094369700541) / sum;
  CHECK(std::abs(pointwise_ratio(sum / 2, sum / 2, kPi / 10.0) - expected) <
        1e-10);
}

TEST_CASE("interval ratio on a dense grid hits the frozen value") {
  const std::size_t k = 10000;
  const double lo = 0.05;
  const double hi = kPi - 0.05;
  std::vector<double> sums(k), outs(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double t = lo + (hi - lo) * static_cast<double>(i) /
                              static_cast<double>(k - 1);
    sums[i] = t;
    outs[i] = squash(t);
  }
  sums.back() = hi;
  outs.back() = squash(hi);
  const double r = interval_ratio(sums, outs);
  CHECK(std::abs(r - 0.48851100813969325) < 1e-9);
  CHECK(r > 0.48);
  CHECK(r < 0.52);
}

TEST_CASE("interval ratio has the two-point closed form") {
  CHECK(std::abs(interval_ratio({1.0, 2.0}, {squash(1.0), squash(2.0)}) -
                 0.3179816790282911) < 1e-12);
  // the wide-interval limit approaches tanh(pi)/2 from above
  CHECK(std::abs(interval_ratio({1e-9, kPi - 1e-9},
                                {squash(1e-9), squash(kPi - 1e-9)}) -
                 0.49813603811037497) < 1e-6);
}

TEST_CASE("interval ratio rejects degenerate spans") {
  CHECK_THROWS_AS(interval_ratio({1.0, 1.0}, {0.5, 0.5}), ValidationError);
  CHECK_THROWS_AS(interval_ratio({1.0}, {0.5}), ValidationError);
  CHECK_THROWS_AS(interval_ratio({}, {}), ValidationError);
  CHECK_THROWS_AS(interval_ratio({1.0, 2.0}, {0.5}), ValidationError);
}

TEST_CASE("record ratio drops exception pixels from both spans") {
  std::vector<PixelRecord> recs;
  recs.push_back(ok_record(0, 0.5, squash(0.5)));
  recs.push_back(ok_record(1, 1.0, squash(1.0)));
  recs.push_back(ok_record(2, 2.0, squash(2.0)));
  PixelRecord bad;
  bad.pixel = 3;
  bad.input_sum = 3.4;
  bad.output_phase = 1.7;  // past pi/2
  bad.pointwise_ratio = 0.5;
  bad.overflow_class = OverflowClass::Overflow;
  recs.push_back(bad);
  const double expect =
      (squash(2.0) - squash(0.5)) / (2.0 - 0.5);
  CHECK(std::abs(interval_ratio(recs) - expect) < 1e-12);
}

TEST_CASE("record ratio needs two surviving pixels") {
  std::vector<PixelRecord> recs;
  recs.push_back(ok_record(0, 0.5, squash(0.5)));
  PixelRecord bad = ok_record(1, 2.0, 0.0);
  bad.overflow_class = OverflowClass::Underflow;
  recs.push_back(bad);
  CHECK_THROWS_AS(interval_ratio(recs), ValidationError);
  // the aggregate view reports the same situation as an absent ratio
  const AggregateMetrics agg = aggregate_records(recs);
  CHECK_FALSE(agg.interval_ratio.has_value());
}

TEST_CASE("aggregates count rates and mean quotient") {
  std::vector<PixelRecord> recs;
  for (int i = 0; i < 7; ++i) {
    recs.push_back(ok_record(static_cast<std::size_t>(i), 0.5 + 0.1 * i,
                             squash(0.5 + 0.1 * i)));
  }
  for (int i = 0; i < 2; ++i) {
    PixelRecord r = ok_record(7 + static_cast<std::size_t>(i), 3.0, 1.6);
    r.overflow_class = OverflowClass::Overflow;
    recs.push_back(r);
  }
  PixelRecord u = ok_record(9, 0.4, -0.1);
  u.overflow_class = OverflowClass::Underflow;
  recs.push_back(u);

  const AggregateMetrics agg = aggregate_records(recs);
  CHECK(agg.overflow_rate == 0.2);
  CHECK(agg.underflow_rate == 0.1);
  CHECK(agg.ok_rate == 0.7);
  KahanSum mean;
  for (const auto& r : recs) mean.add(r.pointwise_ratio);
  CHECK(std::abs(agg.mean_pointwise_ratio - mean.value() / 10.0) < 1e-15);
  CHECK_FALSE(agg.fidelity.has_value());
  CHECK_FALSE(agg.uncertainty.has_value());
  CHECK(agg.interval_ratio.has_value());
}

TEST_CASE("joint lhs closed form and bound") {
  CHECK(std::abs(joint_uncertainty_lhs(0.5, 0.5) - 1.2615941559557649) <
        1e-12);
  CHECK(joint_uncertainty_bound() == 1.2615941559557649);
  CHECK(joint_uncertainty_lhs(0.6, 0.7) ==
        doctest::Approx(std::tanh(1.3) + 0.6).epsilon(1e-12));
}

TEST_CASE("uncertainty report needs one thousand samples per stream") {
  const std::vector<double> few(999, 0.1);
  const std::vector<double> enough(1000, 0.1);
  CHECK_THROWS_AS(uncertainty_report(few, enough, 4, 4), ValidationError);
  CHECK_THROWS_AS(uncertainty_report(enough, few, 4, 4), ValidationError);
}

TEST_CASE("uncertainty report reproduces the wrapped normal spread") {
  RandomStream rp(31, 1, 0), rt(31, 2, 0);
  std::vector<double> phi(20000), theta(20000);
  for (auto& s : phi) s = wrap_pi(0.1 * rp.next_normal());
  for (auto& s : theta) s = wrap_pi(0.1 * rt.next_normal());
  const UncertaintyBlock u = uncertainty_report(phi, theta, 4, 16);
  CHECK(std::abs(u.delta_phi - 0.10025052161544127) < 5e-3);
  CHECK(std::abs(u.delta_theta - 0.10025052161544127) < 5e-3);
  CHECK(u.delta_n1 == 1.0);
  CHECK(u.delta_n2 == 2.0);
  CHECK(u.product1 == u.delta_phi * u.delta_n1);
  CHECK(u.product2 == u.delta_theta * u.delta_n2);
  CHECK(u.joint_lhs ==
        doctest::Approx(std::tanh(u.product1 + u.product2) + u.product1)
            .epsilon(1e-12));
  CHECK(u.joint_bound == 1.2615941559557649);
}

TEST_CASE("batch standard error vanishes for a repeating pattern") {
  std::vector<double> alternating(1000);
  for (std::size_t i = 0; i < alternating.size(); ++i) {
    alternating[i] = (i % 2 == 0) ? 0.3 : -0.3;
  }
  CHECK(product_batch_se(alternating, 4) < 1e-14);
  CHECK_THROWS_AS(product_batch_se(std::vector<double>(150, 0.1), 4),
                  ValidationError);
}

TEST_CASE("trend table covers every resource and pair") {
  const TrendTable t = trend_table({4, 16}, 2000, 77);
  REQUIRE(t.single.size() == 2);
  REQUIRE(t.joint.size() == 4);
  CHECK(t.single[0].resource == 4);
  CHECK(t.single[1].resource == 16);
  for (const auto& row : t.single) {
    CHECK(row.product > 0.4);
    CHECK(row.product < 1.0);
    CHECK(row.product_se > 0.0);
    CHECK(row.spread * number_spread(row.resource) ==
          doctest::Approx(row.product).epsilon(1e-12));
  }
  for (const auto& row : t.joint) {
    CHECK(row.joint_lhs > 1.0);
    CHECK(row.joint_lhs_se > 0.0);
  }
  CHECK(t.joint[1].n1 == 4);
  CHECK(t.joint[1].n2 == 16);
}

TEST_CASE("trend table is deterministic in the seed") {
  const TrendTable a = trend_table({4}, 2000, 5);
  const TrendTable b = trend_table({4}, 2000, 5);
  const TrendTable c = trend_table({4}, 2000, 6);
  CHECK(a.single[0].product == b.single[0].product);
  CHECK(a.joint[0].joint_lhs == b.joint[0].joint_lhs);
  CHECK(a.single[0].product != c.single[0].product);
}

TEST_CASE("trend table accepts a lone resource and validates input") {
  const TrendTable t = trend_table({8}, 1000, 3, NoiseMode::Analytic);
  CHECK(t.single.size() == 1);
  CHECK(t.joint.size() == 1);
  CHECK_THROWS_AS(trend_table({}, 2000, 1), ValidationError);
  CHECK_THROWS_AS(trend_table({0}, 2000, 1), ValidationError);
  CHECK_THROWS_AS(trend_table({4}, 999, 1), ValidationError);
}

}  // TEST_SUITE
