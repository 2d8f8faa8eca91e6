#include "parascale/scaling.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "parascale/types.hpp"

namespace ps = parascale;

namespace {

double rel_err(double got, double want) {
  if (want == 0.0) return std::abs(got);
  return std::abs(got - want) / std::abs(want);
}

TEST(Alpha, ValidatesRange) {
  EXPECT_NO_THROW(ps::Alpha::from_parallel_fraction(0.0));
  EXPECT_NO_THROW(ps::Alpha::from_parallel_fraction(1.0));
  EXPECT_THROW(ps::Alpha::from_parallel_fraction(-0.1), std::invalid_argument);
  EXPECT_THROW(ps::Alpha::from_parallel_fraction(1.1), std::invalid_argument);
  EXPECT_THROW(ps::Alpha::from_parallel_fraction(
                   std::numeric_limits<double>::quiet_NaN()),
               std::invalid_argument);
}

TEST(Alpha, SerialAnchorKeepsTinyFractionsExact) {
  ps::Alpha a = ps::Alpha::from_serial_fraction(1e-300);
  EXPECT_TRUE(a.anchored_on_serial());
  EXPECT_EQ(a.serial_fraction(), 1e-300);
  EXPECT_EQ(a.value(), 1.0);  // rounded view; the anchor keeps the real value
}

TEST(Efficiency, RejectsSuperlinear) {
  EXPECT_THROW(ps::Efficiency::from_value(1.0000001), ps::SuperlinearError);
  EXPECT_THROW(ps::Efficiency::from_ratio(2.0, 1.0), ps::SuperlinearError);
  EXPECT_THROW(ps::Efficiency::from_value(0.0), std::invalid_argument);
  EXPECT_NO_THROW(ps::Efficiency::from_value(1.0));
}

TEST(Speedup, RejectsNonPositive) {
  EXPECT_THROW(ps::Speedup::from_value(0.0), std::invalid_argument);
  EXPECT_THROW(ps::Speedup::from_value(-3.0), std::invalid_argument);
}

TEST(AmdahlSpeedup, MatchesHandComputedValues) {
  // alpha = 0.999, N = 1000: 1000 / (1000 * 0.001 + 0.999)
  ps::Alpha a = ps::Alpha::from_parallel_fraction(0.999);
  EXPECT_NEAR(ps::amdahl_speedup(a, 1000).value(), 500.250125062531,
              500.0 * 1e-12);
  EXPECT_NEAR(ps::amdahl_efficiency(a, 1000).value(), 0.5002501250625311,
              1e-12);
  // serial code never speeds up, perfect code scales linearly
  EXPECT_EQ(ps::amdahl_speedup(ps::Alpha::from_parallel_fraction(0.0), 64)
                .value(),
            1.0);
  EXPECT_EQ(ps::amdahl_speedup(ps::Alpha::from_parallel_fraction(1.0), 64)
                .value(),
            64.0);
  // N = 1 is always speedup 1
  EXPECT_EQ(ps::amdahl_speedup(a, 1).value(), 1.0);
}

TEST(AmdahlInverse, RecoversAlphaFromSpeedup) {
  ps::Alpha a = ps::Alpha::from_parallel_fraction(0.97);
  ps::Speedup s = ps::amdahl_speedup(a, 128);
  ps::Alpha back = ps::alpha_from_speedup(s, 128);
  EXPECT_LE(rel_err(back.value(), 0.97), 1e-12);
}

TEST(AmdahlInverse, RejectsImpossibleObservations) {
  EXPECT_THROW(ps::alpha_from_speedup(ps::Speedup::from_value(0.5), 16),
               ps::InconsistentMeasurementError);
  EXPECT_THROW(ps::alpha_from_speedup(ps::Speedup::from_value(17.0), 16),
               ps::SuperlinearError);
  EXPECT_THROW(ps::alpha_from_speedup(ps::Speedup::from_value(2.0), 1),
               std::invalid_argument);
}

TEST(AmdahlInverse, EfficiencyFloorIsNotInvertible) {
  // E < 1/N cannot come from any serial fraction
  EXPECT_THROW(
      ps::alpha_from_efficiency(ps::Efficiency::from_value(0.001), 16),
      ps::InconsistentMeasurementError);
  // E exactly 1/N means fully serial
  ps::Alpha a =
      ps::alpha_from_efficiency(ps::Efficiency::from_value(0.0625), 16);
  EXPECT_EQ(a.value(), 0.0);
}

TEST(AmdahlInverse, PublishedMeasurementRoundTrips) {
  // r_max/r_peak of the largest 2016 system; the inferred parallel fraction
  // is within 4e-8 of one, so the serial anchor carries the signal.
  ps::Efficiency eff =
      ps::Efficiency::from_ratio(93014600.0, 125435900.0);
  EXPECT_NEAR(eff.value(), 0.7415309333292941, 1e-13);
  ps::Alpha alpha = ps::alpha_from_efficiency(eff, 10649600);
  EXPECT_NEAR(alpha.value(), 0.9999999672699968, 1e-12);
  EXPECT_NEAR(alpha.serial_fraction(), 3.273000313336435e-08,
              3.3e-8 * 1e-12);
  ps::Efficiency back = ps::amdahl_efficiency(alpha, 10649600);
  EXPECT_LE(rel_err(back.value(), eff.value()), 1e-12);
}

TEST(AmdahlInverse, TinyAlphaRoundTripsThroughEfficiency) {
  // Small parallel fractions barely move the efficiency at large N; the
  // value/tail representation keeps the round trip at full precision anyway.
  const std::int64_t n = 10000000;
  for (double alpha : {1e-5, 1e-7, 1e-9, 1e-12}) {
    ps::Alpha a = ps::Alpha::from_parallel_fraction(alpha);
    ps::Alpha back = ps::alpha_from_efficiency(ps::amdahl_efficiency(a, n), n);
    EXPECT_LE(rel_err(back.value(), alpha), 1e-12) << "alpha = " << alpha;
  }
}

TEST(Gustafson, MatchesHandComputedValues) {
  ps::Alpha half = ps::Alpha::from_parallel_fraction(0.5);
  EXPECT_EQ(ps::gustafson_speedup(half, 100).value(), 50.5);
  EXPECT_NEAR(ps::gustafson_efficiency(half, 100).value(), 0.505, 1e-15);
  EXPECT_EQ(ps::gustafson_speedup(half, 1).value(), 1.0);
}

TEST(Gustafson, EquivalentStrongScalingFraction) {
  // scaled speedup 50.5 at N=100 looks like strong-scaling alpha 100/101
  ps::Alpha half = ps::Alpha::from_parallel_fraction(0.5);
  ps::Alpha equivalent = ps::gustafson_to_amdahl(half, 100);
  EXPECT_NEAR(equivalent.value(), 0.9900990099009901, 1e-14);
}

TEST(Gustafson, LawsAgreeThroughTheSpeedupBridge) {
  std::mt19937_64 rng(20260819);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    double alpha = unit(rng);
    std::int64_t n = 2 + static_cast<std::int64_t>(rng() % 100000);
    ps::Alpha g = ps::Alpha::from_parallel_fraction(alpha);
    ps::Speedup s = ps::gustafson_speedup(g, n);
    // the strong-scaling fraction that explains the same speedup
    ps::Alpha a = ps::gustafson_to_amdahl(g, n);
    ps::Speedup s2 = ps::amdahl_speedup(a, n);
    EXPECT_LE(rel_err(s2.value(), s.value()), 1e-12)
        << "alpha = " << alpha << ", n = " << n;
  }
}

TEST(CorrectedGustafson, TotalTimeIsExactlyN) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    double alpha = unit(rng);
    std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 10000000);
    EXPECT_EQ(ps::corrected_gustafson_time(
                  ps::Alpha::from_parallel_fraction(alpha), n),
              static_cast<double>(n))
        << "alpha = " << alpha << ", n = " << n;
  }
  // the serial-anchored path must stay exact too
  EXPECT_EQ(ps::corrected_gustafson_time(
                ps::Alpha::from_serial_fraction(3.3e-8), 10649600),
            10649600.0);
}

TEST(PayloadPerformance, SaturatesAtInverseSerialFraction) {
  // 1e6 units of 1 GFLOPS with serial share 1e-7 deliver ~0.91 PFLOPS,
  // nowhere near the nominal 1 EFLOPS.
  ps::SystemShape shape(1000000, 1e9);
  ps::Alpha a = ps::Alpha::from_serial_fraction(1e-7);
  EXPECT_NEAR(ps::payload_performance(shape, a), 909090991735544.8,
              909090991735544.8 * 1e-12);
  // cap: P_single / (1 - alpha) = 1e9 / 1e-7 = 1e16
  EXPECT_LT(ps::payload_performance(shape, a), 1e16);
}

TEST(PayloadPerformance, FullyParallelScalesLinearly) {
  ps::SystemShape shape(1024, 2.0);
  EXPECT_EQ(ps::payload_performance(shape,
                                    ps::Alpha::from_parallel_fraction(1.0)),
            2048.0);
}

}  // namespace
