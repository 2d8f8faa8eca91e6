#pragma once

// Strong- and weak-scaling laws and their inversions.
//
// All functions are pure.  Formulas are evaluated on value/tail pairs (see
// detail/compensated.hpp) so the documented round-trip identities hold at
// 1e-12 relative error over the entire input range, not just away from the
// edges.  Counts use signed 64-bit integers; 1e8-processor machines are in
// range with plenty to spare.

#include <cstdint>
#include <stdexcept>
#include <string>

#include "parascale/types.hpp"

namespace parascale {

// Relative tolerance the inversion identities are tested against.
inline constexpr double kIdentityTolerance = 1e-12;

namespace detail {

inline void require_processors(std::int64_t n, std::int64_t min,
                               const char* what) {
  if (n < min) {
    throw std::invalid_argument(std::string(what) + ": processor count " +
                                std::to_string(n) + " is below " +
                                std::to_string(min));
  }
}

// N * (1 - alpha) + alpha, the strong-scaling denominator.
inline dd strong_denominator(const Alpha& alpha, std::int64_t n) {
  return add(mul(alpha.serial_parts(), static_cast<double>(n)),
             alpha.parallel_parts());
}

}  // namespace detail

// Time ratio serial/parallel with a fixed total workload: N / (N(1-a) + a).
inline Speedup amdahl_speedup(const Alpha& alpha, std::int64_t n) {
  detail::require_processors(n, 1, "amdahl_speedup");
  return Speedup::from_parts(detail::div(static_cast<double>(n),
                                         detail::strong_denominator(alpha, n)));
}

// Speedup per processor: 1 / (N(1-a) + a).  Equals R_max / R_peak.
inline Efficiency amdahl_efficiency(const Alpha& alpha, std::int64_t n) {
  detail::require_processors(n, 1, "amdahl_efficiency");
  return Efficiency::from_parts(
      detail::div(1.0, detail::strong_denominator(alpha, n)));
}

// Inverts the strong-scaling law: a = N(S-1) / (S(N-1)).
inline Alpha alpha_from_speedup(const Speedup& s, std::int64_t n) {
  detail::require_processors(n, 2, "alpha_from_speedup");
  detail::dd sp = s.parts();
  if (detail::less(sp, 1.0)) {
    throw InconsistentMeasurementError(
        "alpha_from_speedup: speedup " + std::to_string(sp.hi) +
        " is below 1, no serial fraction can produce it");
  }
  if (detail::greater(sp, static_cast<double>(n))) {
    throw SuperlinearError("alpha_from_speedup: speedup " +
                           std::to_string(sp.hi) + " exceeds processor count " +
                           std::to_string(n));
  }
  detail::dd denominator = detail::mul(sp, static_cast<double>(n - 1));
  detail::dd alpha = detail::div(
      detail::mul(detail::add(sp, -1.0), static_cast<double>(n)), denominator);
  // 1 - a = (N - S) / (S(N-1)), cancellation-free for S near N.
  detail::dd serial = detail::div(
      detail::sub(detail::dd{static_cast<double>(n), 0.0}, sp), denominator);
  double a = detail::collapse(alpha);
  return Alpha::from_parts(a, detail::collapse(serial), a > 0.5);
}

// Inverts the per-processor form: a = (EN - 1) / (E(N-1)).  Efficiencies
// above 1 raise SuperlinearError; below the 1/N floor they raise
// InconsistentMeasurementError.  A floor hit within representation noise of
// 1/N (relative 1e-9) is treated as the floor itself: a = 0.
inline Alpha alpha_from_efficiency(const Efficiency& e, std::int64_t n) {
  detail::require_processors(n, 2, "alpha_from_efficiency");
  detail::dd en = detail::mul(e.parts(), static_cast<double>(n));
  if (detail::less(en, 1.0)) {
    if (en.hi < 1.0 - 1e-9) {
      throw InconsistentMeasurementError(
          "alpha_from_efficiency: efficiency " + std::to_string(e.value()) +
          " is below the serial floor 1/" + std::to_string(n));
    }
    return Alpha::from_parts(0.0, 1.0, false);
  }
  detail::dd denominator =
      detail::mul(e.parts(), static_cast<double>(n - 1));
  detail::dd alpha = detail::div(detail::add(en, -1.0), denominator);
  // 1 - a = (1 - E) / (E(N-1)), cancellation-free for E near 1.
  detail::dd serial =
      detail::div(detail::sub(detail::dd{1.0, 0.0}, e.parts()), denominator);
  double a = detail::collapse(alpha);
  return Alpha::from_parts(a, detail::collapse(serial), a > 0.5);
}

// Workload grows with the machine: S = (1-a) + aN.
inline Speedup gustafson_speedup(const Alpha& alpha, std::int64_t n) {
  detail::require_processors(n, 1, "gustafson_speedup");
  return Speedup::from_parts(detail::add(
      detail::mul(alpha.parallel_parts(), static_cast<double>(n - 1)), 1.0));
}

// E = a + (1-a)/N.
inline Efficiency gustafson_efficiency(const Alpha& alpha, std::int64_t n) {
  detail::require_processors(n, 1, "gustafson_efficiency");
  return Efficiency::from_parts(
      detail::add(detail::div(alpha.serial_parts(),
                              detail::dd{static_cast<double>(n), 0.0}),
                  alpha.parallel_parts()));
}

// The strong-scaling fraction that yields the same speedup the weak-scaling
// law reports for alpha_g at this machine size.
inline Alpha gustafson_to_amdahl(const Alpha& alpha_g, std::int64_t n) {
  detail::require_processors(n, 2, "gustafson_to_amdahl");
  return alpha_from_speedup(gustafson_speedup(alpha_g, n), n);
}

// Run time of the scaled workload on the scaled machine, with the serial
// part charged on every processor: (1-a) + aN + (1-a)(N-1).  Algebraically
// this is N for every alpha, and the value/tail evaluation returns exactly
// that; the function exists so models can keep the three terms visible.
inline double corrected_gustafson_time(const Alpha& alpha, std::int64_t n) {
  detail::require_processors(n, 1, "corrected_gustafson_time");
  detail::dd serial = alpha.serial_parts();
  detail::dd t =
      detail::add(serial, detail::mul(alpha.parallel_parts(),
                                      static_cast<double>(n)));
  return detail::collapse(
      detail::add(t, detail::mul(serial, static_cast<double>(n - 1))));
}

// Aggregate payload rate: N * P_single / (N(1-a) + a).  Saturates at
// P_single / (1-a) as N grows.
inline double payload_performance(const SystemShape& shape,
                                  const Alpha& alpha) {
  detail::dd rate =
      detail::div(detail::mul(detail::dd{shape.single_performance, 0.0},
                              static_cast<double>(shape.processors)),
                  detail::strong_denominator(alpha, shape.processors));
  return detail::collapse(rate);
}

}  // namespace parascale
