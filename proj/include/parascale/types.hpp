#pragma once

// Core value types shared by every module: parallel fraction, machine shape,
// speedup and efficiency.  Everything validates on construction so the
// formula layer can assume sane inputs.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "parascale/detail/compensated.hpp"

namespace parascale {

// A measured efficiency above 1 (or a speedup above the processor count).
// The laws modeled here cannot produce such values; they usually indicate
// cache effects or a bookkeeping error in the input, and callers may want to
// handle them separately from garden-variety bad arguments.
class SuperlinearError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A measurement that no machine could have produced under these laws for a
// different reason than superlinearity: speedup below 1, efficiency below
// the 1/N floor, and similar.
class InconsistentMeasurementError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Accumulated serial fractions reached 1: the model predicts zero payload.
class SaturationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

inline void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + ": value must be finite");
  }
}

inline void require_unit_range(double v, const char* what) {
  require_finite(v, what);
  if (v < 0.0 || v > 1.0) {
    throw std::invalid_argument(std::string(what) + ": " + std::to_string(v) +
                                " is outside [0, 1]");
  }
}

}  // namespace detail

// Parallelizable fraction of a workload.  Near alpha = 1 the information
// that matters lives in 1 - alpha (serial fractions around 1e-7 decide the
// fate of 1e7-core machines), so the complement is a first-class field:
// whichever fraction the caller supplied is stored verbatim and anchors the
// pair, the other one is derived.
class Alpha {
 public:
  static Alpha from_parallel_fraction(double alpha) {
    detail::require_unit_range(alpha, "Alpha::from_parallel_fraction");
    return Alpha(alpha, 1.0 - alpha, false);
  }

  static Alpha from_serial_fraction(double one_minus_alpha) {
    detail::require_unit_range(one_minus_alpha, "Alpha::from_serial_fraction");
    return Alpha(1.0 - one_minus_alpha, one_minus_alpha, true);
  }

  // For results computed by the law layer, where both parts are already
  // consistent at full precision.  anchor_serial records which part is the
  // exact one.
  static Alpha from_parts(double alpha, double serial, bool anchor_serial) {
    detail::require_unit_range(alpha, "Alpha::from_parts(alpha)");
    detail::require_unit_range(serial, "Alpha::from_parts(serial)");
    return Alpha(alpha, serial, anchor_serial);
  }

  double value() const { return alpha_; }
  double serial_fraction() const { return serial_; }
  bool anchored_on_serial() const { return anchored_on_serial_; }

  // The two fractions as exact value/tail pairs.  The anchored field is
  // taken verbatim; its complement is rebuilt without cancellation.
  detail::dd parallel_parts() const {
    return anchored_on_serial_ ? detail::one_minus(serial_)
                               : detail::dd{alpha_, 0.0};
  }
  detail::dd serial_parts() const {
    return anchored_on_serial_ ? detail::dd{serial_, 0.0}
                               : detail::one_minus(alpha_);
  }

 private:
  Alpha(double alpha, double serial, bool anchored)
      : alpha_(alpha), serial_(serial), anchored_on_serial_(anchored) {}

  double alpha_;
  double serial_;
  bool anchored_on_serial_;
};

// Speedup as a value/tail pair.  The tail preserves S - 1 for speedups close
// to 1, which is exactly what inverting back to a parallel fraction needs.
class Speedup {
 public:
  // Measured or externally supplied value; no tail information.
  static Speedup from_value(double v) {
    detail::require_finite(v, "Speedup::from_value");
    if (v <= 0.0) {
      throw std::invalid_argument("Speedup::from_value: " + std::to_string(v) +
                                  " is not positive");
    }
    return Speedup(detail::dd{v, 0.0});
  }

  // Computed by the law layer.
  static Speedup from_parts(detail::dd v) { return Speedup(v); }

  double value() const { return v_.hi; }
  detail::dd parts() const { return v_; }

 private:
  explicit Speedup(detail::dd v) : v_(v) {}
  detail::dd v_;
};

// Efficiency in (0, 1], also carried as a value/tail pair.
class Efficiency {
 public:
  static Efficiency from_value(double v) {
    detail::require_finite(v, "Efficiency::from_value");
    return checked(detail::dd{v, 0.0});
  }

  // r_max / r_peak with the division residual kept in the tail.
  static Efficiency from_ratio(double r_max, double r_peak) {
    detail::require_finite(r_max, "Efficiency::from_ratio(r_max)");
    detail::require_finite(r_peak, "Efficiency::from_ratio(r_peak)");
    if (r_max <= 0.0 || r_peak <= 0.0) {
      throw std::invalid_argument(
          "Efficiency::from_ratio: rates must be positive");
    }
    double q = r_max / r_peak;
    double tail = std::fma(-q, r_peak, r_max) / r_peak;
    return checked(detail::renorm(q, tail));
  }

  static Efficiency from_parts(detail::dd v) { return checked(v); }

  double value() const { return v_.hi; }
  detail::dd parts() const { return v_; }

 private:
  static Efficiency checked(detail::dd v) {
    if (detail::greater(v, 1.0)) {
      throw SuperlinearError("efficiency > 1: " + std::to_string(v.hi));
    }
    if (!(v.hi > 0.0)) {
      throw std::invalid_argument("efficiency must be positive, got " +
                                  std::to_string(v.hi));
    }
    return Efficiency(v);
  }

  explicit Efficiency(detail::dd v) : v_(v) {}
  detail::dd v_;
};

// Processor count plus the performance of one unit.
struct SystemShape {
  SystemShape(std::int64_t processors, double single_performance)
      : processors(processors), single_performance(single_performance) {
    if (processors < 1) {
      throw std::invalid_argument("SystemShape: processors must be >= 1");
    }
    detail::require_finite(single_performance,
                           "SystemShape::single_performance");
    if (single_performance <= 0.0) {
      throw std::invalid_argument(
          "SystemShape: single_performance must be positive");
    }
  }

  std::int64_t processors;
  double single_performance;
};

}  // namespace parascale
