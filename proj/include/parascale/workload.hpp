#pragma once

// Communication footprints of benchmark-like workloads, composition of
// serial-fraction contributions into an effective scaling fraction, payload
// curves over machine size, and roofline/accelerator helpers.

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "parascale/scaling.hpp"
#include "parascale/types.hpp"

namespace parascale {

// Feed-forward network: `inputs` source nodes, `hidden_layers` fully
// connected layers of `hidden_width` neurons each, `outputs` sinks.
struct AnnTopology {
  AnnTopology(std::int64_t inputs, std::int64_t hidden_layers,
              std::int64_t hidden_width, std::int64_t outputs)
      : inputs(inputs),
        hidden_layers(hidden_layers),
        hidden_width(hidden_width),
        outputs(outputs) {
    if (inputs < 1 || hidden_layers < 1 || hidden_width < 1 || outputs < 1) {
      throw std::invalid_argument(
          "AnnTopology: all layer sizes must be >= 1, got " + to_string());
    }
  }

  std::int64_t total_neurons() const {
    return inputs + hidden_layers * hidden_width + outputs;
  }

  std::string to_string() const {
    return std::to_string(inputs) + "x" + std::to_string(hidden_width) + "^" +
           std::to_string(hidden_layers) + "x" + std::to_string(outputs);
  }

  std::int64_t inputs;
  std::int64_t hidden_layers;
  std::int64_t hidden_width;
  std::int64_t outputs;
};

// Dense solver style: every process exchanges with neighbors twice per step.
struct HplLike {
  std::int64_t processes;
};

// Sparse iterative style: the exchange repeats every iteration.
struct HpcgLike {
  std::int64_t processes;
  std::int64_t iterations;
};

// Layered feed-forward inference pass.
struct AnnLayered {
  AnnTopology topology;
};

using WorkloadKind = std::variant<HplLike, HpcgLike, AnnLayered>;

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error("message_count: product overflows 64 bits");
  }
  return r;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) {
    throw std::overflow_error("message_count: sum overflows 64 bits");
  }
  return r;
}

inline std::uint64_t to_count(std::int64_t v, const char* what) {
  if (v < 1) {
    throw std::invalid_argument(std::string(what) + " must be >= 1, got " +
                                std::to_string(v));
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace detail

// Messages one evaluation of the workload puts on the interconnect.
// Overflow is reported, never wrapped.
inline std::uint64_t message_count(const WorkloadKind& kind) {
  using detail::checked_add;
  using detail::checked_mul;
  using detail::to_count;
  struct Visitor {
    std::uint64_t operator()(const HplLike& w) const {
      return checked_mul(2, to_count(w.processes, "HplLike.processes"));
    }
    std::uint64_t operator()(const HpcgLike& w) const {
      return checked_mul(
          checked_mul(2, to_count(w.iterations, "HpcgLike.iterations")),
          to_count(w.processes, "HpcgLike.processes"));
    }
    std::uint64_t operator()(const AnnLayered& w) const {
      const AnnTopology& t = w.topology;
      std::uint64_t m = static_cast<std::uint64_t>(t.hidden_width);
      std::uint64_t first = checked_mul(static_cast<std::uint64_t>(t.inputs), m);
      std::uint64_t inner = checked_mul(
          static_cast<std::uint64_t>(t.hidden_layers - 1), checked_mul(m, m));
      std::uint64_t last =
          checked_mul(m, static_cast<std::uint64_t>(t.outputs));
      return checked_add(checked_add(first, inner), last);
    }
  };
  return std::visit(Visitor{}, kind);
}

// Leading-order growth of the message count, kept symbolic: the coefficient,
// the power of the width/process count, and the power of the depth term
// (iterations for the iterative kind, hidden layers for the layered one).
enum class DepthSymbol { None, Iterations, HiddenLayers };

struct ExecutionOrder {
  double coefficient;
  int width_exponent;
  int depth_exponent;
  DepthSymbol depth;

  std::string to_string() const {
    std::string s = "O(";
    if (coefficient != 1.0) {
      s += std::to_string(static_cast<long long>(coefficient));
    }
    if (depth == DepthSymbol::Iterations) s += "N";
    if (depth == DepthSymbol::HiddenLayers) s += "h";
    s += "m";
    if (width_exponent > 1) s += "^" + std::to_string(width_exponent);
    s += ")";
    return s;
  }
};

inline ExecutionOrder execution_order(const WorkloadKind& kind) {
  struct Visitor {
    ExecutionOrder operator()(const HplLike&) const {
      return {2.0, 1, 0, DepthSymbol::None};
    }
    ExecutionOrder operator()(const HpcgLike&) const {
      return {2.0, 1, 1, DepthSymbol::Iterations};
    }
    ExecutionOrder operator()(const AnnLayered&) const {
      return {1.0, 2, 1, DepthSymbol::HiddenLayers};
    }
  };
  return std::visit(Visitor{}, kind);
}

// One labeled source of sequential work, stated as its share 1 - alpha.
struct SerialFractionContribution {
  SerialFractionContribution(std::string label, double one_minus_alpha)
      : label(std::move(label)), one_minus_alpha(one_minus_alpha) {
    detail::require_unit_range(one_minus_alpha,
                               "SerialFractionContribution");
  }

  std::string label;
  double one_minus_alpha;
};

// Communication overhead as a function of machine size, returned as an
// addition to the serial fraction.
using CommModel = std::function<double(std::int64_t)>;

inline CommModel no_communication() {
  return [](std::int64_t) { return 0.0; };
}

inline CommModel linear_communication(double per_processor) {
  detail::require_finite(per_processor, "linear_communication");
  if (per_processor < 0.0) {
    throw std::invalid_argument("linear_communication: coefficient < 0");
  }
  return [per_processor](std::int64_t n) {
    return per_processor * static_cast<double>(n);
  };
}

inline CommModel iterative_communication(double per_processor,
                                         std::int64_t iterations) {
  detail::require_finite(per_processor, "iterative_communication");
  if (per_processor < 0.0 || iterations < 1) {
    throw std::invalid_argument(
        "iterative_communication: need coefficient >= 0 and iterations >= 1");
  }
  return [per_processor, iterations](std::int64_t n) {
    return per_processor * static_cast<double>(iterations) *
           static_cast<double>(n);
  };
}

namespace detail {

// Sum of the serial shares at machine size n; throws only on malformed
// inputs, saturation is the caller's business.
inline double total_serial_fraction(
    const std::vector<SerialFractionContribution>& contributions,
    std::int64_t n, const CommModel& comm) {
  require_processors(n, 1, "effective_alpha");
  if (!comm) {
    throw std::invalid_argument("effective_alpha: empty communication model");
  }
  double total = 0.0;
  for (const SerialFractionContribution& c : contributions) {
    total += c.one_minus_alpha;
  }
  double comm_share = comm(n);
  require_finite(comm_share, "effective_alpha: comm model");
  if (comm_share < 0.0) {
    throw std::invalid_argument(
        "effective_alpha: comm model returned a negative share");
  }
  return total + comm_share;
}

}  // namespace detail

// Composes independent serial shares and the communication share at machine
// size n into one effective fraction.  Shares at or past 1 mean the machine
// spends all its time not computing; that is reported as SaturationError.
inline Alpha effective_alpha(
    const std::vector<SerialFractionContribution>& contributions,
    std::int64_t n, const CommModel& comm) {
  double total = detail::total_serial_fraction(contributions, n, comm);
  if (total >= 1.0) {
    throw SaturationError("effective_alpha: serial shares sum to " +
                          std::to_string(total) + " at n = " +
                          std::to_string(n) + ", no payload remains");
  }
  return Alpha::from_serial_fraction(total);
}

struct CurvePoint {
  std::int64_t n;
  double one_minus_alpha_eff;
  double payload;  // in units of shape.single_performance * ops
  bool saturated;
};

// Payload rate across the given machine sizes.  Saturated points are kept in
// the curve with zero payload and the flag set instead of failing the sweep.
inline std::vector<CurvePoint> performance_curve(
    const SystemShape& unit,
    const std::vector<SerialFractionContribution>& contributions,
    const CommModel& comm, const std::vector<std::int64_t>& n_values) {
  std::vector<CurvePoint> points;
  points.reserve(n_values.size());
  for (std::int64_t n : n_values) {
    double total = detail::total_serial_fraction(contributions, n, comm);
    if (total >= 1.0) {
      points.push_back({n, total, 0.0, true});
      continue;
    }
    Alpha alpha = Alpha::from_serial_fraction(total);
    points.push_back(
        {n, total,
         payload_performance(SystemShape(n, unit.single_performance), alpha),
         false});
  }
  return points;
}

struct PeakResult {
  std::int64_t n_peak;
  double payload;
  double gain;  // payload / single-unit performance
  bool at_boundary;  // best value sits on n_max: no interior peak in range
};

// Exact integer argmax of the payload curve over [1, n_max], by full scan.
// The curves these models produce are unimodal, but a scan is cheap at the
// sizes that matter and stays exact when a caller-supplied comm model is
// not.  Ties resolve to the smallest machine.
inline PeakResult find_peak(
    const SystemShape& unit,
    const std::vector<SerialFractionContribution>& contributions,
    const CommModel& comm, std::int64_t n_max) {
  detail::require_processors(n_max, 1, "find_peak");
  std::int64_t best_n = 1;
  double best_payload = -1.0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    double total = detail::total_serial_fraction(contributions, n, comm);
    double payload = 0.0;
    if (total < 1.0) {
      payload = payload_performance(SystemShape(n, unit.single_performance),
                                    Alpha::from_serial_fraction(total));
    }
    if (payload > best_payload) {
      best_payload = payload;
      best_n = n;
    }
  }
  return {best_n, best_payload, best_payload / unit.single_performance,
          best_n == n_max};
}

// Attainable gain grows linearly with the nominal machine capability until a
// workload-specific ceiling cuts it off.
struct RooflineSpec {
  constexpr RooflineSpec(double linear_coefficient, double ceiling)
      : linear_coefficient(linear_coefficient), ceiling(ceiling) {
    if (!(linear_coefficient > 0.0) || !(ceiling > 0.0)) {
      throw std::invalid_argument(
          "RooflineSpec: coefficient and ceiling must be positive");
    }
  }

  double linear_coefficient;
  double ceiling;
};

inline double roofline_gain(const RooflineSpec& spec, double nominal) {
  detail::require_finite(nominal, "roofline_gain");
  if (nominal < 0.0) {
    throw std::invalid_argument("roofline_gain: nominal capability < 0");
  }
  double linear = spec.linear_coefficient * nominal;
  return linear < spec.ceiling ? linear : spec.ceiling;
}

// Speedup a host sees from an accelerator of factor k when the data spends
// t_transfer on the wire: (T_t + T_p) / (T_t + T_p/k).  Strictly below k
// whenever t_transfer > 0; equals k only for t_transfer = 0.
inline Speedup accelerator_apparent_speedup(double t_transfer,
                                            double t_process, double k) {
  detail::require_finite(t_transfer, "accelerator_apparent_speedup(T_t)");
  detail::require_finite(t_process, "accelerator_apparent_speedup(T_p)");
  detail::require_finite(k, "accelerator_apparent_speedup(k)");
  if (t_transfer < 0.0 || t_process <= 0.0 || k < 1.0) {
    throw std::invalid_argument(
        "accelerator_apparent_speedup: need T_t >= 0, T_p > 0, k >= 1");
  }
  detail::dd accelerated =
      detail::add(detail::div(t_process, detail::dd{k, 0.0}), t_transfer);
  return Speedup::from_parts(
      detail::div(detail::two_sum(t_transfer, t_process), accelerated));
}

}  // namespace parascale
