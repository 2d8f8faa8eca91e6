#pragma once

// Discrete-event model of layered neuron-to-neuron traffic over either
// direct point-to-point wiring or a shared, arbitrated bus.
//
// Time is integer picoseconds end to end, so runs are bit-exact replayable:
// the event queue orders by (time, kind, source, destination) and bus
// arbitration is FIFO by request time with ties to the lowest neuron id.
// Messages crossing a shared bus pay the arbitration legs (2 * t_bus_reach)
// serially; the physical delivery t_delivery overlaps the next transaction.
// A bus found idle is assumed to carry foreign traffic and charges t_foreign
// before the first grant of the burst, which makes a full layer of L
// messages drain in exactly L * 2*t_bus_reach + t_delivery + t_foreign.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <deque>
#include <limits>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "parascale/workload.hpp"

namespace parascale {

using Picoseconds = std::chrono::duration<std::int64_t, std::pico>;

inline constexpr Picoseconds picoseconds(std::int64_t n) {
  return Picoseconds{n};
}

struct BusTiming {
  Picoseconds t_bus_reach{0};   // one arbitration leg; paid twice per message
  Picoseconds t_delivery{0};    // physical transfer once the bus is won
  Picoseconds t_process{0};     // compute time per neuron activation
  Picoseconds t_foreign{0};     // holdoff when acquiring an idle, shared bus
};

struct DirectParallel {};

enum class ArbitrationPolicy { FifoByRequestTime };

struct SharedBus {
  ArbitrationPolicy policy = ArbitrationPolicy::FifoByRequestTime;
};

using Wiring = std::variant<DirectParallel, SharedBus>;

struct SimTopology {
  AnnTopology network;
  Wiring wiring;
};

struct GridClock {
  Picoseconds grid_period{std::chrono::milliseconds{1}};
  Picoseconds device_clock{std::chrono::nanoseconds{1}};
};

struct DropPolicy {
  static constexpr std::int64_t kNeverDrop =
      std::numeric_limits<std::int64_t>::max();
  // Delivery cycles a queued message survives while its receiver stays busy.
  std::int64_t max_busy_cycles = kNeverDrop;
};

enum class EventKind : std::uint8_t {
  SendRequest,
  BusGranted,
  DeliveryComplete,
  ComputeStart,
  ComputeDone,
  Dropped,
  GridTick,
};

inline const char* kind_name(EventKind k) {
  switch (k) {
    case EventKind::SendRequest: return "send_request";
    case EventKind::BusGranted: return "bus_granted";
    case EventKind::DeliveryComplete: return "delivery_complete";
    case EventKind::ComputeStart: return "compute_start";
    case EventKind::ComputeDone: return "compute_done";
    case EventKind::Dropped: return "dropped";
    case EventKind::GridTick: return "grid_tick";
  }
  return "unknown";
}

struct Event {
  std::int64_t time_ps;
  EventKind kind;
  std::int32_t source;       // neuron id, -1 when not applicable
  std::int32_t destination;  // neuron id, -1 when not applicable

  friend bool operator==(const Event&, const Event&) = default;
};

// Synchronized neurons wait for their full input set before computing;
// streaming neurons recompute (and re-emit) on every arrival, which is
// where glitch windows and receiver-busy drops come from.
enum class NeuronSemantics { Synchronized, Streaming };

enum class ForeignTraffic { FixedHold, UniformRandomHold };

struct SimOptions {
  NeuronSemantics semantics = NeuronSemantics::Synchronized;
  bool per_layer_bus = false;       // one bus per layer boundary
  bool grid_synchronized = false;   // compute starts snap to the grid clock
  ForeignTraffic foreign = ForeignTraffic::FixedHold;
  std::uint64_t seed = 0;           // for UniformRandomHold
  bool record_event_log = false;
  std::int64_t max_neurons = 100000;
  std::uint64_t max_events = 80000000;
};

class EventOverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BoundaryTransfer {
  int boundary;  // index of the sending layer (0 = inputs)
  std::uint64_t messages;
  std::int64_t first_request_ps;
  std::int64_t last_delivery_ps;
};

struct NeuronActivity {
  std::int32_t id;
  std::int32_t layer;
  std::int64_t computes;
  std::int64_t busy_ps;
  std::int64_t idle_ps;
  std::int64_t apparent_ps;  // first upstream send request -> last compute done
  std::int64_t done_ps;
  std::int64_t glitch_ps;    // output unstable for this long (streaming)
};

struct SimReport {
  // configuration echo
  AnnTopology network{1, 1, 1, 1};
  bool shared_bus = false;
  NeuronSemantics semantics = NeuronSemantics::Synchronized;
  bool per_layer_bus = false;
  bool grid_synchronized = false;
  BusTiming timing;
  GridClock grid;
  std::int64_t max_busy_cycles = DropPolicy::kNeverDrop;
  std::uint64_t seed = 0;

  // totals
  std::int64_t total_time_ps = 0;
  std::uint64_t messages_sent = 0;
  std::uint64_t messages_delivered = 0;
  std::uint64_t messages_dropped = 0;
  std::uint64_t messages_in_flight = 0;
  std::int64_t bus_busy_ps = 0;
  double bus_utilization = 0.0;

  double apparent_ratio_mean = 0.0;
  double apparent_ratio_max = 0.0;
  std::int64_t glitch_total_ps = 0;
  std::int64_t glitch_max_ps = 0;

  std::vector<NeuronActivity> neurons;       // computing neurons only
  std::vector<BoundaryTransfer> boundaries;  // one per layer boundary
  std::vector<Event> event_log;              // when recording was requested
};

namespace detail {

inline void validate_timing(const BusTiming& t) {
  if (t.t_bus_reach < Picoseconds{0} || t.t_delivery < Picoseconds{0} ||
      t.t_process < Picoseconds{0} || t.t_foreign < Picoseconds{0}) {
    throw std::invalid_argument("BusTiming: components must be >= 0");
  }
}

inline void validate_grid(const GridClock& g) {
  if (g.device_clock <= Picoseconds{0}) {
    throw std::invalid_argument("GridClock: device clock must be positive");
  }
  if (g.grid_period < g.device_clock) {
    throw std::invalid_argument(
        "GridClock: grid period must be >= device clock");
  }
}

inline std::int64_t checked_mul_i64(std::int64_t a, std::int64_t b,
                                    const char* what) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error(std::string(what) + ": time overflows 64 bits");
  }
  return r;
}

}  // namespace detail

// Closed-form drain time of one layer burst: the instant the last of
// `senders` messages lands, measured from the first send request.  Direct
// wiring transfers everything concurrently, so only t_delivery remains.
inline Picoseconds layer_transfer_time(const BusTiming& timing,
                                       std::int64_t senders,
                                       const Wiring& wiring = SharedBus{}) {
  detail::validate_timing(timing);
  if (senders < 1) {
    throw std::invalid_argument("layer_transfer_time: senders must be >= 1");
  }
  if (std::holds_alternative<DirectParallel>(wiring)) {
    return timing.t_delivery;
  }
  std::int64_t arbitration = detail::checked_mul_i64(
      senders, 2 * timing.t_bus_reach.count(), "layer_transfer_time");
  return Picoseconds{arbitration + timing.t_delivery.count() +
                     timing.t_foreign.count()};
}

struct ApparentRatio {
  double mean;
  double max;
};

inline ApparentRatio apparent_processing_ratio(const SimReport& r) {
  return {r.apparent_ratio_mean, r.apparent_ratio_max};
}

inline std::uint64_t drop_count(const SimReport& r) {
  return r.messages_dropped;
}

struct GridBound {
  double max_steps;          // wall time / grid period
  double grid_device_ratio;  // grid period / device clock
};

// How many synchronized steps fit in the wall time, and how much coarser the
// grid is than the device clock.
inline GridBound grid_performance_bound(const GridClock& grid,
                                        Picoseconds wall_time) {
  detail::validate_grid(grid);
  if (wall_time < Picoseconds{0}) {
    throw std::invalid_argument("grid_performance_bound: wall time < 0");
  }
  return {static_cast<double>(wall_time.count()) /
              static_cast<double>(grid.grid_period.count()),
          static_cast<double>(grid.grid_period.count()) /
              static_cast<double>(grid.device_clock.count())};
}

namespace detail {

struct PendingArrival {
  std::int64_t time_ps;
  std::int32_t source;
};

struct NeuronInfo {
  std::int32_t layer = 0;
  std::int64_t expected = 0;
  std::int64_t received = 0;
  std::int64_t first_request = std::numeric_limits<std::int64_t>::max();
  std::int64_t busy_until = std::numeric_limits<std::int64_t>::min();
  std::int64_t computes = 0;
  std::int64_t busy_total = 0;
  std::int64_t first_output = -1;
  std::int64_t last_output = -1;
  std::int64_t done = 0;
  std::deque<PendingArrival> backlog;
};

struct BusState {
  std::int64_t free_at = std::numeric_limits<std::int64_t>::min() / 4;
  std::int64_t busy_total = 0;
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time_ps != b.time_ps) return a.time_ps > b.time_ps;
    if (a.kind != b.kind) return a.kind > b.kind;
    if (a.source != b.source) return a.source > b.source;
    return a.destination > b.destination;
  }
};

}  // namespace detail

// Runs the network once: inputs fire at t = 0, activity propagates layer by
// layer, the run ends when the queue drains.  Deterministic for a given
// configuration and seed.  Exceeding opt.max_events aborts the run with
// EventOverflowError and discards all partial results.
inline SimReport simulate(const SimTopology& sim, const BusTiming& timing,
                          const GridClock& grid = {},
                          const DropPolicy& drop = {},
                          const SimOptions& opt = {}) {
  detail::validate_timing(timing);
  detail::validate_grid(grid);
  if (drop.max_busy_cycles < 1) {
    throw std::invalid_argument("DropPolicy: max_busy_cycles must be >= 1");
  }
  const AnnTopology& net = sim.network;
  const std::int64_t total_neurons = net.total_neurons();
  const std::int64_t id_cap = std::numeric_limits<std::int32_t>::max();
  if (opt.max_neurons < 1 || total_neurons > opt.max_neurons ||
      total_neurons > id_cap) {
    throw std::invalid_argument(
        "simulate: topology has " + std::to_string(total_neurons) +
        " neurons, limit is " +
        std::to_string(std::min(opt.max_neurons, id_cap)));
  }

  const bool shared = std::holds_alternative<SharedBus>(sim.wiring);
  const bool streaming = opt.semantics == NeuronSemantics::Streaming;
  const std::int64_t tb2 = 2 * timing.t_bus_reach.count();
  const std::int64_t td = timing.t_delivery.count();
  const std::int64_t tp = timing.t_process.count();
  const std::int64_t x_hold = timing.t_foreign.count();
  const std::int64_t grid_period = grid.grid_period.count();
  // One receiver slot per delivery opportunity; what a queued message's
  // patience is measured in.
  const std::int64_t delivery_cycle = (shared ? tb2 : 0) + td;

  // layers: 0 = inputs, 1..h = hidden, h+1 = outputs
  const std::int32_t layer_count = static_cast<std::int32_t>(net.hidden_layers) + 2;
  std::vector<std::int64_t> width(layer_count);
  width.front() = net.inputs;
  for (std::int32_t l = 1; l <= net.hidden_layers; ++l) width[l] = net.hidden_width;
  width.back() = net.outputs;
  std::vector<std::int64_t> start(layer_count + 1, 0);
  for (std::int32_t l = 0; l < layer_count; ++l) start[l + 1] = start[l] + width[l];

  std::vector<detail::NeuronInfo> info(total_neurons);
  for (std::int32_t l = 0; l < layer_count; ++l) {
    for (std::int64_t id = start[l]; id < start[l + 1]; ++id) {
      info[id].layer = l;
      if (l > 0) info[id].expected = width[l - 1];
    }
  }

  const int bus_count = opt.per_layer_bus ? layer_count - 1 : 1;
  std::vector<detail::BusState> buses(shared ? bus_count : 0);
  std::mt19937_64 rng(opt.seed);
  auto foreign_hold = [&]() -> std::int64_t {
    if (opt.foreign == ForeignTraffic::FixedHold || x_hold == 0) return x_hold;
    return static_cast<std::int64_t>(rng() %
                                     static_cast<std::uint64_t>(x_hold + 1));
  };

  SimReport report;
  report.network = net;
  report.shared_bus = shared;
  report.semantics = opt.semantics;
  report.per_layer_bus = opt.per_layer_bus;
  report.grid_synchronized = opt.grid_synchronized;
  report.timing = timing;
  report.grid = grid;
  report.max_busy_cycles = drop.max_busy_cycles;
  report.seed = opt.seed;
  report.boundaries.resize(layer_count - 1);
  for (std::int32_t b = 0; b < layer_count - 1; ++b) {
    report.boundaries[b] = {b, 0, std::numeric_limits<std::int64_t>::max(), -1};
  }

  std::priority_queue<Event, std::vector<Event>, detail::EventAfter> queue;
  std::uint64_t scheduled = 0;
  auto schedule = [&](Event e) {
    if (++scheduled > opt.max_events) {
      throw EventOverflowError(
          "simulate: event budget of " + std::to_string(opt.max_events) +
          " exhausted; partial results discarded");
    }
    queue.push(e);
  };
  auto note = [&](Event e) {  // log-only kinds ride the queue for ordering
    if (opt.record_event_log) schedule(e);
  };

  auto quantize = [&](std::int64_t t) -> std::int64_t {
    if (!opt.grid_synchronized) return t;
    std::int64_t steps = (t + grid_period - 1) / grid_period;
    return steps * grid_period;
  };

  auto begin_compute = [&](std::int64_t now, std::int32_t id) {
    std::int64_t begin = quantize(now);
    if (begin != now) note({begin, EventKind::GridTick, -1, id});
    info[id].busy_until = begin + tp;
    schedule({begin, EventKind::ComputeStart, -1, id});
  };

  // inputs fire at t = 0
  for (std::int64_t src = start[0]; src < start[1]; ++src) {
    for (std::int64_t dst = start[1]; dst < start[2]; ++dst) {
      schedule({0, EventKind::SendRequest, static_cast<std::int32_t>(src),
                static_cast<std::int32_t>(dst)});
    }
  }

  std::int64_t last_time = 0;
  while (!queue.empty()) {
    Event e = queue.top();
    queue.pop();
    last_time = e.time_ps;
    if (opt.record_event_log) report.event_log.push_back(e);

    switch (e.kind) {
      case EventKind::SendRequest: {
        report.messages_sent += 1;
        detail::NeuronInfo& dst = info[e.destination];
        dst.first_request = std::min(dst.first_request, e.time_ps);
        const std::int32_t b = info[e.source].layer;
        BoundaryTransfer& bt = report.boundaries[b];
        bt.messages += 1;
        bt.first_request_ps = std::min(bt.first_request_ps, e.time_ps);
        if (!shared) {
          schedule({e.time_ps + td, EventKind::DeliveryComplete, e.source,
                    e.destination});
          break;
        }
        detail::BusState& bus = buses[opt.per_layer_bus ? b : 0];
        std::int64_t grant = e.time_ps > bus.free_at
                                 ? e.time_ps + foreign_hold()
                                 : bus.free_at;
        bus.free_at = grant + tb2;
        bus.busy_total += tb2;
        note({grant, EventKind::BusGranted, e.source, e.destination});
        schedule({grant + tb2 + td, EventKind::DeliveryComplete, e.source,
                  e.destination});
        break;
      }

      case EventKind::DeliveryComplete: {
        report.boundaries[info[e.source].layer].last_delivery_ps = std::max(
            report.boundaries[info[e.source].layer].last_delivery_ps,
            e.time_ps);
        detail::NeuronInfo& dst = info[e.destination];
        if (!streaming) {
          report.messages_delivered += 1;
          if (++dst.received == dst.expected) {
            begin_compute(e.time_ps, e.destination);
          }
        } else if (e.time_ps >= dst.busy_until) {
          report.messages_delivered += 1;
          begin_compute(e.time_ps, e.destination);
        } else {
          dst.backlog.push_back({e.time_ps, e.source});
        }
        break;
      }

      case EventKind::ComputeStart: {
        detail::NeuronInfo& n = info[e.destination];
        n.computes += 1;
        n.busy_total += tp;
        schedule({e.time_ps + tp, EventKind::ComputeDone, -1, e.destination});
        break;
      }

      case EventKind::ComputeDone: {
        detail::NeuronInfo& n = info[e.destination];
        n.done = e.time_ps;
        n.last_output = e.time_ps;
        if (n.first_output < 0) n.first_output = e.time_ps;
        if (n.layer < layer_count - 1) {
          for (std::int64_t dst = start[n.layer + 1];
               dst < start[n.layer + 2]; ++dst) {
            schedule({e.time_ps, EventKind::SendRequest, e.destination,
                      static_cast<std::int32_t>(dst)});
          }
        }
        if (streaming) {
          // Serve the backlog: a message only survives the wait if the
          // receiver frees up within its patience budget.
          const bool can_drop = drop.max_busy_cycles != DropPolicy::kNeverDrop;
          const std::int64_t patience =
              can_drop ? detail::checked_mul_i64(drop.max_busy_cycles,
                                                 delivery_cycle, "simulate")
                       : 0;
          while (!n.backlog.empty()) {
            detail::PendingArrival head = n.backlog.front();
            n.backlog.pop_front();
            bool expired = can_drop && e.time_ps - head.time_ps > patience;
            if (expired) {
              report.messages_dropped += 1;
              note({e.time_ps, EventKind::Dropped, head.source,
                    e.destination});
              continue;
            }
            report.messages_delivered += 1;
            begin_compute(e.time_ps, e.destination);
            break;
          }
        }
        break;
      }

      case EventKind::BusGranted:
      case EventKind::Dropped:
      case EventKind::GridTick:
        break;  // log-only
    }
  }

  report.total_time_ps = last_time;
  report.messages_in_flight =
      report.messages_sent - report.messages_delivered -
      report.messages_dropped;

  double ratio_sum = 0.0;
  std::int64_t rated = 0;
  for (std::int64_t id = start[1]; id < total_neurons; ++id) {
    const detail::NeuronInfo& n = info[id];
    if (n.computes == 0) continue;
    NeuronActivity a;
    a.id = static_cast<std::int32_t>(id);
    a.layer = n.layer;
    a.computes = n.computes;
    a.busy_ps = n.busy_total;
    a.apparent_ps = n.done - n.first_request;
    a.idle_ps = a.apparent_ps - a.busy_ps;
    a.done_ps = n.done;
    a.glitch_ps = n.last_output - n.first_output;
    report.neurons.push_back(a);
    report.glitch_total_ps += a.glitch_ps;
    report.glitch_max_ps = std::max(report.glitch_max_ps, a.glitch_ps);
    if (n.busy_total > 0) {
      double ratio = static_cast<double>(a.apparent_ps) /
                     static_cast<double>(a.busy_ps);
      ratio_sum += ratio;
      report.apparent_ratio_max = std::max(report.apparent_ratio_max, ratio);
      rated += 1;
    }
  }
  if (rated > 0) {
    report.apparent_ratio_mean = ratio_sum / static_cast<double>(rated);
  }

  for (const detail::BusState& bus : buses) {
    report.bus_busy_ps += bus.busy_total;
  }
  if (shared && report.total_time_ps > 0) {
    report.bus_utilization =
        static_cast<double>(report.bus_busy_ps) /
        (static_cast<double>(bus_count) *
         static_cast<double>(report.total_time_ps));
  }

  return report;
}

}  // namespace parascale
