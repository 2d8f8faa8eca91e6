// Shared-bus contention in a layered network: compare direct wiring against
// a single arbitrated bus, then let a streaming run drop stale inputs.

#include <cstdio>

#include <parascale/parascale.hpp>

namespace ps = parascale;

namespace {

void report_line(const char* label, const ps::SimReport& r) {
  ps::ApparentRatio ratio = ps::apparent_processing_ratio(r);
  std::printf("%-22s %10.3f us   ratio mean %.3f  max %.3f   dropped %llu\n",
              label, static_cast<double>(r.total_time_ps) / 1e6, ratio.mean,
              ratio.max, static_cast<unsigned long long>(r.messages_dropped));
}

}  // namespace

int main() {
  ps::AnnTopology net(1, 2, 64, 1);  // 1x64^2x1
  ps::BusTiming timing;
  timing.t_bus_reach = ps::picoseconds(5'000);  // 5 ns per arbitration leg
  timing.t_delivery = ps::picoseconds(2'000);
  // Fast compute relative to the burst drain time, so layer bursts overlap
  // and splitting the bus per boundary has something to relieve.
  timing.t_process = ps::picoseconds(100'000);

  std::printf("topology %s, %llu messages per pass\n\n",
              net.to_string().c_str(),
              static_cast<unsigned long long>(
                  ps::message_count(ps::AnnLayered{net})));

  report_line("direct wiring",
              ps::simulate({net, ps::DirectParallel{}}, timing));
  report_line("one shared bus", ps::simulate({net, ps::SharedBus{}}, timing));

  ps::SimOptions per_layer;
  per_layer.per_layer_bus = true;
  report_line("bus per boundary",
              ps::simulate({net, ps::SharedBus{}}, timing, {}, {}, per_layer));

  // streaming neurons recompute on every arrival unless stale inputs are shed
  ps::SimOptions streaming;
  streaming.semantics = ps::NeuronSemantics::Streaming;
  ps::DropPolicy impatient{2};
  report_line("streaming, impatient",
              ps::simulate({net, ps::SharedBus{}}, timing, {}, impatient,
                           streaming));

  // how a 1 ms grid clock relates to the 1 ns device clock
  ps::GridBound bound = ps::grid_performance_bound(
      ps::GridClock{}, ps::picoseconds(1'000'000'000'000));
  std::printf("\ngrid / device clock ratio: %.0f (%g steps per second)\n",
              bound.grid_device_ratio, bound.max_steps);
  return 0;
}
