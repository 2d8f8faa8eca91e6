// Tour of the scaling-law side of the library: evaluate the classic laws,
// invert a measured efficiency back to an effective parallel fraction, and
// locate the payload peak of a calibrated overhead model.

#include <cstdio>

#include <parascale/parascale.hpp>

namespace ps = parascale;

int main() {
  std::puts("strong vs weak scaling at alpha = 0.95");
  std::puts("     n    amdahl  gustafson  efficiency");
  ps::Alpha alpha = ps::Alpha::from_parallel_fraction(0.95);
  for (std::int64_t n : {2, 8, 32, 128, 512, 2048}) {
    std::printf("%6lld  %8.3f  %9.3f  %10.4f\n", static_cast<long long>(n),
                ps::amdahl_speedup(alpha, n).value(),
                ps::gustafson_speedup(alpha, n).value(),
                ps::amdahl_efficiency(alpha, n).value());
  }

  // a measured (efficiency, cores) point pins down the effective alpha
  ps::Efficiency measured = ps::Efficiency::from_value(0.74);
  std::int64_t cores = 10'000'000;
  ps::Alpha effective = ps::alpha_from_efficiency(measured, cores);
  std::printf("\nE = %.2f on %lld cores implies a serial fraction of %.3e\n",
              measured.value(), static_cast<long long>(cores),
              effective.serial_fraction());

  // growing overheads eventually beat the added units: find the sweet spot
  ps::PeakResult peak = ps::find_peak(
      ps::SystemShape(1, 1.0),
      ps::preset_contributions(ps::kHousekeepingBoundPreset),
      ps::preset_comm_model(ps::kHousekeepingBoundPreset), 10'000);
  std::printf("\nhousekeeping-bound preset peaks at %lld units (gain %.2fx)\n",
              static_cast<long long>(peak.n_peak), peak.gain);
  return 0;
}
