#pragma once

// Shipped model presets.
//
// Every constant in this file is CALIBRATED, NOT MEASURED: the values were
// fitted so the models reproduce the qualitative behavior of published
// benchmark families, and they should be expected to drift as hardware
// evolves.  Bump kPresetsVersion whenever a constant changes so downstream
// results can be tied to the calibration they came from.

#include <vector>

#include "parascale/workload.hpp"

namespace parascale {

inline constexpr int kPresetsVersion = 1;

// A payload curve preset: one fixed housekeeping share plus a communication
// share growing linearly with the processor count.  The peak sits at
// N* = sqrt((1 - base) / comm_coefficient).
struct CurvePreset {
  const char* name;
  const char* description;
  double base_serial_fraction;
  double comm_coefficient_per_processor;
};

// General-purpose code dominated by sequential housekeeping: the payload
// gain tops out slightly above 8 at 24 processing units.
inline constexpr CurvePreset kHousekeepingBoundPreset{
    "housekeeping-bound",
    "housekeeping-dominated workload; gain peaks near 8 at 20-30 units "
    "(calibrated, not measured)",
    0.045, 1.6e-3};

// Image-processing batch jobs of the IPDATA flavor: best runs come out
// up to 30x faster, with the optimum near 90 processors.
inline constexpr CurvePreset kIpdataPreset{
    "ipdata",
    "image-processing batch workload; speedup tops out below 30x near 90 "
    "units (calibrated, not measured)",
    0.0125, 1.25e-4};

inline std::vector<SerialFractionContribution> preset_contributions(
    const CurvePreset& preset) {
  return {SerialFractionContribution(preset.name,
                                     preset.base_serial_fraction)};
}

inline CommModel preset_comm_model(const CurvePreset& preset) {
  return linear_communication(preset.comm_coefficient_per_processor);
}

// Roofline presets for the attainable performance gain of benchmark
// families.  The dense-solver ceiling sits a factor of 200 above the
// sparse-iterative one.
struct RooflinePreset {
  const char* name;
  RooflineSpec spec;
  const char* note;
};

inline constexpr RooflinePreset kHplRooflinePreset{
    "hpl", RooflineSpec(1.0, 1.0e6), "calibrated, not measured"};

inline constexpr RooflinePreset kHpcgRooflinePreset{
    "hpcg", RooflineSpec(1.0, 5.0e3),
    "calibrated, not measured; ceiling = hpl ceiling / 200"};

inline constexpr RooflinePreset kBrainSimRooflinePreset{
    "brain-sim", RooflineSpec(1.0, 1.0e3),
    "guessed from a single published run, not calibrated; the realistic "
    "ceiling may be up to two orders of magnitude lower"};

}  // namespace parascale
