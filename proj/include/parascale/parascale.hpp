#pragma once

// Umbrella header: scaling laws, workload models, the bus-level
// discrete-event simulator, and measurement ingestion.

#include "parascale/bus_sim.hpp"
#include "parascale/measurements.hpp"
#include "parascale/presets.hpp"
#include "parascale/scaling.hpp"
#include "parascale/types.hpp"
#include "parascale/workload.hpp"
