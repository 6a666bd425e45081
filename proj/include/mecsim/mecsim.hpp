#pragma once

// Umbrella header.

#include "app.hpp"             // IWYU pragma: export
#include "engine.hpp"          // IWYU pragma: export
#include "epc.hpp"             // IWYU pragma: export
#include "event.hpp"           // IWYU pragma: export
#include "exports.hpp"         // IWYU pragma: export
#include "metrics.hpp"         // IWYU pragma: export
#include "migration.hpp"       // IWYU pragma: export
#include "orchestrator.hpp"    // IWYU pragma: export
#include "radio.hpp"           // IWYU pragma: export
#include "random.hpp"          // IWYU pragma: export
#include "scenario.hpp"        // IWYU pragma: export
#include "sim_time.hpp"        // IWYU pragma: export
#include "simulation.hpp"      // IWYU pragma: export
#include "trace.hpp"           // IWYU pragma: export
