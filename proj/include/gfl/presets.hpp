#pragma once

#include <utility>

#include "gfl/sim.hpp"
#include "gfl/tuning.hpp"

namespace gfl::presets {

/// 8 kVA converter on a very weak medium-voltage grid (SCR 0.5, unity X/R):
/// C1 = 2.7 mF, L = 5.7 mH, C2 = 9.9 uF, Lg = 90 mH, Rg = 28.28 ohm,
/// 50 Hz, 400 V line-to-line.
PlantParams nominal_plant();

/// Pole pairs with 1 ms and 10 ms settling times, damping 0.707 both.
std::pair<PoleSpec, PoleSpec> nominal_pole_specs();

ControllerGains nominal_gains();

/// The bundled demonstration run: power ramp to S_N/sqrt(2) at 10 ms,
/// DC-link reference 735 -> 750 V at 20 ms, reactive ramp at 70 ms, grid
/// magnitude steps 80% / 120% / 100% at 120/160/200 ms, ramp-downs at
/// 220/240 ms; 10 ms transition windows.
Scenario nominal_scenario();

SimConfig nominal_sim_config();

}  // namespace gfl::presets
