#include "gfl/presets.hpp"

#include <cmath>
#include <numbers>

namespace gfl::presets {

PlantParams nominal_plant() {
    PlantParams p;
    p.C1 = 2.7e-3;
    p.L = 5.7e-3;
    p.C2 = 9.9e-6;
    p.Lg = 90e-3;
    p.Rg = 28.28;
    p.omega = 2.0 * std::numbers::pi * 50.0;
    p.vg_peak_phase = 400.0 * std::sqrt(2.0 / 3.0);  // 230.94 Vrms per phase
    return p;
}

std::pair<PoleSpec, PoleSpec> nominal_pole_specs() {
    return {PoleSpec{1e-3, 0.707}, PoleSpec{10e-3, 0.707}};
}

ControllerGains nominal_gains() {
    const auto [a, b] = nominal_pole_specs();
    return gains_from_specs(a, b);
}

Scenario nominal_scenario() {
    Scenario sc;
    sc.v_ref0 = 735.0;
    sc.q_ref0 = 0.0;
    sc.p_i0 = 0.0;
    sc.s_rating = 8000.0;
    const double s2 = sc.s_rating / std::sqrt(2.0);
    sc.events = {
        {0.010, EventKind::input_power, s2, 0.010},
        {0.020, EventKind::dc_ref, 750.0, 0.010},
        {0.070, EventKind::reactive_ref, s2, 0.010},
        {0.120, EventKind::grid_magnitude, 0.8, 0.0},
        {0.160, EventKind::grid_magnitude, 1.2, 0.0},
        {0.200, EventKind::grid_magnitude, 1.0, 0.0},
        {0.220, EventKind::reactive_ref, 0.0, 0.010},
        {0.240, EventKind::input_power, 0.0, 0.010},
    };
    return sc;
}

SimConfig nominal_sim_config() {
    return SimConfig{};
}

}  // namespace gfl::presets
