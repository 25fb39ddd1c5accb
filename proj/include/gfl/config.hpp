#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "gfl/presets.hpp"
#include "gfl/sim.hpp"
#include "gfl/tuning.hpp"

namespace gfl {

// A full run description as read from a config file. The controller is
// given either as two pole specs or as explicit gains, never both.
struct RunConfig {
    PlantParams plant = presets::nominal_plant();
    std::optional<std::pair<PoleSpec, PoleSpec>> pole_specs;
    std::optional<ControllerGains> explicit_gains;
    double tuning_settle_factor = 4.6;
    Scenario scenario;
    SimConfig sim;

    ControllerGains resolve_gains() const;
};

/// Parses the flat key = value format ('#' comments, units in key names).
/// Unknown keys, duplicate keys, malformed values and schema violations
/// throw ConfigError naming the field.
RunConfig parse_config(std::istream& is);

RunConfig load_config(const std::string& path);

/// The bundled demonstration configuration (what configs/paper_s4.cfg
/// encodes).
RunConfig default_config();

}  // namespace gfl
