#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gfl/controller.hpp"
#include "gfl/plant.hpp"
#include "gfl/trajectory.hpp"

namespace gfl {

// Optional replacements for the default initial state. Defaults:
// v_C1 = v_ref at t=0, v_C2 = 0, i_g = sinusoidal steady state for the
// initial grid voltage with v_C2 = 0, i_L = i_g (the pre-test equilibrium
// where the converter already conducts the no-load grid current).
struct InitOverrides {
    std::optional<double> v_C1;
    std::optional<Complex> i_L;
    std::optional<Complex> v_C2;
    std::optional<Complex> i_g;
};

struct SimConfig {
    double dt = 1e-6;        // integration step [s]
    double t_end = 0.280;    // [s]
    int decimation = 20;     // log every Nth step
    double v_floor = 10.0;   // DC-link fault threshold [V]
    GuardThresholds guard;
    InitOverrides init;
    double settle_factor = 4.6;  // transition completion convention

    void validate() const;  // throws ConfigError
};

/// Classic fixed-step 4-stage Runge-Kutta update. State needs operator+
/// and scalar multiplication; f(t, state) returns the derivative and may
/// throw SimFault at any stage point.
template <typename State, typename F>
State rk4_step(const State& s, double t, double dt, F&& f) {
    const State k1 = f(t, s);
    const State k2 = f(t + 0.5 * dt, s + (0.5 * dt) * k1);
    const State k3 = f(t + 0.5 * dt, s + (0.5 * dt) * k2);
    const State k4 = f(t + dt, s + dt * k3);
    return s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Decimated log of the closed-loop run; one entry per logged instant.
struct TimeSeriesRecord {
    std::vector<double> t;
    std::vector<double> v_C1, v_C1_ref;
    std::vector<Complex> i_L, v_C2, i_g, v_g;
    std::vector<ThreePhase> mu_abc;
    std::vector<double> p_i, p, q;
    std::vector<Complex> e1, e2, e3, w, y;
    std::vector<long> guard_flags;  // cumulative guard activations

    size_t size() const { return t.size(); }
};

struct FaultInfo {
    double t;
    std::string reason;
};

struct SimResult {
    TimeSeriesRecord record;
    std::optional<FaultInfo> fault;
    long guard_count = 0;
    std::vector<std::string> warnings;
};

/// Integrates the closed loop (plant + controller + integral state) over
/// [0, t_end] with events aligned to step boundaries. On a plant fault the
/// partial record is returned together with the fault report.
SimResult run_scenario(const PlantParams& plant, const ControllerGains& gains,
                       const Scenario& scenario, const SimConfig& cfg);

// Per-segment steady-state figures; the window is the last 20% of the
// inter-event interval. `available` is false when the window holds too few
// log points.
struct SegmentMetrics {
    double t_start, t_end;
    bool available;
    double v_C1_err_mean;   // mean |v_C1 - v_C1_ref| [V]
    double i_g_mag_mean;    // mean |i_g| [A]
    double v_C2_mag_mean;   // mean |v_C2| [V]
    double p_dev_max;       // max |p - p_i| [W]
};

// Decay of |e1| after one event: the first instant it drops and stays
// below `fraction` of its post-event peak (searched up to the next event).
struct EventExtinction {
    double event_time;
    double peak_e1;
    bool extinct;
    double extinction_time;  // [s] after the event; valid when extinct
};

struct SummaryMetrics {
    std::vector<SegmentMetrics> segments;
    std::vector<EventExtinction> extinctions;
    double mu_abc_max;     // max per-phase |mu| over the run
    double p_max, q_max;   // largest |p|, |q| excursions [W], [var]
    long guard_count;
};

/// Deterministic summary of a record against its scenario's event list.
SummaryMetrics summarize(const TimeSeriesRecord& rec,
                         const std::vector<ScenarioEvent>& events,
                         double extinct_fraction = 0.01);

void print_summary(std::ostream& os, const SummaryMetrics& m);

/// Complex grid voltage at time t for the scenario's magnitude schedule:
/// multiplier * sqrt(3/2) * vg_peak_phase * e^{j omega t}. The two-time
/// overload picks the magnitude segment as of t_seg.
Complex grid_voltage_at(const ScenarioProfiles& profiles,
                        const PlantParams& plant, double t);
Complex grid_voltage_at(const ScenarioProfiles& profiles,
                        const PlantParams& plant, double t, double t_seg);

/// Default initial state for a scenario (before overrides).
PlantState default_initial_state(const PlantParams& plant,
                                 const ScenarioProfiles& profiles);

/// Scenario copy with event times rounded to the integration-step grid.
Scenario align_events(const Scenario& sc, double dt);

}  // namespace gfl
