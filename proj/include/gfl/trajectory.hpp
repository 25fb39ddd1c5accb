#pragma once

#include <string>
#include <vector>

#include "gfl/frames.hpp"

namespace gfl {

// Configuration problems (bad scenario, bad file) are reported with the
// offending field and reason.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what_) : std::runtime_error(what_) {}
};

enum class EventKind { input_power, dc_ref, reactive_ref, grid_magnitude };

const char* to_string(EventKind k);
EventKind event_kind_from_string(const std::string& s);

// A timed transition of one scenario quantity. window = 0 means a step;
// grid_magnitude events must be steps.
struct ScenarioEvent {
    double time;    // [s]
    EventKind kind;
    double target;  // W, V, var, or fraction of nominal grid magnitude
    double window;  // transition duration [s]
};

// Scenario = initial levels plus the sorted event list.
struct Scenario {
    double v_ref0 = 735.0;     // initial DC-link reference [V]
    double q_ref0 = 0.0;       // initial reactive-power reference [var]
    double p_i0 = 0.0;         // initial input power [W]
    double s_rating = 8000.0;  // converter apparent-power rating [VA]
    std::vector<ScenarioEvent> events;

    // Throws ConfigError: unsorted events, negative times/windows,
    // overlapping transitions of one kind, non-step grid events.
    void validate() const;
};

// Value of a profile with its first three time derivatives.
struct Deriv3 {
    double value;
    double d1;
    double d2;
    double d3;
};

/// First-order exponential transition from `from` toward `to` starting at
/// t0 with time constant tau. Before t0 returns (from, 0, 0, 0). The value
/// approaches `to` monotonically; d1 jumps at t0.
Deriv3 exp_transition(double t, double t0, double from, double to, double tau);

/// Critically damped third-order-lag transition: same end points, but the
/// value is C^2 (d1 and d2 are continuous through t0, only d3 jumps).
/// Monotone, no overshoot.
Deriv3 smooth_transition(double t, double t0, double from, double to,
                         double tau);

// Instantaneous reference values and shaped input power with the
// derivatives the control law consumes. q_ref_int is the analytic integral
// of q_ref from t = 0.
struct ReferenceFrame {
    double v_ref, v_ref_d1, v_ref_d2, v_ref_d3;  // [V], [V/s], [V/s^2], [V/s^3]
    double q_ref, q_ref_d1, q_ref_d2;            // [var], [var/s], [var/s^2]
    double q_ref_int;                            // [J]
    double p_i, p_i_d1, p_i_d2;                  // [W], [W/s], [W/s^2]
};

// Compiled scenario: per-kind piecewise profiles with continuity across
// segment boundaries and closed-form integrals. Transition time constants
// follow the completion convention tau = window / x99, where the profile
// reaches within e^(-settle_factor) of the target at the window end
// (x99 = settle_factor for the exponential; solved numerically for the
// third-order lag). dc_ref and reactive_ref transitions use the smooth
// profile so the tracking errors stay continuous at ramp starts;
// input_power uses the plain exponential.
class ScenarioProfiles {
public:
    explicit ScenarioProfiles(const Scenario& sc, double settle_factor = 4.6);

    ReferenceFrame reference_at(double t) const;

    /// Piecewise-constant multiplier applied to the nominal grid magnitude.
    double grid_magnitude_at(double t) const;

    /// Same evaluations, but with the active segments chosen as of t_seg
    /// instead of t. Integrator steps crossing an event boundary evaluate
    /// their stages against the segments active at the step start, so each
    /// step integrates one smooth piece and the switch lands exactly on the
    /// boundary.
    ReferenceFrame reference_at(double t, double t_seg) const;
    double grid_magnitude_at(double t, double t_seg) const;

    double settle_factor() const { return settle_factor_; }

private:
    struct Segment {
        double t0;
        double from;
        double to;
        double tau;     // 0 = step
        bool smooth;
        double int0;    // profile integral accumulated on [0, t0)
    };
    struct Profile {
        double init{};
        std::vector<Segment> segs;
        Deriv3 eval(double t, double t_seg) const;
        double integral(double t, double t_seg) const;
    };

    static Profile build(double init, EventKind kind,
                         const std::vector<ScenarioEvent>& events, double tau_div,
                         bool smooth);

    double settle_factor_;
    Profile v_ref_, q_ref_, p_i_;
    std::vector<ScenarioEvent> grid_events_;
};

/// Solves (1 + x + x^2/2) e^(-x) = e^(-settle_factor) for x, i.e. the
/// third-order-lag argument that reaches the same completion fraction the
/// plain exponential reaches at settle_factor.
double smooth_completion_argument(double settle_factor);

}  // namespace gfl
