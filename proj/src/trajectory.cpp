#include "gfl/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gfl {

namespace {
// Stage times of one integration step can differ from an aligned event time
// by a few ulps; segment lookup tolerates that.
constexpr double kTimeTol = 1e-12;
}  // namespace

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::input_power: return "input_power";
        case EventKind::dc_ref: return "dc_ref";
        case EventKind::reactive_ref: return "reactive_ref";
        case EventKind::grid_magnitude: return "grid_magnitude";
    }
    return "?";
}

EventKind event_kind_from_string(const std::string& s) {
    if (s == "input_power") return EventKind::input_power;
    if (s == "dc_ref") return EventKind::dc_ref;
    if (s == "reactive_ref") return EventKind::reactive_ref;
    if (s == "grid_magnitude") return EventKind::grid_magnitude;
    throw ConfigError("unknown event kind '" + s + "'");
}

void Scenario::validate() const {
    if (!(s_rating > 0.0)) {
        throw ConfigError("scenario.s_rating_VA: must be > 0");
    }
    if (!(v_ref0 > 0.0)) {
        throw ConfigError("scenario.v_ref0_V: must be > 0");
    }
    double prev_time = -1.0;
    // last transition end per kind, for the overlap check
    double busy_until[4] = {0.0, 0.0, 0.0, 0.0};
    for (size_t i = 0; i < events.size(); ++i) {
        const ScenarioEvent& e = events[i];
        std::ostringstream field;
        field << "scenario.event." << (i + 1);
        if (e.time < 0.0 || !std::isfinite(e.time)) {
            throw ConfigError(field.str() + ": time must be >= 0");
        }
        if (e.window < 0.0 || !std::isfinite(e.window)) {
            throw ConfigError(field.str() + ": window must be >= 0");
        }
        if (e.time < prev_time) {
            throw ConfigError(field.str() + ": events must be sorted by time");
        }
        prev_time = e.time;
        if (e.kind == EventKind::grid_magnitude && e.window != 0.0) {
            throw ConfigError(field.str() +
                              ": grid_magnitude events must be steps (window 0)");
        }
        const int k = static_cast<int>(e.kind);
        if (e.time < busy_until[k] - kTimeTol) {
            throw ConfigError(field.str() +
                              ": overlaps the previous transition of kind " +
                              to_string(e.kind));
        }
        busy_until[k] = e.time + e.window;
    }
}

Deriv3 exp_transition(double t, double t0, double from, double to,
                      double tau) {
    if (t < t0) {
        return {from, 0.0, 0.0, 0.0};
    }
    const double d = to - from;
    const double E = std::exp(-(t - t0) / tau);
    return {to - d * E, d * E / tau, -d * E / (tau * tau),
            d * E / (tau * tau * tau)};
}

Deriv3 smooth_transition(double t, double t0, double from, double to,
                         double tau) {
    if (t < t0) {
        return {from, 0.0, 0.0, 0.0};
    }
    const double d = to - from;
    const double x = (t - t0) / tau;
    const double E = std::exp(-x);
    const double phi = (1.0 + x + 0.5 * x * x) * E;
    return {to - d * phi,
            d * (0.5 * x * x) * E / tau,
            d * (x - 0.5 * x * x) * E / (tau * tau),
            d * (1.0 - 2.0 * x + 0.5 * x * x) * E / (tau * tau * tau)};
}

double smooth_completion_argument(double settle_factor) {
    // Newton on f(x) = log(1 + x + x^2/2) - x + settle_factor.
    double x = settle_factor + 2.0 * std::log(settle_factor);
    for (int i = 0; i < 50; ++i) {
        const double g = 1.0 + x + 0.5 * x * x;
        const double f = std::log(g) - x + settle_factor;
        const double df = (1.0 + x) / g - 1.0;
        const double step = f / df;
        x -= step;
        if (std::abs(step) < 1e-14 * x) break;
    }
    return x;
}

namespace {

double segment_integral(double from, double to, double tau, bool smooth,
                        double dt) {
    // integral of the transition value over [t0, t0 + dt]
    if (tau == 0.0) {
        return to * dt;
    }
    const double d = to - from;
    const double X = dt / tau;
    const double E = std::exp(-X);
    if (!smooth) {
        return to * dt - d * tau * (1.0 - E);
    }
    return to * dt - d * tau * (3.0 - E * (3.0 + 2.0 * X + 0.5 * X * X));
}

}  // namespace

Deriv3 ScenarioProfiles::Profile::eval(double t, double t_seg) const {
    const Segment* active = nullptr;
    for (const Segment& s : segs) {
        if (t_seg >= s.t0 - kTimeTol) {
            active = &s;
        } else {
            break;
        }
    }
    if (active == nullptr) {
        return {init, 0.0, 0.0, 0.0};
    }
    if (active->tau == 0.0) {
        return {active->to, 0.0, 0.0, 0.0};
    }
    return active->smooth
               ? smooth_transition(t, active->t0, active->from, active->to,
                                   active->tau)
               : exp_transition(t, active->t0, active->from, active->to,
                                active->tau);
}

double ScenarioProfiles::Profile::integral(double t, double t_seg) const {
    const Segment* active = nullptr;
    for (const Segment& s : segs) {
        if (t_seg >= s.t0 - kTimeTol) {
            active = &s;
        } else {
            break;
        }
    }
    if (active == nullptr) {
        return init * t;
    }
    return active->int0 + segment_integral(active->from, active->to,
                                           active->tau, active->smooth,
                                           t - active->t0);
}

ScenarioProfiles::Profile ScenarioProfiles::build(
    double init, EventKind kind, const std::vector<ScenarioEvent>& events,
    double tau_div, bool smooth) {
    Profile prof;
    prof.init = init;
    for (const ScenarioEvent& e : events) {
        if (e.kind != kind) continue;
        // start from the previous piece's endpoint so the composition is
        // continuous (segments looked up just before the new start)
        const double t_prev = e.time - kTimeTol;
        const double from = prof.eval(e.time, t_prev).value;
        const double int0 = prof.integral(e.time, t_prev);
        const double tau = e.window > 0.0 ? e.window / tau_div : 0.0;
        prof.segs.push_back({e.time, from, e.target, tau, smooth, int0});
    }
    return prof;
}

ScenarioProfiles::ScenarioProfiles(const Scenario& sc, double settle_factor)
    : settle_factor_(settle_factor) {
    sc.validate();
    const double x99 = smooth_completion_argument(settle_factor);
    v_ref_ = build(sc.v_ref0, EventKind::dc_ref, sc.events, x99, true);
    q_ref_ = build(sc.q_ref0, EventKind::reactive_ref, sc.events, x99, true);
    p_i_ = build(sc.p_i0, EventKind::input_power, sc.events, settle_factor,
                 false);
    for (const ScenarioEvent& e : sc.events) {
        if (e.kind == EventKind::grid_magnitude) {
            grid_events_.push_back(e);
        }
    }
}

ReferenceFrame ScenarioProfiles::reference_at(double t) const {
    return reference_at(t, t);
}

ReferenceFrame ScenarioProfiles::reference_at(double t, double t_seg) const {
    const Deriv3 v = v_ref_.eval(t, t_seg);
    const Deriv3 q = q_ref_.eval(t, t_seg);
    const Deriv3 p = p_i_.eval(t, t_seg);
    return {v.value, v.d1, v.d2, v.d3,
            q.value, q.d1, q.d2,
            q_ref_.integral(t, t_seg),
            p.value, p.d1, p.d2};
}

double ScenarioProfiles::grid_magnitude_at(double t) const {
    return grid_magnitude_at(t, t);
}

double ScenarioProfiles::grid_magnitude_at(double, double t_seg) const {
    double frac = 1.0;
    for (const ScenarioEvent& e : grid_events_) {
        if (t_seg >= e.time - kTimeTol) {
            frac = e.target;
        } else {
            break;
        }
    }
    return frac;
}

}  // namespace gfl
