#include "gfl/sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "gfl/tuning.hpp"

namespace gfl {

void SimConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError("sim.dt_s: must be > 0");
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw ConfigError("sim.t_end_s: must be > 0");
    }
    if (decimation < 1) {
        throw ConfigError("sim.decimation: must be >= 1");
    }
    if (!(v_floor >= 0.0)) {
        throw ConfigError("sim.v_floor_V: must be >= 0");
    }
    if (!(guard.i_guard >= 0.0) || !(guard.v_guard >= 0.0)) {
        throw ConfigError("sim guard thresholds must be >= 0");
    }
    if (!(settle_factor > 0.0)) {
        throw ConfigError("sim.settle_factor: must be > 0");
    }
}

Complex grid_voltage_at(const ScenarioProfiles& profiles,
                        const PlantParams& plant, double t) {
    return grid_voltage_at(profiles, plant, t, t);
}

Complex grid_voltage_at(const ScenarioProfiles& profiles,
                        const PlantParams& plant, double t, double t_seg) {
    const double mag = profiles.grid_magnitude_at(t, t_seg) *
                       std::sqrt(1.5) * plant.vg_peak_phase;
    return std::polar(mag, plant.omega * t);
}

PlantState default_initial_state(const PlantParams& plant,
                                 const ScenarioProfiles& profiles) {
    PlantState s;
    s.v_C1 = profiles.reference_at(0.0).v_ref;
    s.v_C2 = 0.0;
    s.i_g = steady_grid_current(s.v_C2, grid_voltage_at(profiles, plant, 0.0),
                                plant);
    s.i_L = s.i_g;
    s.q_int = 0.0;
    return s;
}

Scenario align_events(const Scenario& sc, double dt) {
    Scenario out = sc;
    for (ScenarioEvent& e : out.events) {
        e.time = std::llround(e.time / dt) * dt;
    }
    return out;
}

namespace {

// augmented state: plant plus the controller integral of e1
struct LoopState {
    PlantState plant;
    Complex y{};
};
LoopState operator+(const LoopState& a, const LoopState& b) {
    return {a.plant + b.plant, a.y + b.y};
}
LoopState operator*(double s, const LoopState& x) {
    return {s * x.plant, s * x.y};
}

bool finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

bool finite_state(const LoopState& s) {
    return std::isfinite(s.plant.v_C1) && finite(s.plant.i_L) &&
           finite(s.plant.v_C2) && finite(s.plant.i_g) &&
           std::isfinite(s.plant.q_int) && finite(s.y);
}

Measurements measurements_of(const PlantState& s) {
    return {s.v_C1, s.i_L, s.v_C2, s.i_g, s.q_int};
}

}  // namespace

SimResult run_scenario(const PlantParams& plant, const ControllerGains& gains,
                       const Scenario& scenario, const SimConfig& cfg) {
    plant.validate();
    gains.validate();
    cfg.validate();

    SimResult result;

    // step-size adequacy against the fastest closed-loop pole
    const double tau_fast = fastest_time_constant(gains);
    if (cfg.dt > tau_fast / 10.0) {
        std::ostringstream os;
        os << "integration step " << cfg.dt
           << " s exceeds one tenth of the fastest closed-loop time constant "
           << tau_fast << " s; results may be inaccurate";
        result.warnings.push_back(os.str());
    }

    const Scenario aligned = align_events(scenario, cfg.dt);
    const ScenarioProfiles profiles(aligned, cfg.settle_factor);

    LoopState state;
    state.plant = default_initial_state(plant, profiles);
    if (cfg.init.v_C1) state.plant.v_C1 = *cfg.init.v_C1;
    if (cfg.init.v_C2) state.plant.v_C2 = *cfg.init.v_C2;
    if (cfg.init.i_g) state.plant.i_g = *cfg.init.i_g;
    if (cfg.init.i_L) state.plant.i_L = *cfg.init.i_L;
    state.y = 0.0;

    ControllerState ctl;

    // all four stages of a step evaluate against the profile segments
    // active at the step start, so each step integrates one smooth piece
    double step_start = 0.0;
    const auto loop_f = [&](double t, const LoopState& s) -> LoopState {
        const ReferenceFrame r = profiles.reference_at(t, step_start);
        const Complex v_g = grid_voltage_at(profiles, plant, t, step_start);
        ctl.y = s.y;  // the engine owns the integral state
        const ControlOutput u = control_step(measurements_of(s.plant), r,
                                             gains, ctl, plant, cfg.guard);
        LoopState d;
        d.plant = complex_derivatives(s.plant, u.mu, r.p_i, v_g, plant,
                                      cfg.v_floor, t);
        d.y = u.flat.e1;
        return d;
    };

    const long n_steps = std::llround(cfg.t_end / cfg.dt);
    TimeSeriesRecord& rec = result.record;

    const auto log_instant = [&](double t, const LoopState& s) {
        const ReferenceFrame r = profiles.reference_at(t);
        const Complex v_g = grid_voltage_at(profiles, plant, t);
        ControllerState peek = ctl;  // keep the stage bookkeeping untouched
        peek.y = s.y;
        const ControlOutput u = control_step(measurements_of(s.plant), r,
                                             gains, peek, plant, cfg.guard);
        const PccPower pw = pcc_powers(s.plant.v_C2, s.plant.i_g);
        rec.t.push_back(t);
        rec.v_C1.push_back(s.plant.v_C1);
        rec.v_C1_ref.push_back(r.v_ref);
        rec.i_L.push_back(s.plant.i_L);
        rec.v_C2.push_back(s.plant.v_C2);
        rec.i_g.push_back(s.plant.i_g);
        rec.v_g.push_back(v_g);
        rec.mu_abc.push_back(clarke_inverse(u.mu));
        rec.p_i.push_back(r.p_i);
        rec.p.push_back(pw.p);
        rec.q.push_back(pw.q);
        rec.e1.push_back(u.flat.e1);
        rec.e2.push_back(u.flat.e2);
        rec.e3.push_back(u.flat.e3);
        rec.w.push_back(u.w);
        rec.y.push_back(s.y);
        rec.guard_flags.push_back(ctl.guard_count);
    };

    try {
        for (long n = 0; n <= n_steps; ++n) {
            const double t = n * cfg.dt;
            if (n % cfg.decimation == 0 || n == n_steps) {
                log_instant(t, state);
            }
            if (n == n_steps) break;
            step_start = t;
            state = rk4_step(state, t, cfg.dt, loop_f);
            if (!finite_state(state)) {
                throw SimFault((n + 1) * cfg.dt,
                               "state became non-finite (divergence)");
            }
        }
    } catch (const SimFault& fault) {
        result.fault = FaultInfo{fault.t, fault.what()};
    }
    result.guard_count = ctl.guard_count;
    return result;
}

namespace {

std::vector<double> segment_bounds(const std::vector<ScenarioEvent>& events,
                                   double t_end) {
    std::vector<double> b{0.0};
    for (const ScenarioEvent& e : events) {
        if (e.time > b.back() && e.time < t_end) b.push_back(e.time);
    }
    b.push_back(t_end);
    return b;
}

}  // namespace

SummaryMetrics summarize(const TimeSeriesRecord& rec,
                         const std::vector<ScenarioEvent>& events,
                         double extinct_fraction) {
    SummaryMetrics m{};
    if (rec.size() == 0) return m;
    const double t_end = rec.t.back();

    m.mu_abc_max = 0.0;
    m.p_max = 0.0;
    m.q_max = 0.0;
    for (size_t i = 0; i < rec.size(); ++i) {
        m.mu_abc_max = std::max({m.mu_abc_max, std::abs(rec.mu_abc[i].a),
                                 std::abs(rec.mu_abc[i].b),
                                 std::abs(rec.mu_abc[i].c)});
        m.p_max = std::max(m.p_max, std::abs(rec.p[i]));
        m.q_max = std::max(m.q_max, std::abs(rec.q[i]));
    }
    m.guard_count = rec.guard_flags.back();

    constexpr size_t kMinWindowPoints = 8;
    const std::vector<double> bounds = segment_bounds(events, t_end);
    for (size_t k = 0; k + 1 < bounds.size(); ++k) {
        SegmentMetrics sm{};
        sm.t_start = bounds[k];
        sm.t_end = bounds[k + 1];
        const double w_start = sm.t_end - 0.2 * (sm.t_end - sm.t_start);
        double sum_v = 0.0, sum_ig = 0.0, sum_vc2 = 0.0, dev = 0.0;
        size_t count = 0;
        for (size_t i = 0; i < rec.size(); ++i) {
            if (rec.t[i] < w_start || rec.t[i] > sm.t_end) continue;
            sum_v += std::abs(rec.v_C1[i] - rec.v_C1_ref[i]);
            sum_ig += std::abs(rec.i_g[i]);
            sum_vc2 += std::abs(rec.v_C2[i]);
            dev = std::max(dev, std::abs(rec.p[i] - rec.p_i[i]));
            ++count;
        }
        sm.available = count >= kMinWindowPoints;
        if (sm.available) {
            sm.v_C1_err_mean = sum_v / count;
            sm.i_g_mag_mean = sum_ig / count;
            sm.v_C2_mag_mean = sum_vc2 / count;
            sm.p_dev_max = dev;
        }
        m.segments.push_back(sm);
    }

    for (const ScenarioEvent& e : events) {
        double window_end = t_end;
        for (const ScenarioEvent& e2 : events) {
            if (e2.time > e.time) {
                window_end = std::min(window_end, e2.time);
                break;
            }
        }
        EventExtinction ext{};
        ext.event_time = e.time;
        // post-event peak of |e1|
        double peak = 0.0;
        for (size_t i = 0; i < rec.size(); ++i) {
            if (rec.t[i] < e.time || rec.t[i] >= window_end) continue;
            peak = std::max(peak, std::abs(rec.e1[i]));
        }
        ext.peak_e1 = peak;
        const double thr = extinct_fraction * peak;
        // first instant after which |e1| stays below the threshold
        double ext_time = -1.0;
        bool below = false;
        for (size_t i = 0; i < rec.size(); ++i) {
            if (rec.t[i] < e.time || rec.t[i] >= window_end) continue;
            if (std::abs(rec.e1[i]) < thr) {
                if (!below) {
                    below = true;
                    ext_time = rec.t[i] - e.time;
                }
            } else {
                below = false;
            }
        }
        ext.extinct = below;
        ext.extinction_time = below ? ext_time : -1.0;
        if (peak == 0.0) {  // constant record: extinct immediately
            ext.extinct = true;
            ext.extinction_time = 0.0;
        }
        m.extinctions.push_back(ext);
    }
    return m;
}

void print_summary(std::ostream& os, const SummaryMetrics& m) {
    os << "summary:\n";
    os << "  max per-phase |mu|: " << m.mu_abc_max << "\n";
    os << "  max |p|: " << m.p_max << " W, max |q|: " << m.q_max << " var\n";
    os << "  guard activations: " << m.guard_count << "\n";
    for (const SegmentMetrics& s : m.segments) {
        os << "  segment [" << s.t_start << ", " << s.t_end << "] s";
        if (!s.available) {
            os << ": steady window too short\n";
            continue;
        }
        os << ": |v_C1 - ref| " << s.v_C1_err_mean << " V, |i_g| "
           << s.i_g_mag_mean << " A, |v_C2| " << s.v_C2_mag_mean
           << " V, max |p - p_i| " << s.p_dev_max << " W\n";
    }
    for (const EventExtinction& e : m.extinctions) {
        os << "  event at " << e.event_time << " s: peak |e1| " << e.peak_e1;
        if (e.extinct) {
            os << " J, extinguished after " << e.extinction_time * 1e3
               << " ms\n";
        } else {
            os << " J, not extinguished within the record\n";
        }
    }
}

}  // namespace gfl
