#include "gfl/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

namespace gfl {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

void report(std::vector<CriterionResult>& results, std::ostream& os,
            const std::string& name, bool pass, const std::string& detail) {
    results.push_back({name, pass, detail});
    os << (pass ? "PASS" : "FAIL") << "  " << name << ": " << detail << "\n";
    os.flush();
}

// ---- criterion: gain reproduction -------------------------------------

void check_gains(std::vector<CriterionResult>& res, std::ostream& os) {
    const auto t0 = Clock::now();
    const auto [s1, s2] = presets::nominal_pole_specs();
    const ControllerGains g = gains_from_specs(s1, s2);
    const double elapsed = seconds_since(t0);
    const double published[4] = {4.28e10, 5.12e7, 1.01e4, 1.79e13};
    const double got[4] = {g.k1, g.k2, g.k3, g.k0};
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
        worst = std::max(worst, std::abs(got[i] - published[i]) / published[i]);
    }
    std::ostringstream d;
    d << "k1 " << g.k1 << ", k2 " << g.k2 << ", k3 " << g.k3 << ", k0 "
      << g.k0 << "; worst deviation " << fmt(100.0 * worst) << "% (bound 1.5%)"
      << ", " << fmt(elapsed) << " s (bound 1 s)";
    report(res, os, "gain-reproduction", worst < 0.015 && elapsed < 1.0,
           d.str());
}

// ---- criterion: pole-assignment residuals ------------------------------

void check_residuals(std::vector<CriterionResult>& res, std::ostream& os) {
    const auto [s1, s2] = presets::nominal_pole_specs();
    const PolePair p1 = poles_from_spec(s1);
    const PolePair p2 = poles_from_spec(s2);
    const PoleSet poles{p1[0], p1[1], p2[0], p2[1]};
    const ControllerGains g = gains_from_poles(poles);
    const AssignmentReport rep = verify_assignment(g, poles);
    std::ostringstream d;
    d << "max scaled residual " << rep.max_residual << " (bound 1e-9)";
    report(res, os, "pole-assignment-residuals", rep.max_residual < 1e-9,
           d.str());
}

// ---- criterion: model equivalence --------------------------------------

void check_equivalence(std::vector<CriterionResult>& res, std::ostream& os) {
    const auto t0 = Clock::now();
    const PlantParams plant = presets::nominal_plant();
    const double dt = 1e-6;
    const long n = std::lround(0.020 / dt);
    const double p_i = 1500.0;
    const double mu_mag = 0.35;
    const double mu_phase = 0.4;

    const auto mu_at = [&](double t) {
        return std::polar(mu_mag, plant.omega * t + mu_phase);
    };
    const auto vg_at = [&](double t) {
        return std::polar(std::sqrt(1.5) * plant.vg_peak_phase,
                          plant.omega * t);
    };

    PlantState cs;
    cs.v_C1 = 735.0;
    cs.v_C2 = 0.0;
    cs.i_g = steady_grid_current(cs.v_C2, vg_at(0.0), plant);
    cs.i_L = cs.i_g;
    cs.q_int = 0.0;

    ThreePhasePlantState ts;
    ts.v_C1 = cs.v_C1;
    ts.i_L = clarke_inverse(cs.i_L);
    ts.v_C2 = clarke_inverse(cs.v_C2);
    ts.i_g = clarke_inverse(cs.i_g);

    const auto fc = [&](double t, const PlantState& s) {
        return complex_derivatives(s, mu_at(t), p_i, vg_at(t), plant);
    };
    const auto f3 = [&](double t, const ThreePhasePlantState& s) {
        return three_phase_derivatives(
            s, clarke_inverse(mu_at(t)), p_i,
            balanced_set(plant.vg_peak_phase, plant.omega * t), plant);
    };

    double scale_v1 = 0.0, scale_il = 0.0, scale_vc2 = 0.0, scale_ig = 0.0;
    std::vector<std::array<double, 7>> dev;  // deltas per sample
    dev.reserve(n + 1);
    for (long k = 0;; ++k) {
        const double t = k * dt;
        scale_v1 = std::max(scale_v1, std::abs(cs.v_C1));
        scale_il = std::max(scale_il, std::abs(cs.i_L));
        scale_vc2 = std::max(scale_vc2, std::abs(cs.v_C2));
        scale_ig = std::max(scale_ig, std::abs(cs.i_g));
        const Complex il3 = clarke_forward(ts.i_L);
        const Complex vc23 = clarke_forward(ts.v_C2);
        const Complex ig3 = clarke_forward(ts.i_g);
        dev.push_back({std::abs(ts.v_C1 - cs.v_C1),
                       std::abs(il3.real() - cs.i_L.real()),
                       std::abs(il3.imag() - cs.i_L.imag()),
                       std::abs(vc23.real() - cs.v_C2.real()),
                       std::abs(vc23.imag() - cs.v_C2.imag()),
                       std::abs(ig3.real() - cs.i_g.real()),
                       std::abs(ig3.imag() - cs.i_g.imag())});
        if (k == n) break;
        cs = rk4_step(cs, t, dt, fc);
        ts = rk4_step(ts, t, dt, f3);
    }
    double worst = 0.0;
    for (const auto& d : dev) {
        worst = std::max({worst, d[0] / scale_v1, d[1] / scale_il,
                          d[2] / scale_il, d[3] / scale_vc2, d[4] / scale_vc2,
                          d[5] / scale_ig, d[6] / scale_ig});
    }
    const double elapsed = seconds_since(t0);
    std::ostringstream d;
    d << "max relative deviation " << worst << " (bound 1e-8), " << fmt(elapsed)
      << " s (bound 5 s)";
    report(res, os, "model-equivalence", worst < 1e-8 && elapsed < 5.0,
           d.str());
}

// ---- shared demonstration run ------------------------------------------

struct DemoRun {
    RunConfig rc;
    SimResult sim;
    double elapsed;
};

DemoRun run_demo(const RunConfig& rc, double dt, int decimation) {
    DemoRun out;
    out.rc = rc;
    out.rc.sim.dt = dt;
    out.rc.sim.decimation = decimation;
    const auto t0 = Clock::now();
    out.sim = run_scenario(out.rc.plant, out.rc.resolve_gains(),
                           out.rc.scenario, out.rc.sim);
    out.elapsed = seconds_since(t0);
    return out;
}

std::vector<double> event_times(const Scenario& sc) {
    std::vector<double> t;
    for (const ScenarioEvent& e : sc.events) t.push_back(e.time);
    return t;
}

// FD sample valid when the central stencil stays inside one smooth piece
bool stencil_clear(double t, double h, const std::vector<double>& events) {
    if (t <= 1.5 * h) return false;
    for (double te : events) {
        if (std::abs(t - te) <= 1.5 * h) return false;
    }
    return true;
}

// ---- criteria on the demonstration log ----------------------------------

void check_chain(std::vector<CriterionResult>& res, std::ostream& os,
                 const DemoRun& demo) {
    const TimeSeriesRecord& rec = demo.sim.record;
    const Scenario aligned = align_events(demo.rc.scenario, demo.rc.sim.dt);
    const ScenarioProfiles profiles(aligned, demo.rc.sim.settle_factor);
    const std::vector<double> evts = event_times(aligned);
    const double h = rec.t[1] - rec.t[0];
    const double s_n = demo.rc.scenario.s_rating;

    // reconstruct xi1, xi3 from the logged errors plus the reference chain
    const size_t n = rec.size();
    std::vector<Complex> xi1(n), xi3(n);
    for (size_t i = 0; i < n; ++i) {
        const ReferenceTargets rt =
            reference_targets(profiles.reference_at(rec.t[i]),
                              demo.rc.plant.C1);
        xi1[i] = rec.e1[i] + rt.xi1_r;
        xi3[i] = rec.e3[i] + rt.xi3_r;
    }

    double sum1 = 0.0, sum3 = 0.0;
    size_t count = 0;
    double w_peak = 0.0;
    for (size_t i = 0; i < n; ++i) {
        w_peak = std::max(w_peak, std::abs(rec.w[i]));
    }
    for (size_t i = 1; i + 1 < n; ++i) {
        if (!stencil_clear(rec.t[i], h, evts)) continue;
        const Complex fd1 = (xi1[i + 1] - xi1[i - 1]) / (2.0 * h);
        const Complex xi2{rec.p_i[i] - rec.p[i], -rec.q[i]};
        const Complex fd3 = (xi3[i + 1] - xi3[i - 1]) / (2.0 * h);
        sum1 += std::norm(fd1 - xi2);
        sum3 += std::norm(fd3 - rec.w[i]);
        ++count;
    }
    const double rms1 = std::sqrt(sum1 / count);
    const double rms3 = std::sqrt(sum3 / count);
    {
        std::ostringstream d;
        d << "RMS " << fmt(rms1) << " W (bound 0.1% of S_N = "
          << fmt(1e-3 * s_n) << " W)";
        report(res, os, "chain-xi1-xi2", rms1 < 1e-3 * s_n, d.str());
    }
    {
        std::ostringstream d;
        d << "RMS " << fmt(rms3) << " W/s^2 vs 1% of peak |w| = "
          << fmt(0.01 * w_peak) << " (peak |w| " << fmt(w_peak) << ")";
        report(res, os, "chain-xi3-w", rms3 < 0.01 * w_peak, d.str());
    }
}

void check_demo_steady(std::vector<CriterionResult>& res, std::ostream& os,
                       const DemoRun& demo) {
    const TimeSeriesRecord& rec = demo.sim.record;
    const double s_n = demo.rc.scenario.s_rating;

    {
        std::ostringstream d;
        d << fmt(demo.elapsed) << " s for the 280 ms run (bound 60 s)";
        report(res, os, "s4-runtime", demo.elapsed < 60.0, d.str());
    }

    double sum_ig = 0.0, sum_vc2 = 0.0, sum_v1 = 0.0;
    size_t cnt = 0;
    for (size_t i = 0; i < rec.size(); ++i) {
        if (rec.t[i] < 0.100 || rec.t[i] > 0.120) continue;
        sum_ig += std::abs(rec.i_g[i]);
        sum_vc2 += std::abs(rec.v_C2[i]);
        sum_v1 += std::abs(rec.v_C1[i] - 750.0);
        ++cnt;
    }
    const double ig_mean = sum_ig / cnt;
    const double vc2_mean = sum_vc2 / cnt;
    const double v1_disc = sum_v1 / cnt;
    {
        std::ostringstream d;
        d << "mean |i_g| " << fmt(ig_mean)
          << " A in [100,120] ms (20.0 A +/- 3%)";
        report(res, os, "s4-grid-current",
               std::abs(ig_mean - 20.0) <= 0.03 * 20.0, d.str());
    }
    {
        std::ostringstream d;
        d << "mean |v_C2| " << fmt(vc2_mean)
          << " V in [100,120] ms (400 V +/- 3%)";
        report(res, os, "s4-pcc-voltage",
               std::abs(vc2_mean - 400.0) <= 0.03 * 400.0, d.str());
    }
    {
        std::ostringstream d;
        d << "mean |v_C1 - 750| = " << fmt(v1_disc)
          << " V in [100,120] ms (bound (0, 1.5])";
        report(res, os, "s4-dc-link-discrepancy",
               v1_disc > 0.0 && v1_disc <= 1.5, d.str());
    }

    const SummaryMetrics sum = summarize(rec, demo.rc.scenario.events);
    double p_dev = 0.0;
    for (const SegmentMetrics& s : sum.segments) {
        if (s.available) p_dev = std::max(p_dev, s.p_dev_max);
    }
    {
        std::ostringstream d;
        d << "worst steady-segment max |p - p_i| = " << fmt(p_dev)
          << " W (bound 1% of S_N = " << fmt(0.01 * s_n) << " W)";
        report(res, os, "s4-power-balance", p_dev < 0.01 * s_n, d.str());
    }
    {
        std::ostringstream d;
        d << "max per-phase |mu| = " << fmt(sum.mu_abc_max) << " (bound 1)";
        report(res, os, "s4-modulation-saturation", sum.mu_abc_max < 1.0,
               d.str());
    }
    {
        std::ostringstream d;
        d << std::to_string(demo.sim.guard_count) + " guard activations (bound 0)";
        report(res, os, "s4-guard-count", demo.sim.guard_count == 0, d.str());
    }
}

void check_extinction(std::vector<CriterionResult>& res, std::ostream& os,
                      const DemoRun& demo) {
    const SummaryMetrics sum =
        summarize(demo.sim.record, demo.rc.scenario.events);
    for (size_t i = 0; i < demo.rc.scenario.events.size(); ++i) {
        const ScenarioEvent& e = demo.rc.scenario.events[i];
        if (e.kind != EventKind::grid_magnitude) continue;
        const EventExtinction& ext = sum.extinctions[i];
        std::ostringstream name;
        name << "grid-step-extinction-" << std::lround(e.time * 1e3) << "ms";
        std::ostringstream d;
        if (ext.extinct) {
            d << "|e1| below 1% of post-event peak (" << fmt(ext.peak_e1)
              << " J) after " << fmt(ext.extinction_time * 1e3)
              << " ms (bound 15 ms)";
        } else {
            d << "|e1| never stays below 1% of post-event peak ("
              << fmt(ext.peak_e1) << " J) before the next event";
        }
        report(res, os, name.str(),
               ext.extinct && ext.extinction_time <= 0.015, d.str());
    }
}

void check_convergence(std::vector<CriterionResult>& res, std::ostream& os,
                       const DemoRun& demo) {
    const DemoRun half = run_demo(demo.rc, demo.rc.sim.dt / 2.0,
                                  demo.rc.sim.decimation * 2);
    const TimeSeriesRecord& a = demo.sim.record;
    const TimeSeriesRecord& b = half.sim.record;
    const size_t n = std::min(a.size(), b.size());

    struct Column {
        const char* name;
        double scale = 0.0;
        double dev = 0.0;
    };
    std::array<Column, 9> cols{{{"v_C1"},
                                {"i_L_alpha"},
                                {"i_L_beta"},
                                {"v_C2_alpha"},
                                {"v_C2_beta"},
                                {"i_g_alpha"},
                                {"i_g_beta"},
                                {"y_re"},
                                {"y_im"}}};
    const auto value = [&](const TimeSeriesRecord& r, size_t col, size_t i) {
        switch (col) {
            case 0: return r.v_C1[i];
            case 1: return r.i_L[i].real();
            case 2: return r.i_L[i].imag();
            case 3: return r.v_C2[i].real();
            case 4: return r.v_C2[i].imag();
            case 5: return r.i_g[i].real();
            case 6: return r.i_g[i].imag();
            case 7: return r.y[i].real();
            default: return r.y[i].imag();
        }
    };
    for (size_t c = 0; c < cols.size(); ++c) {
        for (size_t i = 0; i < n; ++i) {
            cols[c].scale = std::max(cols[c].scale,
                                     std::abs(value(a, c, i)));
        }
        for (size_t i = 0; i < n; ++i) {
            cols[c].dev = std::max(cols[c].dev,
                                   std::abs(value(a, c, i) - value(b, c, i)));
        }
    }
    double worst = 0.0;
    const char* worst_name = "";
    for (const Column& c : cols) {
        const double rel = c.scale > 0.0 ? c.dev / c.scale : 0.0;
        if (rel > worst) {
            worst = rel;
            worst_name = c.name;
        }
    }
    std::ostringstream d;
    d << "max relative change " << worst << " (" << worst_name
      << ") halving dt (bound 1e-4)";
    report(res, os, "step-size-convergence", worst < 1e-4, d.str());
}

// ---- optional config parity ---------------------------------------------

bool same(double a, double b) { return a == b; }

void check_config_parity(std::vector<CriterionResult>& res, std::ostream& os,
                         const std::string& path) {
    std::string detail;
    bool ok = true;
    try {
        const RunConfig file = load_config(path);
        const RunConfig ref = default_config();
        ok = same(file.plant.C1, ref.plant.C1) &&
             same(file.plant.L, ref.plant.L) &&
             same(file.plant.C2, ref.plant.C2) &&
             same(file.plant.Lg, ref.plant.Lg) &&
             same(file.plant.Rg, ref.plant.Rg) &&
             same(file.plant.omega, ref.plant.omega) &&
             same(file.plant.vg_peak_phase, ref.plant.vg_peak_phase);
        const ControllerGains gf = file.resolve_gains();
        const ControllerGains gr = ref.resolve_gains();
        ok = ok && same(gf.k1, gr.k1) && same(gf.k2, gr.k2) &&
             same(gf.k3, gr.k3) && same(gf.k0, gr.k0);
        ok = ok && file.scenario.events.size() == ref.scenario.events.size();
        if (ok) {
            for (size_t i = 0; i < ref.scenario.events.size(); ++i) {
                const ScenarioEvent& a = file.scenario.events[i];
                const ScenarioEvent& b = ref.scenario.events[i];
                ok = ok && same(a.time, b.time) && a.kind == b.kind &&
                     same(a.target, b.target) && same(a.window, b.window);
            }
        }
        ok = ok && same(file.sim.dt, ref.sim.dt) &&
             same(file.sim.t_end, ref.sim.t_end) &&
             file.sim.decimation == ref.sim.decimation;
        detail = ok ? "file matches the built-in configuration"
                    : "file differs from the built-in configuration";
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(res, os, "config-file-parity", ok, detail);
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            std::ostream& os) {
    std::vector<CriterionResult> results;

    // The scenario-based criteria run on the given config when one is
    // named (a perturbed file then fails them honestly); the tuning and
    // model-equivalence criteria are anchored to the published setup.
    RunConfig rc = default_config();
    if (opt.config_path) {
        try {
            rc = load_config(*opt.config_path);
        } catch (const std::exception& e) {
            report(results, os, "config-file-load", false, e.what());
            return results;
        }
        check_config_parity(results, os, *opt.config_path);
    }

    check_gains(results, os);
    check_residuals(results, os);
    check_equivalence(results, os);

    const DemoRun demo = run_demo(rc, 1e-6, 20);
    if (demo.sim.fault) {
        report(results, os, "s4-run",
               false, "simulation fault: " + demo.sim.fault->reason);
        return results;
    }
    check_demo_steady(results, os, demo);
    check_chain(results, os, demo);
    check_extinction(results, os, demo);
    check_convergence(results, os, demo);
    return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const CriterionResult& r : results) {
        if (!r.pass) return false;
    }
    return true;
}

}  // namespace gfl
