#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gfl/config.hpp"
#include "gfl/csv.hpp"
#include "gfl/presets.hpp"
#include "gfl/sim.hpp"

using namespace gfl;

TEST_SUITE("sim") {

TEST_CASE("rk4_step") {
    SUBCASE("scalar decay matches the one-step polynomial") {
        const auto f = [](double, double x) { return -x; };
        const double x1 = rk4_step(1.0, 0.0, 0.1, f);
        CHECK(x1 == doctest::Approx(0.9048375).epsilon(1e-12));
    }
    SUBCASE("zero field leaves the state alone") {
        const auto f = [](double, double) { return 0.0; };
        CHECK(rk4_step(3.5, 0.0, 0.25, f) == 3.5);
    }
    SUBCASE("rotation preserves magnitude to fifth order") {
        const double w = 1.0;
        const auto f = [&](double, Complex x) {
            return Complex(0.0, w) * x;
        };
        const double h = 0.1;
        const Complex x1 = rk4_step(Complex(1.0, 0.0), 0.0, h, f);
        // |R(j h)|^2 - 1 = -h^6/72 + O(h^8) for the 4-stage rule
        const double defect = std::abs(x1) - 1.0;
        CHECK(defect < 0.0);
        CHECK(std::abs(defect + h * h * h * h * h * h / 144.0) < 1e-9);

        // halving the step shrinks the one-step phase error ~32x
        const Complex exact_h = std::polar(1.0, w * h);
        const Complex exact_h2 = std::polar(1.0, w * h / 2.0);
        const double err_h = std::abs(x1 - exact_h);
        const double err_h2 =
            std::abs(rk4_step(Complex(1.0, 0.0), 0.0, h / 2.0, f) - exact_h2);
        CHECK(err_h / err_h2 == doctest::Approx(32.0).epsilon(0.15));
    }
}

TEST_CASE("equilibrium hold: matched initialization keeps errors at noise "
          "level") {
    const PlantParams plant = presets::nominal_plant();
    Scenario sc;  // no events, nominal levels
    SimConfig cfg;
    cfg.t_end = 0.020;
    // exact no-load equilibrium: v_C2 = 0, i_L = i_g, and v_C1 shifted so the
    // total stored energy matches the reference energy
    const Complex ig = steady_grid_current(
        0.0, std::polar(std::sqrt(1.5) * plant.vg_peak_phase, 0.0), plant);
    cfg.init.v_C1 =
        std::sqrt(735.0 * 735.0 - (plant.L / plant.C1) * std::norm(ig));

    const SimResult res =
        run_scenario(plant, presets::nominal_gains(), sc, cfg);
    REQUIRE(!res.fault);
    CHECK(res.guard_count == 0);
    double e1_max = 0.0, e2_max = 0.0, e3_max = 0.0;
    for (size_t i = 0; i < res.record.size(); ++i) {
        e1_max = std::max(e1_max, std::abs(res.record.e1[i]));
        e2_max = std::max(e2_max, std::abs(res.record.e2[i]));
        e3_max = std::max(e3_max, std::abs(res.record.e3[i]));
    }
    CHECK(e1_max < 1e-4);   // vs ~730 J scale
    CHECK(e2_max < 1e-1);   // vs ~8 kW scale
    CHECK(e3_max < 1e2);    // vs ~1e7 W/s scale
}

TEST_CASE("determinism: identical configuration, identical bytes") {
    const PlantParams plant = presets::nominal_plant();
    Scenario sc = presets::nominal_scenario();
    SimConfig cfg;
    cfg.t_end = 0.030;
    const auto run_csv = [&]() {
        const SimResult r = run_scenario(plant, presets::nominal_gains(), sc,
                                         cfg);
        std::ostringstream os;
        write_csv(os, r.record);
        return os.str();
    };
    CHECK(run_csv() == run_csv());
}

TEST_CASE("DC-link collapse aborts with a fault and a partial record") {
    const PlantParams plant = presets::nominal_plant();
    Scenario sc;
    sc.p_i0 = -2000.0;  // the source drains the DC link
    SimConfig cfg;
    cfg.t_end = 0.050;
    cfg.init.v_C1 = 12.0;
    cfg.init.i_L = Complex{0.0, 0.0};
    const SimResult res =
        run_scenario(plant, presets::nominal_gains(), sc, cfg);
    REQUIRE(res.fault.has_value());
    CHECK(res.fault->t > 0.0);
    CHECK(res.fault->t < 0.050);
    CHECK(res.record.size() > 0);
    CHECK(res.record.t.back() <= res.fault->t);
}

TEST_CASE("step-size warnings") {
    const PlantParams plant = presets::nominal_plant();
    Scenario sc;
    SUBCASE("a millisecond step on nominal gains is flagged") {
        SimConfig cfg;
        cfg.dt = 1e-3;
        cfg.t_end = 0.010;
        cfg.decimation = 1;
        const SimResult res =
            run_scenario(plant, presets::nominal_gains(), sc, cfg);
        REQUIRE(!res.warnings.empty());
        CHECK(res.warnings.front().find("fastest closed-loop") !=
              std::string::npos);
    }
    SUBCASE("scaled-up gains without a retuned step are flagged") {
        ControllerGains g = presets::nominal_gains();
        g.k1 *= 100.0;
        g.k2 *= 100.0;
        g.k3 *= 100.0;
        g.k0 *= 100.0;
        SimConfig cfg;
        cfg.t_end = 1e-3;
        const SimResult res = run_scenario(plant, g, sc, cfg);
        CHECK(!res.warnings.empty());
    }
    SUBCASE("the nominal setup is not flagged") {
        SimConfig cfg;
        cfg.t_end = 1e-3;
        const SimResult res =
            run_scenario(plant, presets::nominal_gains(), sc, cfg);
        CHECK(res.warnings.empty());
    }
}

TEST_CASE("guard path: zero grid current holds the last modulation index") {
    const PlantParams plant = presets::nominal_plant();
    Scenario sc;
    SimConfig cfg;
    cfg.t_end = 0.010;
    cfg.init.i_g = Complex{0.0, 0.0};
    cfg.init.i_L = Complex{0.0, 0.0};
    const SimResult res =
        run_scenario(plant, presets::nominal_gains(), sc, cfg);
    REQUIRE(!res.fault);
    CHECK(res.guard_count > 0);
    // held at zero until the grid pushes |i_g| past the threshold
    CHECK(std::abs(res.record.mu_abc.front().a) == 0.0);
}

TEST_CASE("energy balance holds along the demonstration run") {
    // d/dt(stored energy) = p_i - p, checked with a 5-point stencil on the
    // log away from event instants
    RunConfig rc = default_config();
    rc.sim.t_end = 0.060;
    const SimResult res =
        run_scenario(rc.plant, rc.resolve_gains(), rc.scenario, rc.sim);
    REQUIRE(!res.fault);
    const TimeSeriesRecord& rec = res.record;
    const double h = rec.t[1] - rec.t[0];

    // the very first modulation command is finite and inside the linear range
    CHECK(std::isfinite(rec.mu_abc.front().a));
    CHECK(std::abs(rec.mu_abc.front().a) < 1.0);
    CHECK(std::abs(rec.mu_abc.front().b) < 1.0);
    CHECK(std::abs(rec.mu_abc.front().c) < 1.0);

    // reconstruct stored energy from the logged state
    std::vector<double> energy(rec.size());
    for (size_t i = 0; i < rec.size(); ++i) {
        energy[i] = 0.5 * (rc.plant.C1 * rec.v_C1[i] * rec.v_C1[i] +
                           rc.plant.L * std::norm(rec.i_L[i]) +
                           rc.plant.C2 * std::norm(rec.v_C2[i]));
    }
    double worst = 0.0;
    for (size_t i = 2; i + 2 < rec.size(); ++i) {
        bool clear = rec.t[i] > 2.5 * h;
        for (const ScenarioEvent& e : rc.scenario.events) {
            if (std::abs(rec.t[i] - e.time) <= 2.5 * h) clear = false;
        }
        if (!clear) continue;
        const double fd = (-energy[i + 2] + 8.0 * energy[i + 1] -
                           8.0 * energy[i - 1] + energy[i - 2]) /
                          (12.0 * h);
        worst = std::max(worst, std::abs(fd - (rec.p_i[i] - rec.p[i])));
    }
    CHECK(worst < 1e-4 * rc.scenario.s_rating);
}

TEST_CASE("chain consistency: FD of xi2 tracks xi3 within the documented "
          "approximation error") {
    // The controller computes xi3 with the steady-state grid-current
    // derivative; during transients that approximation dominates the
    // residual. Empirical bound over the demonstration run: 4.7% of the
    // peak |xi3| RMS. Exact (to the noise floor) once the grid current
    // settles to a pure positive-sequence sinusoid.
    RunConfig rc = default_config();
    const SimResult res =
        run_scenario(rc.plant, rc.resolve_gains(), rc.scenario, rc.sim);
    REQUIRE(!res.fault);
    const TimeSeriesRecord& rec = res.record;
    const double h = rec.t[1] - rec.t[0];
    const Scenario aligned = align_events(rc.scenario, rc.sim.dt);
    const ScenarioProfiles profiles(aligned, rc.sim.settle_factor);

    std::vector<Complex> xi2(rec.size()), xi3(rec.size());
    for (size_t i = 0; i < rec.size(); ++i) {
        const ReferenceTargets rt = reference_targets(
            profiles.reference_at(rec.t[i]), rc.plant.C1);
        xi2[i] = rec.e2[i] + rt.xi2_r;
        xi3[i] = rec.e3[i] + rt.xi3_r;
    }
    double xi3_peak = 0.0;
    for (const Complex& v : xi3) xi3_peak = std::max(xi3_peak, std::abs(v));

    double sum = 0.0, steady_worst = 0.0;
    size_t count = 0;
    for (size_t i = 1; i + 1 < rec.size(); ++i) {
        bool clear = rec.t[i] > 1.5 * h;
        for (const ScenarioEvent& e : aligned.events) {
            if (std::abs(rec.t[i] - e.time) <= 1.5 * h) clear = false;
        }
        if (!clear) continue;
        const Complex fd = (xi2[i + 1] - xi2[i - 1]) / (2.0 * h);
        sum += std::norm(fd - xi3[i]);
        ++count;
        // [110, 118] ms: fully settled at the rated operating point
        if (rec.t[i] >= 0.110 && rec.t[i] <= 0.118) {
            steady_worst = std::max(steady_worst, std::abs(fd - xi3[i]));
        }
    }
    const double rms = std::sqrt(sum / count);
    CHECK(rms < 0.07 * xi3_peak);
    CHECK(steady_worst < 1e-4 * xi3_peak);
}

TEST_CASE("logged auxiliary input closes the feedback identity") {
    // w must equal xi3_r_dot - k3 e3 - k2 e2 - k1 e1 - k0 y with the
    // integrated y, at every logged instant (guards the integral action)
    RunConfig rc = default_config();
    rc.sim.t_end = 0.040;
    const ControllerGains g = rc.resolve_gains();
    const SimResult res =
        run_scenario(rc.plant, g, rc.scenario, rc.sim);
    REQUIRE(!res.fault);
    const TimeSeriesRecord& rec = res.record;
    const Scenario aligned = align_events(rc.scenario, rc.sim.dt);
    const ScenarioProfiles profiles(aligned, rc.sim.settle_factor);
    double y_mag_max = 0.0;
    for (size_t i = 0; i < rec.size(); ++i) {
        const ReferenceTargets rt = reference_targets(
            profiles.reference_at(rec.t[i]), rc.plant.C1);
        const Complex want = rt.xi3_r_dot - g.k3 * rec.e3[i] -
                             g.k2 * rec.e2[i] - g.k1 * rec.e1[i] -
                             g.k0 * rec.y[i];
        CHECK(std::abs(want - rec.w[i]) <=
              1e-9 * std::max(1e6, std::abs(want)));
        y_mag_max = std::max(y_mag_max, std::abs(rec.y[i]));
    }
    CHECK(y_mag_max > 0.0);  // the integral state actually moves
}

TEST_CASE("a small perturbation dies out with the slow pole pair") {
    // 1 V DC-link offset against a matched reference, no events: a pure
    // initial-condition response; the slow pair settles to 1% in 10 ms
    const PlantParams plant = presets::nominal_plant();
    Scenario sc;
    sc.events = {{0.0, EventKind::dc_ref, 735.0, 0.0}};  // anchor, no-op
    SimConfig cfg;
    cfg.t_end = 0.040;
    const Complex ig = steady_grid_current(
        0.0, std::polar(std::sqrt(1.5) * plant.vg_peak_phase, 0.0), plant);
    cfg.init.v_C1 =
        std::sqrt(735.0 * 735.0 - (plant.L / plant.C1) * std::norm(ig)) + 1.0;

    const SimResult res =
        run_scenario(plant, presets::nominal_gains(), sc, cfg);
    REQUIRE(!res.fault);
    const SummaryMetrics m = summarize(res.record, sc.events);
    REQUIRE(m.extinctions.size() == 1);
    CHECK(m.extinctions[0].peak_e1 > 1.0);  // ~2 J of stored-energy error
    CHECK(m.extinctions[0].extinct);
    CHECK(m.extinctions[0].extinction_time < 0.015);
}

TEST_CASE("summarize") {
    SUBCASE("constant record reports immediate extinction") {
        TimeSeriesRecord rec;
        for (int i = 0; i <= 100; ++i) {
            rec.t.push_back(i * 1e-3);
            rec.v_C1.push_back(735.0);
            rec.v_C1_ref.push_back(735.0);
            rec.i_L.push_back({1.0, 0.0});
            rec.v_C2.push_back({2.0, 0.0});
            rec.i_g.push_back({1.0, 0.0});
            rec.v_g.push_back({400.0, 0.0});
            rec.mu_abc.push_back({0.4, -0.2, -0.2});
            rec.p_i.push_back(0.0);
            rec.p.push_back(2.0);
            rec.q.push_back(0.0);
            rec.e1.push_back({0.0, 0.0});
            rec.e2.push_back({0.0, 0.0});
            rec.e3.push_back({0.0, 0.0});
            rec.w.push_back({0.0, 0.0});
            rec.y.push_back({0.0, 0.0});
            rec.guard_flags.push_back(0);
        }
        const std::vector<ScenarioEvent> events{
            {0.050, EventKind::grid_magnitude, 0.8, 0.0}};
        const SummaryMetrics m = summarize(rec, events);
        REQUIRE(m.extinctions.size() == 1);
        CHECK(m.extinctions[0].extinct);
        CHECK(m.extinctions[0].extinction_time == 0.0);
        CHECK(m.mu_abc_max == doctest::Approx(0.4));
        REQUIRE(m.segments.size() == 2);
        CHECK(m.segments[0].available);
        CHECK(m.segments[0].v_C1_err_mean == doctest::Approx(0.0));
        CHECK(m.segments[1].p_dev_max == doctest::Approx(2.0));
    }
    SUBCASE("synthetic exponential decay pins the extinction time") {
        TimeSeriesRecord rec;
        const double tau = 2e-3;
        for (int i = 0; i <= 4000; ++i) {
            const double t = i * 2e-5;
            rec.t.push_back(t);
            rec.v_C1.push_back(0.0);
            rec.v_C1_ref.push_back(0.0);
            rec.i_L.push_back({0.0, 0.0});
            rec.v_C2.push_back({0.0, 0.0});
            rec.i_g.push_back({0.0, 0.0});
            rec.v_g.push_back({0.0, 0.0});
            rec.mu_abc.push_back({0.0, 0.0, 0.0});
            rec.p_i.push_back(0.0);
            rec.p.push_back(0.0);
            rec.q.push_back(0.0);
            const double e = t < 0.01 ? 0.0 : std::exp(-(t - 0.01) / tau);
            rec.e1.push_back({e, 0.0});
            rec.e2.push_back({0.0, 0.0});
            rec.e3.push_back({0.0, 0.0});
            rec.w.push_back({0.0, 0.0});
            rec.y.push_back({0.0, 0.0});
            rec.guard_flags.push_back(0);
        }
        const std::vector<ScenarioEvent> events{
            {0.010, EventKind::input_power, 1.0, 0.0}};
        const SummaryMetrics m = summarize(rec, events);
        REQUIRE(m.extinctions.size() == 1);
        CHECK(m.extinctions[0].extinct);
        // exp(-t/tau) < 0.01 from t = tau*ln(100)
        CHECK(m.extinctions[0].extinction_time ==
              doctest::Approx(tau * std::log(100.0)).epsilon(0.01));
    }
}

TEST_CASE("events are aligned to the step grid") {
    Scenario sc;
    sc.events = {{0.0100004, EventKind::input_power, 100.0, 0.010}};
    const Scenario aligned = align_events(sc, 1e-6);
    CHECK(aligned.events[0].time == doctest::Approx(0.010).epsilon(1e-12));
}

}  // TEST_SUITE
