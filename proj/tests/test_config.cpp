#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gfl/config.hpp"
#include "gfl/csv.hpp"

using namespace gfl;

#ifndef GFL_SOURCE_DIR
#define GFL_SOURCE_DIR "."
#endif

TEST_SUITE("config") {

TEST_CASE("minimal config applies defaults") {
    std::istringstream is(
        "controller.ts1_s = 1e-3\n"
        "controller.zeta1 = 0.707\n"
        "controller.ts2_s = 10e-3\n"
        "controller.zeta2 = 0.707\n");
    const RunConfig rc = parse_config(is);
    CHECK(rc.plant.C1 == doctest::Approx(2.7e-3));
    CHECK(rc.sim.dt == doctest::Approx(1e-6));
    CHECK(rc.sim.decimation == 20);
    CHECK(rc.scenario.events.empty());
    CHECK_NOTHROW(rc.resolve_gains());
}

TEST_CASE("bundled demonstration file matches the built-in configuration") {
    const RunConfig file =
        load_config(std::string(GFL_SOURCE_DIR) + "/configs/paper_s4.cfg");
    const RunConfig ref = default_config();

    CHECK(file.plant.C1 == ref.plant.C1);
    CHECK(file.plant.L == ref.plant.L);
    CHECK(file.plant.C2 == ref.plant.C2);
    CHECK(file.plant.Lg == ref.plant.Lg);
    CHECK(file.plant.Rg == ref.plant.Rg);
    CHECK(file.plant.omega == ref.plant.omega);
    CHECK(file.plant.vg_peak_phase == ref.plant.vg_peak_phase);

    const ControllerGains gf = file.resolve_gains();
    const ControllerGains gr = ref.resolve_gains();
    CHECK(gf.k1 == gr.k1);
    CHECK(gf.k2 == gr.k2);
    CHECK(gf.k3 == gr.k3);
    CHECK(gf.k0 == gr.k0);

    CHECK(file.scenario.s_rating == ref.scenario.s_rating);
    REQUIRE(file.scenario.events.size() == ref.scenario.events.size());
    for (size_t i = 0; i < ref.scenario.events.size(); ++i) {
        CHECK(file.scenario.events[i].time == ref.scenario.events[i].time);
        CHECK(file.scenario.events[i].kind == ref.scenario.events[i].kind);
        CHECK(file.scenario.events[i].target == ref.scenario.events[i].target);
        CHECK(file.scenario.events[i].window == ref.scenario.events[i].window);
    }
    CHECK(file.sim.dt == ref.sim.dt);
    CHECK(file.sim.t_end == ref.sim.t_end);
    CHECK(file.sim.decimation == ref.sim.decimation);
    CHECK(file.sim.guard.i_guard == ref.sim.guard.i_guard);
    CHECK(file.sim.guard.v_guard == ref.sim.guard.v_guard);
    CHECK(file.sim.v_floor == ref.sim.v_floor);
}

TEST_CASE("schema violations are reported with the offending field") {
    const auto parse = [](const std::string& extra) {
        std::istringstream is(
            "controller.ts1_s = 1e-3\n"
            "controller.zeta1 = 0.707\n"
            "controller.ts2_s = 10e-3\n"
            "controller.zeta2 = 0.707\n" +
            extra);
        return parse_config(is);
    };
    SUBCASE("unknown key") {
        CHECK_THROWS_WITH_AS(parse("plant.R1_ohm = 5\n"),
                             doctest::Contains("plant.R1_ohm"), ConfigError);
    }
    SUBCASE("duplicate key") {
        CHECK_THROWS_WITH_AS(parse("sim.dt_s = 1e-6\nsim.dt_s = 2e-6\n"),
                             doctest::Contains("duplicate"), ConfigError);
    }
    SUBCASE("malformed number") {
        CHECK_THROWS_WITH_AS(parse("sim.dt_s = fast\n"),
                             doctest::Contains("sim.dt_s"), ConfigError);
    }
    SUBCASE("zero end time") {
        CHECK_THROWS_WITH_AS(parse("sim.t_end_s = 0\n"),
                             doctest::Contains("t_end"), ConfigError);
    }
    SUBCASE("bad event string") {
        CHECK_THROWS_WITH_AS(parse("scenario.event.1 = 0.01 dc_ref 750\n"),
                             doctest::Contains("scenario.event.1"),
                             ConfigError);
    }
    SUBCASE("unknown event kind") {
        CHECK_THROWS_WITH_AS(
            parse("scenario.event.1 = 0.01 dc_volts 750 0.01\n"),
            doctest::Contains("dc_volts"), ConfigError);
    }
    SUBCASE("grid magnitude with nonzero window") {
        CHECK_THROWS_WITH_AS(
            parse("scenario.event.1 = 0.01 grid_magnitude 0.8 0.01\n"),
            doctest::Contains("step"), ConfigError);
    }
    SUBCASE("partial pole spec") {
        std::istringstream is("controller.ts1_s = 1e-3\n");
        CHECK_THROWS_WITH_AS(parse_config(is), doctest::Contains("pole specs"),
                             ConfigError);
    }
    SUBCASE("both pole specs and explicit gains") {
        CHECK_THROWS_WITH_AS(
            parse("controller.k1 = 1\ncontroller.k2 = 1\ncontroller.k3 = 1\n"
                  "controller.k0 = 1\n"),
            doctest::Contains("not both"), ConfigError);
    }
    SUBCASE("no controller at all") {
        std::istringstream is("plant.Rg_ohm = 28.28\n");
        CHECK_THROWS_WITH_AS(parse_config(is), doctest::Contains("controller"),
                             ConfigError);
    }
    SUBCASE("single init component") {
        CHECK_THROWS_WITH_AS(parse("init.i_g_alpha_A = 0\n"),
                             doctest::Contains("beta"), ConfigError);
    }
}

TEST_CASE("explicit gains are accepted") {
    std::istringstream is(
        "controller.k1 = 4.28e10\n"
        "controller.k2 = 5.12e7\n"
        "controller.k3 = 1.01e4\n"
        "controller.k0 = 1.79e13\n");
    const RunConfig rc = parse_config(is);
    const ControllerGains g = rc.resolve_gains();
    CHECK(g.k1 == 4.28e10);
    CHECK(g.k0 == 1.79e13);
}

TEST_CASE("CSV round trip is lossless") {
    TimeSeriesRecord rec;
    const double values[] = {M_PI, 1.0 / 3.0, -std::sqrt(2.0), 6.02214076e23,
                             -1.6e-19};
    for (int i = 0; i < 5; ++i) {
        const double v = values[i];
        rec.t.push_back(i * 2e-5);
        rec.v_C1.push_back(v);
        rec.v_C1_ref.push_back(-v);
        rec.i_L.push_back({v, -v});
        rec.v_C2.push_back({v * 2, v / 3});
        rec.i_g.push_back({-v, v});
        rec.v_g.push_back({v, v});
        rec.mu_abc.push_back({v, -v / 2, -v / 2});
        rec.p_i.push_back(v);
        rec.p.push_back(v);
        rec.q.push_back(v);
        rec.e1.push_back({v, v});
        rec.e2.push_back({v, v});
        rec.e3.push_back({v, v});
        rec.w.push_back({v, v});
        rec.y.push_back({v, v});
        rec.guard_flags.push_back(i);
    }
    std::ostringstream os;
    write_csv(os, rec);
    const std::string text = os.str();

    std::istringstream is(text);
    const TimeSeriesRecord back = read_csv(is);
    REQUIRE(back.size() == rec.size());
    for (size_t i = 0; i < rec.size(); ++i) {
        CHECK(back.v_C1[i] == rec.v_C1[i]);
        CHECK(back.i_L[i] == rec.i_L[i]);
        CHECK(back.w[i] == rec.w[i]);
        CHECK(back.guard_flags[i] == rec.guard_flags[i]);
    }
    // re-serialization reproduces the bytes
    std::ostringstream os2;
    write_csv(os2, back);
    CHECK(os2.str() == text);
}

TEST_CASE("CSV reader rejects malformed input") {
    std::istringstream bad_header("nope\n1,2\n");
    CHECK_THROWS_AS(read_csv(bad_header), ConfigError);
    std::istringstream short_row(std::string(csv_header()) + "\n1,2,3\n");
    CHECK_THROWS_AS(read_csv(short_row), ConfigError);
}

}  // TEST_SUITE
