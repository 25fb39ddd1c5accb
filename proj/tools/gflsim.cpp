#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "gfl/acceptance.hpp"
#include "gfl/config.hpp"
#include "gfl/csv.hpp"
#include "gfl/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;  // validation or criterion failure
constexpr int kExitFault = 2;    // simulation fault

int cmd_run(const std::string& config_path, const std::string& output_path,
            std::optional<double> dt, std::optional<double> t_end,
            std::optional<int> decimation) {
    gfl::RunConfig rc = gfl::load_config(config_path);
    if (dt) rc.sim.dt = *dt;
    if (t_end) rc.sim.t_end = *t_end;
    if (decimation) rc.sim.decimation = *decimation;
    rc.sim.validate();

    const gfl::SimResult res = gfl::run_scenario(rc.plant, rc.resolve_gains(),
                                                 rc.scenario, rc.sim);
    for (const std::string& w : res.warnings) {
        std::cerr << "warning: " << w << "\n";
    }

    std::ofstream out(output_path);
    if (!out) {
        std::cerr << "error: cannot write '" << output_path << "'\n";
        return kExitFailure;
    }
    gfl::write_csv(out, res.record);
    out.close();
    std::cout << "wrote " << res.record.size() << " rows to " << output_path
              << "\n";

    gfl::print_summary(std::cout,
                       gfl::summarize(res.record, rc.scenario.events));

    if (res.fault) {
        const auto& rec = res.record;
        std::cerr << "simulation fault at t = " << res.fault->t << " s: "
                  << res.fault->reason << "\n";
        if (rec.size() > 0) {
            const size_t i = rec.size() - 1;
            std::cerr << "last logged state (t = " << rec.t[i]
                      << " s): v_C1 = " << rec.v_C1[i] << " V, i_L = ("
                      << rec.i_L[i].real() << ", " << rec.i_L[i].imag()
                      << ") A, v_C2 = (" << rec.v_C2[i].real() << ", "
                      << rec.v_C2[i].imag() << ") V, i_g = ("
                      << rec.i_g[i].real() << ", " << rec.i_g[i].imag()
                      << ") A\n";
        }
        return kExitFault;
    }
    return kExitOk;
}

int cmd_tune(double ts1, double zeta1, double ts2, double zeta2,
             double settle_factor) {
    const gfl::PoleSpec s1{ts1, zeta1};
    const gfl::PoleSpec s2{ts2, zeta2};
    const gfl::PolePair p1 = gfl::poles_from_spec(s1, settle_factor);
    const gfl::PolePair p2 = gfl::poles_from_spec(s2, settle_factor);
    const gfl::PoleSet poles{p1[0], p1[1], p2[0], p2[1]};
    const gfl::ControllerGains g = gfl::gains_from_poles(poles);
    const gfl::AssignmentReport rep = gfl::verify_assignment(g, poles);

    std::cout.precision(12);
    std::cout << "poles:\n";
    for (const auto& p : poles) {
        std::cout << "  " << p.real() << (p.imag() >= 0 ? " + " : " - ")
                  << std::abs(p.imag()) << "j\n";
    }
    std::cout << "gains:\n"
              << "  k1 = " << g.k1 << "\n"
              << "  k2 = " << g.k2 << "\n"
              << "  k3 = " << g.k3 << "\n"
              << "  k0 = " << g.k0 << "\n";
    std::cout << "scaled characteristic-polynomial residuals at the poles:\n";
    for (double r : rep.scaled_residuals) {
        std::cout << "  " << r << "\n";
    }
    return kExitOk;
}

int cmd_verify(const std::optional<std::string>& config_path) {
    gfl::AcceptanceOptions opt;
    opt.config_path = config_path;
    const auto results = gfl::run_acceptance(opt, std::cout);
    size_t passed = 0;
    for (const auto& r : results) passed += r.pass ? 1 : 0;
    std::cout << passed << "/" << results.size() << " criteria passed\n";
    return gfl::all_passed(results) ? kExitOk : kExitFailure;
}

int cmd_sweep(const std::string& config_path, const std::string& output_path,
              const gfl::SweepRange& rg, const gfl::SweepRange& lg, int jobs) {
    const gfl::RunConfig rc = gfl::load_config(config_path);
    const auto points = gfl::run_sweep(rc, rg, lg, jobs);

    std::ofstream out(output_path);
    if (!out) {
        std::cerr << "error: cannot write '" << output_path << "'\n";
        return kExitFailure;
    }
    gfl::write_sweep_csv(out, points);
    size_t stable = 0;
    for (const auto& p : points) stable += p.stable ? 1 : 0;
    std::cout << "swept " << points.size() << " grid points, " << stable
              << " stable; wrote " << output_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Simulator and tuning tool for flatness-based control of a "
        "grid-tied voltage-source inverter with an LC filter"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand(
        "run", "Simulate a scenario from a config file and write the CSV log");
    std::string run_config, run_output;
    std::optional<double> run_dt, run_tend;
    std::optional<int> run_dec;
    run->add_option("config", run_config, "run configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("output", run_output, "output CSV path")->required();
    run->add_option("--dt", run_dt, "integration step override [s]");
    run->add_option("--t-end", run_tend, "end time override [s]");
    run->add_option("--decimation", run_dec, "log decimation override");

    // tune
    auto* tune = app.add_subcommand(
        "tune", "Print feedback gains for two settling-time/damping specs");
    double ts1, zeta1, ts2, zeta2;
    double settle_factor = 4.6;
    tune->add_option("ts1", ts1, "settling time of the fast pair [s]")
        ->required();
    tune->add_option("zeta1", zeta1, "damping of the fast pair")->required();
    tune->add_option("ts2", ts2, "settling time of the slow pair [s]")
        ->required();
    tune->add_option("zeta2", zeta2, "damping of the slow pair")->required();
    tune->add_option("--settle-factor", settle_factor,
                     "settling-band convention: sigma = factor / ts");

    // verify
    auto* verify = app.add_subcommand(
        "verify", "Run the acceptance suite (pass/fail per criterion)");
    std::optional<std::string> verify_config;
    verify->add_option("--config", verify_config,
                       "also check this config file against the built-in "
                       "demonstration setup");

    // sweep
    auto* sweep = app.add_subcommand(
        "sweep", "Run the scenario across a grid of Rg/Lg values");
    std::string sweep_config, sweep_output;
    gfl::SweepRange rg{28.28, 28.28, 1};
    gfl::SweepRange lg{90e-3, 90e-3, 1};
    int jobs = 0;
    sweep->add_option("config", sweep_config, "run configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    sweep->add_option("output", sweep_output, "aggregate CSV path")->required();
    sweep->add_option("--rg-min", rg.min, "grid resistance range start [ohm]");
    sweep->add_option("--rg-max", rg.max, "grid resistance range end [ohm]");
    sweep->add_option("--rg-steps", rg.steps, "grid points along Rg");
    sweep->add_option("--lg-min", lg.min, "grid inductance range start [H]");
    sweep->add_option("--lg-max", lg.max, "grid inductance range end [H]");
    sweep->add_option("--lg-steps", lg.steps, "grid points along Lg");
    sweep->add_option("--jobs", jobs, "worker threads (0 = hardware)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(run_config, run_output, run_dt, run_tend, run_dec);
        }
        if (tune->parsed()) {
            return cmd_tune(ts1, zeta1, ts2, zeta2, settle_factor);
        }
        if (verify->parsed()) {
            return cmd_verify(verify_config);
        }
        if (sweep->parsed()) {
            return cmd_sweep(sweep_config, sweep_output, rg, lg, jobs);
        }
    } catch (const gfl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFault;
    }
    return kExitFailure;
}
