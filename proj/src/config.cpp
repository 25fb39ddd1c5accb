#include "gfl/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace gfl {

ControllerGains RunConfig::resolve_gains() const {
    if (pole_specs && explicit_gains) {
        throw ConfigError(
            "controller: give either pole specs or explicit gains, not both");
    }
    if (explicit_gains) {
        ControllerGains g = *explicit_gains;
        g.validate();
        return g;
    }
    if (pole_specs) {
        return gains_from_specs(pole_specs->first, pole_specs->second,
                                tuning_settle_factor);
    }
    throw ConfigError(
        "controller: missing pole specs (controller.ts1_s/zeta1/ts2_s/zeta2) "
        "or explicit gains (controller.k1/k2/k3/k0)");
}

RunConfig default_config() {
    RunConfig rc;
    rc.plant = presets::nominal_plant();
    rc.pole_specs = presets::nominal_pole_specs();
    rc.scenario = presets::nominal_scenario();
    rc.sim = presets::nominal_sim_config();
    return rc;
}

namespace {

struct RawConfig {
    std::map<std::string, std::pair<std::string, int>> kv;  // value, line
};

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_number(const std::string& field, const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) {
        throw ConfigError(field + ": empty value");
    }
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) {
        throw ConfigError(field + ": cannot parse '" + t + "' as a number");
    }
    return v;
}

class ConfigReader {
public:
    explicit ConfigReader(RawConfig raw) : raw_(std::move(raw)) {}

    std::optional<double> number(const std::string& key) {
        auto it = raw_.kv.find(key);
        if (it == raw_.kv.end()) return std::nullopt;
        used_.push_back(key);
        return parse_number(key, it->second.first);
    }

    double number_or(const std::string& key, double fallback) {
        const auto v = number(key);
        return v ? *v : fallback;
    }

    std::optional<std::string> text(const std::string& key) {
        auto it = raw_.kv.find(key);
        if (it == raw_.kv.end()) return std::nullopt;
        used_.push_back(key);
        return it->second.first;
    }

    // events are numbered scenario.event.1, .2, ... with the value
    // "time_s kind target window_s"
    std::vector<ScenarioEvent> events() {
        std::vector<ScenarioEvent> out;
        for (int n = 1;; ++n) {
            std::ostringstream key;
            key << "scenario.event." << n;
            const auto v = text(key.str());
            if (!v) break;
            std::istringstream is(*v);
            std::string time_s, kind_s, target_s, window_s, extra;
            is >> time_s >> kind_s >> target_s >> window_s;
            if (!is || (is >> extra)) {
                throw ConfigError(key.str() +
                                  ": expected 'time_s kind target window_s'");
            }
            ScenarioEvent e;
            e.time = parse_number(key.str() + " time", time_s);
            e.kind = event_kind_from_string(kind_s);
            e.target = parse_number(key.str() + " target", target_s);
            e.window = parse_number(key.str() + " window", window_s);
            out.push_back(e);
        }
        return out;
    }

    void reject_unknown() const {
        for (const auto& [key, value] : raw_.kv) {
            if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
                std::ostringstream os;
                os << "unknown key '" << key << "' (line " << value.second
                   << ")";
                throw ConfigError(os.str());
            }
        }
    }

private:
    RawConfig raw_;
    std::vector<std::string> used_;
};

RawConfig read_raw(std::istream& is) {
    RawConfig raw;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const size_t eq = t.find('=');
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << "line " << line_no << ": expected 'key = value'";
            throw ConfigError(os.str());
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) {
            std::ostringstream os;
            os << "line " << line_no << ": empty key";
            throw ConfigError(os.str());
        }
        if (raw.kv.count(key)) {
            throw ConfigError("duplicate key '" + key + "' (line " +
                              std::to_string(line_no) + ")");
        }
        raw.kv[key] = {value, line_no};
    }
    return raw;
}

}  // namespace

RunConfig parse_config(std::istream& is) {
    ConfigReader r(read_raw(is));
    RunConfig rc;

    rc.plant.C1 = r.number_or("plant.C1_F", rc.plant.C1);
    rc.plant.L = r.number_or("plant.L_H", rc.plant.L);
    rc.plant.C2 = r.number_or("plant.C2_F", rc.plant.C2);
    rc.plant.Lg = r.number_or("plant.Lg_H", rc.plant.Lg);
    rc.plant.Rg = r.number_or("plant.Rg_ohm", rc.plant.Rg);
    rc.plant.omega = r.number_or("plant.omega_rad_s", rc.plant.omega);
    rc.plant.vg_peak_phase =
        r.number_or("plant.vg_peak_phase_V", rc.plant.vg_peak_phase);

    const auto ts1 = r.number("controller.ts1_s");
    const auto z1 = r.number("controller.zeta1");
    const auto ts2 = r.number("controller.ts2_s");
    const auto z2 = r.number("controller.zeta2");
    const int n_spec = int(bool(ts1)) + int(bool(z1)) + int(bool(ts2)) +
                       int(bool(z2));
    if (n_spec != 0 && n_spec != 4) {
        throw ConfigError(
            "controller: pole specs need all four of ts1_s, zeta1, ts2_s, "
            "zeta2");
    }
    if (n_spec == 4) {
        rc.pole_specs = {PoleSpec{*ts1, *z1}, PoleSpec{*ts2, *z2}};
    }
    const auto k1 = r.number("controller.k1");
    const auto k2 = r.number("controller.k2");
    const auto k3 = r.number("controller.k3");
    const auto k0 = r.number("controller.k0");
    const int n_gain = int(bool(k1)) + int(bool(k2)) + int(bool(k3)) +
                       int(bool(k0));
    if (n_gain != 0 && n_gain != 4) {
        throw ConfigError("controller: explicit gains need all of k1, k2, k3, k0");
    }
    if (n_gain == 4) {
        rc.explicit_gains = ControllerGains{*k1, *k2, *k3, *k0};
    }
    rc.tuning_settle_factor =
        r.number_or("controller.settle_factor", rc.tuning_settle_factor);

    rc.scenario.v_ref0 = r.number_or("scenario.v_ref0_V", rc.scenario.v_ref0);
    rc.scenario.q_ref0 =
        r.number_or("scenario.q_ref0_var", rc.scenario.q_ref0);
    rc.scenario.p_i0 = r.number_or("scenario.p_i0_W", rc.scenario.p_i0);
    rc.scenario.s_rating =
        r.number_or("scenario.s_rating_VA", rc.scenario.s_rating);
    rc.scenario.events = r.events();

    rc.sim.dt = r.number_or("sim.dt_s", rc.sim.dt);
    rc.sim.t_end = r.number_or("sim.t_end_s", rc.sim.t_end);
    const double dec = r.number_or("sim.decimation", rc.sim.decimation);
    if (dec != std::floor(dec)) {
        throw ConfigError("sim.decimation: must be an integer");
    }
    rc.sim.decimation = static_cast<int>(dec);
    rc.sim.v_floor = r.number_or("sim.v_floor_V", rc.sim.v_floor);
    rc.sim.guard.i_guard = r.number_or("sim.i_guard_A", rc.sim.guard.i_guard);
    rc.sim.guard.v_guard = r.number_or("sim.v_guard_V", rc.sim.guard.v_guard);
    rc.sim.settle_factor =
        r.number_or("sim.settle_factor", rc.sim.settle_factor);

    rc.sim.init.v_C1 = r.number("init.v_C1_V");
    const auto ila = r.number("init.i_L_alpha_A");
    const auto ilb = r.number("init.i_L_beta_A");
    const auto vca = r.number("init.v_C2_alpha_V");
    const auto vcb = r.number("init.v_C2_beta_V");
    const auto iga = r.number("init.i_g_alpha_A");
    const auto igb = r.number("init.i_g_beta_A");
    auto pair_override = [](const char* name, const std::optional<double>& re,
                            const std::optional<double>& im)
        -> std::optional<Complex> {
        if (bool(re) != bool(im)) {
            throw ConfigError(std::string("init.") + name +
                              ": give both alpha and beta components");
        }
        if (!re) return std::nullopt;
        return Complex(*re, *im);
    };
    rc.sim.init.i_L = pair_override("i_L", ila, ilb);
    rc.sim.init.v_C2 = pair_override("v_C2", vca, vcb);
    rc.sim.init.i_g = pair_override("i_g", iga, igb);

    r.reject_unknown();

    rc.plant.validate();
    rc.scenario.validate();
    rc.sim.validate();
    rc.resolve_gains();  // validate the controller section
    return rc;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    try {
        return parse_config(f);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace gfl
