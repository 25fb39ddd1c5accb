#include "gfl/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

namespace gfl {

double short_circuit_ratio(const PlantParams& p, double s_rating) {
    const double v_ll_sq = 1.5 * p.vg_peak_phase * p.vg_peak_phase;
    const double z = std::hypot(p.Rg, p.omega * p.Lg);
    return v_ll_sq / (z * s_rating);
}

namespace {

SweepPoint evaluate_point(const RunConfig& base, double rg_val,
                          double lg_val) {
    SweepPoint pt{};
    pt.Rg = rg_val;
    pt.Lg = lg_val;

    RunConfig rc = base;
    rc.plant.Rg = rg_val;
    rc.plant.Lg = lg_val;
    pt.scr = short_circuit_ratio(rc.plant, rc.scenario.s_rating);
    pt.x_over_r = rg_val > 0.0 ? rc.plant.omega * lg_val / rg_val
                               : std::numeric_limits<double>::infinity();

    SimResult res;
    try {
        res = run_scenario(rc.plant, rc.resolve_gains(), rc.scenario, rc.sim);
    } catch (const std::exception&) {
        pt.fault = true;
        pt.stable = false;
        return pt;
    }
    pt.fault = res.fault.has_value();
    pt.guard_count = res.guard_count;

    const TimeSeriesRecord& rec = res.record;
    const SummaryMetrics sum = summarize(rec, rc.scenario.events);
    pt.mu_abc_max = sum.mu_abc_max;
    if (!sum.segments.empty() && sum.segments.back().available) {
        pt.v_C1_err_final = sum.segments.back().v_C1_err_mean;
    } else {
        pt.v_C1_err_final = std::numeric_limits<double>::quiet_NaN();
    }

    // errors-extinguish measure: final steady window vs run peak
    double peak = 0.0;
    for (const Complex& e : rec.e1) peak = std::max(peak, std::abs(e));
    double final_sum = 0.0;
    size_t final_n = 0;
    if (rec.size() > 0) {
        const double seg_start =
            sum.segments.empty() ? 0.0 : sum.segments.back().t_start;
        const double w_start =
            rec.t.back() - 0.2 * (rec.t.back() - seg_start);
        for (size_t i = 0; i < rec.size(); ++i) {
            if (rec.t[i] >= w_start) {
                final_sum += std::abs(rec.e1[i]);
                ++final_n;
            }
        }
    }
    const double final_mean = final_n ? final_sum / final_n : 0.0;
    pt.e1_final_ratio = peak > 0.0 ? final_mean / peak : 0.0;

    // 4 controller evaluations per step
    const double n_evals =
        4.0 * std::llround(rc.sim.t_end / rc.sim.dt);
    const bool guard_storm = pt.guard_count > 0.001 * n_evals;
    pt.stable = !pt.fault && !guard_storm && pt.e1_final_ratio < 0.01;
    return pt;
}

double range_value(const SweepRange& r, int i) {
    if (r.steps <= 1) return r.min;
    return r.min + (r.max - r.min) * i / (r.steps - 1);
}

}  // namespace

std::vector<SweepPoint> run_sweep(const RunConfig& base, const SweepRange& rg,
                                  const SweepRange& lg, int jobs) {
    std::vector<std::pair<double, double>> grid;
    for (int i = 0; i < rg.steps; ++i) {
        for (int j = 0; j < lg.steps; ++j) {
            grid.emplace_back(range_value(rg, i), range_value(lg, j));
        }
    }
    std::vector<SweepPoint> out(grid.size());
    if (grid.empty()) return out;

    if (jobs <= 0) {
        jobs = static_cast<int>(std::thread::hardware_concurrency());
        if (jobs <= 0) jobs = 1;
    }
    jobs = std::min<int>(jobs, static_cast<int>(grid.size()));

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            out[i] = evaluate_point(base, grid[i].first, grid[i].second);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
    return out;
}

namespace {
void put(std::ostream& os, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    os.write(buf, res.ptr - buf);
}
}  // namespace

void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points) {
    os << "Rg_ohm,Lg_H,scr,x_over_r,stable,fault,guard_count,mu_abc_max,"
          "v_C1_err_final_V,e1_final_ratio\n";
    for (const SweepPoint& p : points) {
        put(os, p.Rg); os << ',';
        put(os, p.Lg); os << ',';
        put(os, p.scr); os << ',';
        put(os, p.x_over_r); os << ',';
        os << (p.stable ? 1 : 0) << ',' << (p.fault ? 1 : 0) << ','
           << p.guard_count << ',';
        put(os, p.mu_abc_max); os << ',';
        put(os, p.v_C1_err_final); os << ',';
        put(os, p.e1_final_ratio); os << '\n';
    }
}

}  // namespace gfl
