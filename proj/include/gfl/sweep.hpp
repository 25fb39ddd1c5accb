#pragma once

#include <iosfwd>
#include <vector>

#include "gfl/config.hpp"

namespace gfl {

// Evenly spaced closed range; steps is the number of grid points
// (0 = empty range, 1 = the minimum alone).
struct SweepRange {
    double min;
    double max;
    int steps;
};

struct SweepPoint {
    double Rg;            // [ohm]
    double Lg;            // [H]
    double scr;           // short-circuit ratio at the PCC
    double x_over_r;      // omega*Lg / Rg
    bool stable;          // verdict: no fault, no guard storm, errors extinguish
    bool fault;
    long guard_count;
    double mu_abc_max;
    double v_C1_err_final;  // steady |v_C1 - ref| in the last segment [V]
    double e1_final_ratio;  // mean final |e1| / peak |e1| over the run
};

/// Grid short-circuit power over the converter rating:
/// V_LL^2 / (|Rg + j omega Lg| * S).
double short_circuit_ratio(const PlantParams& p, double s_rating);

/// Runs one independent simulation per (Rg, Lg) grid point of the base
/// configuration's scenario. Points run concurrently (up to `jobs`
/// threads); the returned order is row-major over (rg, lg) regardless of
/// execution order.
///
/// Verdict: stable when the run finishes without fault, guard activations
/// stay under 0.1% of the controller evaluations, and the mean |e1| over
/// the final steady window is below 1% of the run's peak |e1|.
std::vector<SweepPoint> run_sweep(const RunConfig& base, const SweepRange& rg,
                                  const SweepRange& lg, int jobs = 0);

void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points);

}  // namespace gfl
