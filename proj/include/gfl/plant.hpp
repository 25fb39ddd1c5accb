#pragma once

#include <stdexcept>
#include <string>

#include "gfl/frames.hpp"

namespace gfl {

// Circuit constants of the averaged converter model: voltage-source
// inverter behind an LC filter, tied to a Thevenin-equivalent grid.
struct PlantParams {
    double C1;             // DC-link capacitance [F]
    double L;              // filter inductance [H]
    double C2;             // filter capacitance [F]
    double Lg;             // grid inductance [H]
    double Rg;             // grid resistance [ohm]
    double omega;          // grid angular frequency [rad/s]
    double vg_peak_phase;  // nominal per-phase peak grid voltage [V]

    // Throws std::invalid_argument on non-physical values.
    void validate() const;
};

// Dynamic state in the complex alpha-beta formulation. q_int carries the
// running integral of the reactive power injected at the PCC.
struct PlantState {
    double v_C1{};   // DC-link voltage [V]
    Complex i_L{};   // filter inductor current [A]
    Complex v_C2{};  // filter capacitor voltage [V]
    Complex i_g{};   // grid current [A]
    double q_int{};  // integral of q [J]
};

inline PlantState operator+(const PlantState& x, const PlantState& y) {
    return {x.v_C1 + y.v_C1, x.i_L + y.i_L, x.v_C2 + y.v_C2,
            x.i_g + y.i_g, x.q_int + y.q_int};
}
inline PlantState operator*(double s, const PlantState& x) {
    return {s * x.v_C1, s * x.i_L, s * x.v_C2, s * x.i_g, s * x.q_int};
}

// Same plant in per-phase coordinates.
struct ThreePhasePlantState {
    double v_C1{};
    ThreePhase i_L;   // [A], phases sum to zero
    ThreePhase v_C2;  // [V]
    ThreePhase i_g;   // [A], phases sum to zero
};

inline ThreePhasePlantState operator+(const ThreePhasePlantState& x,
                                      const ThreePhasePlantState& y) {
    return {x.v_C1 + y.v_C1, x.i_L + y.i_L, x.v_C2 + y.v_C2, x.i_g + y.i_g};
}
inline ThreePhasePlantState operator*(double s, const ThreePhasePlantState& x) {
    return {s * x.v_C1, s * x.i_L, s * x.v_C2, s * x.i_g};
}

// Raised when the integration cannot continue (DC-link collapse or a
// non-finite state). Carries the simulation time of the offending evaluation.
struct SimFault : std::runtime_error {
    SimFault(double t_, const std::string& what_)
        : std::runtime_error(what_), t(t_) {}
    double t;
};

/// State derivative of the complex model driven by modulation index mu,
/// constant-power-source input p_i and grid voltage v_g. The DC link is
/// modeled as a constant power source, singular at v_C1 = 0; v_floor
/// converts an approach to that singularity into a SimFault.
PlantState complex_derivatives(const PlantState& s, Complex mu, double p_i,
                               Complex v_g, const PlantParams& p,
                               double v_floor = 10.0, double t = 0.0);

/// State derivative of the per-phase model. The floating-neutral voltages
/// are eliminated through the three-wire constraints, so common-mode
/// components of mu and v_g do not reach the currents.
ThreePhasePlantState three_phase_derivatives(const ThreePhasePlantState& s,
                                             const ThreePhase& mu, double p_i,
                                             const ThreePhase& v_g,
                                             const PlantParams& p,
                                             double v_floor = 10.0,
                                             double t = 0.0);

/// Sinusoidal steady-state grid current for given PCC and grid phasors:
/// (v_C2 - v_g) / (Rg + j*omega*Lg). Used for initialization.
Complex steady_grid_current(Complex v_C2, Complex v_g, const PlantParams& p);

struct PccPower {
    double p;  // active power into the PCC [W]
    double q;  // reactive power into the PCC [var]
};

/// p = Re{v_C2 * conj(i_g)}, q = Im{v_C2 * conj(i_g)}.
PccPower pcc_powers(Complex v_C2, Complex i_g);

}  // namespace gfl
