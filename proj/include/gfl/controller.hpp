#pragma once

#include "gfl/plant.hpp"
#include "gfl/trajectory.hpp"

namespace gfl {

// Real feedback gains of the linearized error dynamics; the closed-loop
// characteristic polynomial is s^4 + k3 s^3 + k2 s^2 + k1 s + k0.
struct ControllerGains {
    double k1;
    double k2;
    double k3;
    double k0;

    // All gains must be strictly positive (necessary for Hurwitz).
    void validate() const;
};

// Thresholds below which the modulation-index division is not evaluated.
struct GuardThresholds {
    double i_guard = 0.1;   // minimum |i_g| [A]
    double v_guard = 10.0;  // minimum v_C1 [V]
};

// Controller memory: the integral-action state and the held output for
// guard events. guard_count tallies guard activations.
struct ControllerState {
    Complex y{};        // integral of e1 [J*s]
    Complex last_mu{};  // output held while a guard is active
    long guard_count = 0;
};

// Flat-output chain and its tracking errors.
struct FlatCoordinates {
    Complex xi1;  // stored energy minus j * reactive-energy integral [J]
    Complex xi2;  // input power minus complex PCC power [W]
    Complex xi3;  // derivative of xi2 [W/s]
    Complex e1, e2, e3;
};

struct ReferenceTargets {
    Complex xi1_r;
    Complex xi2_r;
    Complex xi3_r;
    Complex xi3_r_dot;
};

/// Energy-based flat output: half the energy stored in the DC-link
/// capacitor, filter inductor and filter capacitor, minus j times the
/// running integral of the PCC reactive power.
Complex flat_output(double v_C1, Complex i_L, Complex v_C2, double q_int,
                    const PlantParams& p);

/// First derivative of the flat output along the model: p_i - v_C2*conj(i_g).
Complex xi2_value(double p_i, Complex v_C2, Complex i_g);

/// Second derivative of the flat output along the model.
Complex xi3_value(double p_i_d1, Complex v_C2, Complex i_g, Complex i_g_d1,
                  Complex i_L, double C2);

struct GridCurrentDerivs {
    Complex d1;  // [A/s]
    Complex d2;  // [A/s^2]
};

/// Steady-state approximations of the grid-current derivatives for a
/// balanced positive-sequence current: (j*omega*i_g, -omega^2*i_g).
GridCurrentDerivs grid_current_derivatives(Complex i_g, double omega);

/// Reference chain for the flat output, neglecting the energy stored in
/// the LC filter relative to the DC link.
ReferenceTargets reference_targets(const ReferenceFrame& r, double C1);

/// State feedback with integral action on the linearized chain:
/// w = xi3_r_dot - k3 e3 - k2 e2 - k1 e1 - k0 y.
Complex auxiliary_input(Complex e1, Complex e2, Complex e3, Complex y,
                        const ControllerGains& g, Complex xi3_r_dot);

struct ModulationResult {
    Complex mu;
    bool guarded;  // true when the division guard held last_mu
};

/// Exact linearizing modulation index: solves the auxiliary-input relation
/// for mu. Degenerate denominators (|i_g| or v_C1 below the thresholds)
/// return st.last_mu unchanged and raise the guard flag; otherwise
/// st.last_mu is updated with the fresh value.
ModulationResult modulation_index(Complex w, double p_i_d2, Complex v_C2,
                                  Complex i_g, Complex i_g_d1, Complex i_g_d2,
                                  Complex i_L, double v_C1, double L, double C2,
                                  const GuardThresholds& guard,
                                  ControllerState& st);

/// Auxiliary input recovered from a modulation index through the forward
/// relation (the third derivative of the flat output as a function of mu).
/// Kept independent of modulation_index so the pair can cross-check.
Complex auxiliary_from_modulation(Complex mu, double p_i_d2, Complex v_C2,
                                  Complex i_g, Complex i_g_d1, Complex i_g_d2,
                                  Complex i_L, double v_C1, double L,
                                  double C2);

// Plant quantities the controller measures at one evaluation instant.
struct Measurements {
    double v_C1;
    Complex i_L;
    Complex v_C2;
    Complex i_g;
    double q_int;
};

struct ControlOutput {
    Complex mu;
    Complex w;
    FlatCoordinates flat;
    ReferenceTargets refs;
    bool guarded;
};

/// One controller evaluation: flat chain, tracking errors, auxiliary input
/// and modulation index. Updates st.last_mu (and the guard tally); the
/// integral state y is advanced by the simulation engine, not here.
ControlOutput control_step(const Measurements& m, const ReferenceFrame& r,
                           const ControllerGains& g, ControllerState& st,
                           const PlantParams& p, const GuardThresholds& guard);

}  // namespace gfl
