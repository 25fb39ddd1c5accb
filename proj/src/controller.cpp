#include "gfl/controller.hpp"

#include <cmath>

namespace gfl {

void ControllerGains::validate() const {
    if (!(k1 > 0.0) || !(k2 > 0.0) || !(k3 > 0.0) || !(k0 > 0.0)) {
        throw std::invalid_argument(
            "controller gains must all be strictly positive");
    }
}

Complex flat_output(double v_C1, Complex i_L, Complex v_C2, double q_int,
                    const PlantParams& p) {
    const double stored = 0.5 * (p.C1 * v_C1 * v_C1 + p.L * std::norm(i_L) +
                                 p.C2 * std::norm(v_C2));
    return {stored, -q_int};
}

Complex xi2_value(double p_i, Complex v_C2, Complex i_g) {
    return p_i - v_C2 * std::conj(i_g);
}

Complex xi3_value(double p_i_d1, Complex v_C2, Complex i_g, Complex i_g_d1,
                  Complex i_L, double C2) {
    return p_i_d1 - v_C2 * std::conj(i_g_d1) +
           (i_g - i_L) / C2 * std::conj(i_g);
}

GridCurrentDerivs grid_current_derivatives(Complex i_g, double omega) {
    return {Complex(0.0, omega) * i_g, -omega * omega * i_g};
}

ReferenceTargets reference_targets(const ReferenceFrame& r, double C1) {
    ReferenceTargets t;
    t.xi1_r = {0.5 * C1 * r.v_ref * r.v_ref, -r.q_ref_int};
    t.xi2_r = {C1 * r.v_ref * r.v_ref_d1, -r.q_ref};
    t.xi3_r = {C1 * (r.v_ref_d1 * r.v_ref_d1 + r.v_ref * r.v_ref_d2),
               -r.q_ref_d1};
    t.xi3_r_dot = {C1 * (3.0 * r.v_ref_d1 * r.v_ref_d2 + r.v_ref * r.v_ref_d3),
                   -r.q_ref_d2};
    return t;
}

Complex auxiliary_input(Complex e1, Complex e2, Complex e3, Complex y,
                        const ControllerGains& g, Complex xi3_r_dot) {
    return xi3_r_dot - g.k3 * e3 - g.k2 * e2 - g.k1 * e1 - g.k0 * y;
}

ModulationResult modulation_index(Complex w, double p_i_d2, Complex v_C2,
                                  Complex i_g, Complex i_g_d1, Complex i_g_d2,
                                  Complex i_L, double v_C1, double L, double C2,
                                  const GuardThresholds& guard,
                                  ControllerState& st) {
    if (std::abs(i_g) < guard.i_guard || v_C1 < guard.v_guard) {
        ++st.guard_count;
        return {st.last_mu, true};
    }
    const Complex num =
        L * C2 * (p_i_d2 - v_C2 * std::conj(i_g_d2) - w) +
        2.0 * L * (i_g - i_L) * std::conj(i_g_d1) +
        (v_C2 + L * i_g_d1) * std::conj(i_g);
    const Complex mu = num / (v_C1 * std::conj(i_g));
    st.last_mu = mu;
    return {mu, false};
}

Complex auxiliary_from_modulation(Complex mu, double p_i_d2, Complex v_C2,
                                  Complex i_g, Complex i_g_d1, Complex i_g_d2,
                                  Complex i_L, double v_C1, double L,
                                  double C2) {
    return p_i_d2 + 2.0 * (i_g - i_L) / C2 * std::conj(i_g_d1) +
           i_g_d1 * std::conj(i_g) / C2 - v_C2 * std::conj(i_g_d2) -
           (mu * v_C1 - v_C2) / (L * C2) * std::conj(i_g);
}

ControlOutput control_step(const Measurements& m, const ReferenceFrame& r,
                           const ControllerGains& g, ControllerState& st,
                           const PlantParams& p, const GuardThresholds& guard) {
    ControlOutput out;
    const GridCurrentDerivs igd = grid_current_derivatives(m.i_g, p.omega);

    out.flat.xi1 = flat_output(m.v_C1, m.i_L, m.v_C2, m.q_int, p);
    out.flat.xi2 = xi2_value(r.p_i, m.v_C2, m.i_g);
    out.flat.xi3 = xi3_value(r.p_i_d1, m.v_C2, m.i_g, igd.d1, m.i_L, p.C2);

    out.refs = reference_targets(r, p.C1);
    out.flat.e1 = out.flat.xi1 - out.refs.xi1_r;
    out.flat.e2 = out.flat.xi2 - out.refs.xi2_r;
    out.flat.e3 = out.flat.xi3 - out.refs.xi3_r;

    out.w = auxiliary_input(out.flat.e1, out.flat.e2, out.flat.e3, st.y, g,
                            out.refs.xi3_r_dot);
    const ModulationResult mr =
        modulation_index(out.w, r.p_i_d2, m.v_C2, m.i_g, igd.d1, igd.d2, m.i_L,
                         m.v_C1, p.L, p.C2, guard, st);
    out.mu = mr.mu;
    out.guarded = mr.guarded;
    return out;
}

}  // namespace gfl
