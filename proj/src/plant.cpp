#include "gfl/plant.hpp"

#include <cmath>
#include <sstream>

namespace gfl {

void PlantParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument(std::string(name) +
                                        " must be strictly positive");
        }
    };
    positive(C1, "C1");
    positive(L, "L");
    positive(C2, "C2");
    positive(Lg, "Lg");
    positive(omega, "omega");
    if (Rg < 0.0 || !std::isfinite(Rg)) {
        throw std::invalid_argument("Rg must be >= 0");
    }
    if (vg_peak_phase < 0.0 || !std::isfinite(vg_peak_phase)) {
        throw std::invalid_argument("vg_peak_phase must be >= 0");
    }
}

namespace {
[[noreturn]] void dc_link_fault(double v_C1, double v_floor, double t) {
    std::ostringstream os;
    os << "DC-link voltage " << v_C1 << " V below floor " << v_floor
       << " V at t = " << t << " s (loss of DC-link control)";
    throw SimFault(t, os.str());
}
}  // namespace

PlantState complex_derivatives(const PlantState& s, Complex mu, double p_i,
                               Complex v_g, const PlantParams& p,
                               double v_floor, double t) {
    if (!(s.v_C1 > v_floor)) {
        dc_link_fault(s.v_C1, v_floor, t);
    }
    PlantState d;
    d.v_C1 = (p_i / s.v_C1 - (std::conj(mu) * s.i_L).real()) / p.C1;
    d.i_L = (mu * s.v_C1 - s.v_C2) / p.L;
    d.v_C2 = (s.i_L - s.i_g) / p.C2;
    d.i_g = (s.v_C2 - p.Rg * s.i_g - v_g) / p.Lg;
    d.q_int = (s.v_C2 * std::conj(s.i_g)).imag();
    return d;
}

ThreePhasePlantState three_phase_derivatives(const ThreePhasePlantState& s,
                                             const ThreePhase& mu, double p_i,
                                             const ThreePhase& v_g,
                                             const PlantParams& p,
                                             double v_floor, double t) {
    if (!(s.v_C1 > v_floor)) {
        dc_link_fault(s.v_C1, v_floor, t);
    }
    // Floating-neutral voltages recovered from the zero-sum current
    // constraints on i_g and i_L.
    const double v_NO = ((s.v_C2.a + s.v_C2.b + s.v_C2.c) -
                         (v_g.a + v_g.b + v_g.c)) / 3.0;
    const double v_OG = ((mu.a + mu.b + mu.c) * s.v_C1 -
                         (s.v_C2.a + s.v_C2.b + s.v_C2.c)) / 3.0;

    ThreePhasePlantState d;
    d.v_C1 = (p_i / s.v_C1 -
              (mu.a * s.i_L.a + mu.b * s.i_L.b + mu.c * s.i_L.c)) / p.C1;
    d.i_L = {(mu.a * s.v_C1 - s.v_C2.a - v_OG) / p.L,
             (mu.b * s.v_C1 - s.v_C2.b - v_OG) / p.L,
             (mu.c * s.v_C1 - s.v_C2.c - v_OG) / p.L};
    d.v_C2 = {(s.i_L.a - s.i_g.a) / p.C2,
              (s.i_L.b - s.i_g.b) / p.C2,
              (s.i_L.c - s.i_g.c) / p.C2};
    d.i_g = {(s.v_C2.a - p.Rg * s.i_g.a - v_g.a - v_NO) / p.Lg,
             (s.v_C2.b - p.Rg * s.i_g.b - v_g.b - v_NO) / p.Lg,
             (s.v_C2.c - p.Rg * s.i_g.c - v_g.c - v_NO) / p.Lg};
    return d;
}

Complex steady_grid_current(Complex v_C2, Complex v_g, const PlantParams& p) {
    return (v_C2 - v_g) / Complex(p.Rg, p.omega * p.Lg);
}

PccPower pcc_powers(Complex v_C2, Complex i_g) {
    const Complex s = v_C2 * std::conj(i_g);
    return {s.real(), s.imag()};
}

}  // namespace gfl
