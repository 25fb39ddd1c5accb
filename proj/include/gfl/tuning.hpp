#pragma once

#include <array>

#include "gfl/controller.hpp"

namespace gfl {

// Pole pair specification: 1%-band settling time and damping ratio.
struct PoleSpec {
    double ts;    // settling time [s]
    double zeta;  // damping ratio, in (0, 1)

    void validate() const;
};

using PolePair = std::array<Complex, 2>;
using PoleSet = std::array<Complex, 4>;

/// Conjugate pole pair for a settling-time/damping spec. The real-part
/// magnitude follows the 1%-band convention sigma = settle_factor / ts
/// (settle_factor 4.6 by default); damped frequency sigma*sqrt(1-z^2)/z.
PolePair poles_from_spec(const PoleSpec& s, double settle_factor = 4.6);

/// Feedback gains assigning the given poles: expands the characteristic
/// polynomial prod(s - p_i) = s^4 + k3 s^3 + k2 s^2 + k1 s + k0.
/// Throws std::invalid_argument if the set is not closed under conjugation
/// (the gains must come out real).
ControllerGains gains_from_poles(const PoleSet& p);

/// Convenience: two specs -> four poles -> gains.
ControllerGains gains_from_specs(const PoleSpec& a, const PoleSpec& b,
                                 double settle_factor = 4.6);

struct AssignmentReport {
    std::array<double, 4> scaled_residuals;  // |det(pI - A)| / max(1, |p|^4)
    double max_residual;
};

/// Evaluates det(sI - A) of the closed-loop error system at each target
/// pole, where A is the 4x4 matrix of the (e1, e2, e3, y) dynamics, and
/// reports scaled residuals.
AssignmentReport verify_assignment(const ControllerGains& g, const PoleSet& p);

/// Roots of s^4 + k3 s^3 + k2 s^2 + k1 s + k0 (Durand-Kerner iteration).
/// Used to judge integration-step adequacy for explicitly given gains.
std::array<Complex, 4> error_poly_roots(const ControllerGains& g);

/// 1 / max |Re(root)| of the closed-loop error polynomial.
double fastest_time_constant(const ControllerGains& g);

}  // namespace gfl
