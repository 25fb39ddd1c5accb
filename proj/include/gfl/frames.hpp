#pragma once

#include <complex>

namespace gfl {

using Complex = std::complex<double>;

// Instantaneous three-phase values (volts, amps, or dimensionless
// modulation indices). Plant currents satisfy a + b + c = 0 (three-wire).
struct ThreePhase {
    double a{};
    double b{};
    double c{};
};

inline ThreePhase operator+(const ThreePhase& x, const ThreePhase& y) {
    return {x.a + y.a, x.b + y.b, x.c + y.c};
}
inline ThreePhase operator-(const ThreePhase& x, const ThreePhase& y) {
    return {x.a - y.a, x.b - y.b, x.c - y.c};
}
inline ThreePhase operator*(double s, const ThreePhase& x) {
    return {s * x.a, s * x.b, s * x.c};
}

/// Power-invariant Clarke transform: maps a triple onto one complex
/// alpha-beta variable. The zero-sequence component is discarded.
Complex clarke_forward(const ThreePhase& x);

/// Inverse of clarke_forward restricted to zero-sum triples; the result
/// sums to zero exactly up to rounding.
ThreePhase clarke_inverse(const Complex& x);

/// Balanced triple of the given per-phase peak at the given electrical
/// angle. clarke_forward of the result is sqrt(3/2)*peak*e^{j*angle}.
ThreePhase balanced_set(double peak, double angle);

}  // namespace gfl
