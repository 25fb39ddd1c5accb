#include "gfl/frames.hpp"

#include <cmath>
#include <numbers>

namespace gfl {

namespace {
const double kSqrt23 = std::sqrt(2.0 / 3.0);
const double kSqrt3 = std::sqrt(3.0);
}  // namespace

Complex clarke_forward(const ThreePhase& x) {
    return {kSqrt23 * (x.a - 0.5 * (x.b + x.c)),
            kSqrt23 * (kSqrt3 * 0.5) * (x.b - x.c)};
}

ThreePhase clarke_inverse(const Complex& x) {
    const double al = x.real();
    const double be = x.imag();
    return {kSqrt23 * al,
            kSqrt23 * (-0.5 * al + kSqrt3 * 0.5 * be),
            kSqrt23 * (-0.5 * al - kSqrt3 * 0.5 * be)};
}

ThreePhase balanced_set(double peak, double angle) {
    constexpr double third = 2.0 * std::numbers::pi / 3.0;
    return {peak * std::cos(angle),
            peak * std::cos(angle - third),
            peak * std::cos(angle + third)};
}

}  // namespace gfl
