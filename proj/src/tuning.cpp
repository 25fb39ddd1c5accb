#include "gfl/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gfl {

void PoleSpec::validate() const {
    if (!(ts > 0.0)) {
        throw std::invalid_argument("settling time must be > 0");
    }
    if (!(zeta > 0.0) || !(zeta < 1.0)) {
        throw std::invalid_argument("damping ratio must lie in (0, 1)");
    }
}

PolePair poles_from_spec(const PoleSpec& s, double settle_factor) {
    s.validate();
    const double sigma = settle_factor / s.ts;
    const double wd = sigma * std::sqrt(1.0 - s.zeta * s.zeta) / s.zeta;
    return {Complex(-sigma, wd), Complex(-sigma, -wd)};
}

ControllerGains gains_from_poles(const PoleSet& p) {
    // expand prod(s - p_i); a[k] holds the coefficient of s^k
    std::array<Complex, 5> a{};
    a[0] = 1.0;
    int deg = 0;
    for (const Complex& root : p) {
        for (int k = deg + 1; k >= 1; --k) {
            a[k] = a[k - 1] - root * a[k];
        }
        a[0] = -root * a[0];
        ++deg;
    }
    const double scale = std::max({1.0, std::abs(a[0]), std::abs(a[1]),
                                   std::abs(a[2]), std::abs(a[3])});
    for (int k = 0; k <= 3; ++k) {
        if (std::abs(a[k].imag()) > 1e-9 * scale) {
            throw std::invalid_argument(
                "pole set is not closed under conjugation; gains would be "
                "complex");
        }
    }
    ControllerGains g{a[1].real(), a[2].real(), a[3].real(), a[0].real()};
    g.validate();
    return g;
}

ControllerGains gains_from_specs(const PoleSpec& a, const PoleSpec& b,
                                 double settle_factor) {
    const PolePair pa = poles_from_spec(a, settle_factor);
    const PolePair pb = poles_from_spec(b, settle_factor);
    return gains_from_poles({pa[0], pa[1], pb[0], pb[1]});
}

namespace {

// determinant of a 4x4 complex matrix by Gaussian elimination
double det_magnitude(Complex m[4][4]) {
    Complex det = 1.0;
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        }
        if (piv != col) {
            for (int k = 0; k < 4; ++k) std::swap(m[col][k], m[piv][k]);
            det = -det;
        }
        if (m[col][col] == Complex(0.0)) return 0.0;
        det *= m[col][col];
        for (int r = col + 1; r < 4; ++r) {
            const Complex f = m[r][col] / m[col][col];
            for (int k = col; k < 4; ++k) m[r][k] -= f * m[col][k];
        }
    }
    return std::abs(det);
}

}  // namespace

AssignmentReport verify_assignment(const ControllerGains& g,
                                   const PoleSet& p) {
    AssignmentReport rep{};
    rep.max_residual = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        const Complex s = p[i];
        // rows: e1' = e2, e2' = e3, e3' = -k1 e1 - k2 e2 - k3 e3 - k0 y,
        //       y'  = e1
        Complex m[4][4] = {
            {s, -1.0, 0.0, 0.0},
            {0.0, s, -1.0, 0.0},
            {g.k1, g.k2, s + g.k3, g.k0},
            {-1.0, 0.0, 0.0, s},
        };
        const double mag = det_magnitude(m);
        const double scale = std::max(1.0, std::pow(std::abs(s), 4.0));
        rep.scaled_residuals[i] = mag / scale;
        rep.max_residual = std::max(rep.max_residual, rep.scaled_residuals[i]);
    }
    return rep;
}

std::array<Complex, 4> error_poly_roots(const ControllerGains& g) {
    const auto poly = [&](Complex s) {
        return (((s + g.k3) * s + g.k2) * s + g.k1) * s + g.k0;
    };
    // Durand-Kerner from offsets on a circle of the geometric-mean radius
    const double r0 = std::pow(std::max(g.k0, 1e-300), 0.25);
    const Complex seed(0.4, 0.9);
    std::array<Complex, 4> z;
    Complex pw = 1.0;
    for (auto& zi : z) {
        pw *= seed;
        zi = r0 * pw;
    }
    for (int it = 0; it < 500; ++it) {
        double move = 0.0;
        for (int i = 0; i < 4; ++i) {
            Complex denom = 1.0;
            for (int j = 0; j < 4; ++j) {
                if (j != i) denom *= z[i] - z[j];
            }
            const Complex delta = poly(z[i]) / denom;
            z[i] -= delta;
            move = std::max(move, std::abs(delta) / (std::abs(z[i]) + 1.0));
        }
        if (move < 1e-13) break;
    }
    return z;
}

double fastest_time_constant(const ControllerGains& g) {
    const auto roots = error_poly_roots(g);
    double re_max = 0.0;
    for (const Complex& r : roots) {
        re_max = std::max(re_max, std::abs(r.real()));
    }
    return re_max > 0.0 ? 1.0 / re_max : std::numeric_limits<double>::infinity();
}

}  // namespace gfl
