#pragma once

// Independent modified-Mathieu oracle for the Z+ = 0 radial problem,
//   v'' + (k^2 cosh^2 xi - mu) v = 0  <=>  y'' - (a - 2q cosh 2z) y = 0
// with a = mu - k^2/2, q = k^2/4. Built from classical series only:
//  - Floquet exponent nu from the monodromy of the periodic equation
//    (plain fixed-step RK4, nothing shared with the main integrators),
//  - coefficient recurrences by continued fractions,
//  - first-kind solutions  u_{+-}(z) = sum_r c_r e^{(+-nu+2r) z},
//  - decaying third-kind solution as a Hankel-function series in
//    2 sqrt(q) cosh z, matched to the (u_+, u_-) basis on the window where
//    both converge.
// Everything is test-only; the main path never touches this code.

#include <cmath>
#include <complex>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tcres/types.hpp"

namespace tcres::testsupport {

namespace mdetail {

// Lanczos log-gamma for complex argument.
inline Complex log_gamma(Complex z) {
    static const double g = 7.0;
    static const double c[9] = {0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
                                771.32342877765313,   -176.61502916214059, 12.507343278686905,
                                -0.13857109526572012, 9.9843695780195716e-6,
                                1.5056327351493116e-7};
    if (z.real() < 0.5) {
        // reflection
        return std::log(pi / std::sin(pi * z)) - log_gamma(1.0 - z);
    }
    z -= 1.0;
    Complex x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (z + double(i));
    Complex t = z + g + 0.5;
    return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// Bessel J of complex order and argument by the ascending series; fine for
// the moderate |w| the oracle works at.
inline Complex bessel_j(Complex nu, Complex w) {
    Complex half_w = 0.5 * w;
    Complex log_pref = nu * std::log(half_w);
    Complex sum = 0.0;
    Complex term;
    Complex w2 = -half_w * half_w;
    Complex fac = 1.0;
    for (int m = 0; m < 120; ++m) {
        term = fac * std::exp(log_pref - log_gamma(Complex(m + 1.0)) - log_gamma(nu + double(m) + 1.0));
        sum += term;
        fac *= w2;
        if (m > 4 && std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return sum;
}

// K_nu(x) for Re x > 0 from the cosh integral; free of the J_{+-nu}
// cancellation that ruins the ascending-series Hankel for large |Im w|.
inline Complex bessel_k_integral(Complex nu, Complex x) {
    using boost::math::quadrature::gauss_kronrod;
    double decay = x.real();
    double top = std::acosh(std::max(3.0, (45.0 + 2.0 * std::abs(nu)) / std::max(decay, 1e-3)));
    auto f = [&](double t) { return std::exp(-x * std::cosh(t)) * std::cosh(nu * t); };
    Complex total = 0.0;
    double a = 0.0;
    for (double b : {1.0, 2.0, top}) {
        if (b <= a) continue;
        total += gauss_kronrod<double, 31>::integrate(f, a, b, 12, 1e-13);
        a = b;
    }
    return total;
}

inline Complex hankel1(Complex nu, Complex w) {
    if (std::abs(w.imag()) > 3.0 && w.real() > 0.0) {
        // H1_nu(w) = (2/(i pi)) e^{-i nu pi/2} K_nu(-i w)
        Complex mi(0.0, -1.0);
        return 2.0 / (Complex(0.0, 1.0) * pi) * std::exp(mi * nu * pi / 2.0) *
               bessel_k_integral(nu, mi * w);
    }
    Complex s = std::sin(pi * nu);
    return (bessel_j(-nu, w) - std::exp(Complex(0.0, -1.0) * pi * nu) * bessel_j(nu, w)) /
           (Complex(0.0, 1.0) * s);
}

inline Complex hankel1_deriv(Complex nu, Complex w) {
    return 0.5 * (hankel1(nu - 1.0, w) - hankel1(nu + 1.0, w));
}

}  // namespace mdetail

struct MathieuOracle {
    Complex a, q, nu;
    std::vector<Complex> c;  // c[r + R], r in [-R, R], c_0 = 1
    int R = 24;
    Complex match_a, match_b;  // M3 = A u_plus + B u_minus

    MathieuOracle(Complex a_in, Complex q_in) : a(a_in), q(q_in) {
        nu = floquet_exponent();
        build_coefficients();
        match();
    }

    // --- Floquet exponent from the monodromy of y'' + (a - 2q cos 2t) y = 0
    Complex floquet_exponent() const {
        const int steps = 24000;
        const double dt = pi / steps;
        // y1(0)=1, y1'(0)=0 ; y2(0)=0, y2'(0)=1
        Complex y1 = 1.0, p1 = 0.0, y2 = 0.0, p2 = 1.0;
        auto acc = [&](double t, Complex y) { return -(a - 2.0 * q * std::cos(2.0 * t)) * y; };
        double t = 0.0;
        for (int i = 0; i < steps; ++i) {
            auto rk = [&](Complex& y, Complex& p) {
                Complex k1y = p, k1p = acc(t, y);
                Complex k2y = p + 0.5 * dt * k1p, k2p = acc(t + 0.5 * dt, y + 0.5 * dt * k1y);
                Complex k3y = p + 0.5 * dt * k2p, k3p = acc(t + 0.5 * dt, y + 0.5 * dt * k2y);
                Complex k4y = p + dt * k3p, k4p = acc(t + dt, y + dt * k3y);
                y += dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
                p += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            };
            rk(y1, p1);
            rk(y2, p2);
            t += dt;
        }
        Complex cosnp = 0.5 * (y1 + p2);
        Complex v = std::acos(cosnp) / pi;
        return v;
    }

    // minimal-solution ratios by continued fractions from both tails
    void build_coefficients() {
        c.assign(2 * R + 1, Complex(0.0));
        c[R] = 1.0;
        auto denom = [&](int r) { return (nu + 2.0 * double(r)) * (nu + 2.0 * double(r)) - a; };
        std::vector<Complex> t_up(R + 1, Complex(0.0));  // t_r = c_r / c_{r-1}
        {
            Complex t = 0.0;
            for (int r = R + 40; r >= 1; --r) {
                t = -q / (denom(r) + q * t);
                if (r <= R) t_up[r] = t;
            }
        }
        std::vector<Complex> t_dn(R + 1, Complex(0.0));  // t_{-r} = c_{-r} / c_{-r+1}
        {
            Complex t = 0.0;
            for (int r = -(R + 40); r <= -1; ++r) {
                t = -q / (denom(r) + q * t);
                if (-r <= R) t_dn[-r] = t;
            }
        }
        for (int r = 1; r <= R; ++r) c[R + r] = c[R + r - 1] * t_up[r];
        for (int r = -1; r >= -R; --r) c[R + r] = c[R + r + 1] * t_dn[-r];
    }

    // first-kind solutions and termwise derivatives
    Complex u_first(double sgn, Complex z) const {
        Complex s = 0.0;
        for (int r = -R; r <= R; ++r) s += coef(sgn, r) * std::exp((sgn * nu + 2.0 * double(r)) * z);
        return s;
    }
    Complex u_first_deriv(double sgn, Complex z) const {
        Complex s = 0.0;
        for (int r = -R; r <= R; ++r) {
            Complex ex = sgn * nu + 2.0 * double(r);
            s += coef(sgn, r) * ex * std::exp(ex * z);
        }
        return s;
    }
    Complex coef(double sgn, int r) const { return sgn > 0 ? c[R + r] : c[R - r]; }

    // third-kind (decaying) solution as a Hankel series, valid for Re z > 0
    Complex m3(Complex z) const {
        Complex w = 2.0 * std::sqrt(q) * std::cosh(z);
        Complex s = 0.0;
        double sign = 1.0;
        for (int r = 0; r <= R; ++r) {
            if (r == 0) {
                s += c[R] * mdetail::hankel1(nu, w);
            } else {
                double sg = (r % 2) ? -1.0 : 1.0;
                s += sg * (c[R + r] * mdetail::hankel1(nu + 2.0 * double(r), w) +
                           c[R - r] * mdetail::hankel1(nu - 2.0 * double(r), w));
            }
        }
        (void)sign;
        return s;
    }
    Complex m3_deriv(Complex z) const {
        Complex sq = std::sqrt(q);
        Complex w = 2.0 * sq * std::cosh(z);
        Complex dw = 2.0 * sq * std::sinh(z);
        Complex s = 0.0;
        for (int r = 0; r <= R; ++r) {
            if (r == 0) {
                s += c[R] * mdetail::hankel1_deriv(nu, w);
            } else {
                double sg = (r % 2) ? -1.0 : 1.0;
                s += sg * (c[R + r] * mdetail::hankel1_deriv(nu + 2.0 * double(r), w) +
                           c[R - r] * mdetail::hankel1_deriv(nu - 2.0 * double(r), w));
            }
        }
        return s * dw;
    }

    void match() {
        Complex z1(1.0, 0.0), z2(1.4, 0.0);
        Complex a11 = u_first(+1.0, z1), a12 = u_first(-1.0, z1);
        Complex a21 = u_first(+1.0, z2), a22 = u_first(-1.0, z2);
        Complex b1 = m3(z1), b2 = m3(z2);
        Complex det = a11 * a22 - a12 * a21;
        match_a = (b1 * a22 - b2 * a12) / det;
        match_b = (a11 * b2 - a21 * b1) / det;
    }

    // Decaying solution: the first-kind combination is accurate up to
    // moderate z (its big terms cancel beyond that), the Hankel series from
    // roughly z = 1 outward; cross over in the shared window.
    Complex value(Complex z) const {
        if (z.real() >= 1.6) return m3(z);
        return match_a * u_first(+1.0, z) + match_b * u_first(-1.0, z);
    }
    Complex deriv(Complex z) const {
        if (z.real() >= 1.6) return m3_deriv(z);
        return match_a * u_first_deriv(+1.0, z) + match_b * u_first_deriv(-1.0, z);
    }

    // Neumann data of the decaying solution: the oracle's Jost analog, a
    // nonvanishing multiple of f+ with zeros in the same places.
    Complex jost_analog() const { return deriv(Complex(0.0, 0.0)); }
};

// convenience: oracle jost-analog from the reduced radial parameters
inline Complex mathieu_oracle_fplus(Complex k, Complex mu) {
    MathieuOracle mo(mu - 0.5 * k * k, 0.25 * k * k);
    return mo.jost_analog();
}

}  // namespace tcres::testsupport
