#pragma once

// Argument-principle oracle used by the tests: counts and locates zeros of an
// analytic function inside a rectangle using only function values, entirely
// independent of the solvers it checks.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "tcres/numerics.hpp"
#include "tcres/types.hpp"

namespace tcres::testsupport {

using AnalyticFn = std::function<Complex(Complex)>;

namespace detail {

// phase increment along one edge, subdividing until each step turns < 0.8 rad
inline double edge_phase(const AnalyticFn& f, Complex a, Complex b, int depth = 0) {
    Complex fa = f(a), fb = f(b);
    double d = std::arg(fb / fa);
    if (std::abs(d) < 0.8 || depth > 24) return d;
    Complex mid = 0.5 * (a + b);
    return edge_phase(f, a, mid, depth + 1) + edge_phase(f, mid, b, depth + 1);
}

}  // namespace detail

inline int winding_number(const AnalyticFn& f, Complex lo, Complex hi) {
    Complex c1 = lo, c2 = Complex(hi.real(), lo.imag());
    Complex c3 = hi, c4 = Complex(lo.real(), hi.imag());
    double total = detail::edge_phase(f, c1, c2) + detail::edge_phase(f, c2, c3) +
                   detail::edge_phase(f, c3, c4) + detail::edge_phase(f, c4, c1);
    return static_cast<int>(std::lround(total / (2.0 * pi)));
}

inline void locate_zeros_rec(const AnalyticFn& f, Complex lo, Complex hi,
                             std::vector<Complex>& out, int depth) {
    int w = winding_number(f, lo, hi);
    if (w == 0) return;
    Complex span = hi - lo;
    if (std::max(span.real(), span.imag()) < 2e-3 || depth > 24) {
        Complex center = 0.5 * (lo + hi);
        auto res = num::newton_complex(f, center, 0.0, 60, 1e-7);
        // accept the polished point if it stayed in (an enlargement of) the box
        Complex z = res.root;
        if (z.real() > lo.real() - span.real() && z.real() < hi.real() + span.real() &&
            z.imag() > lo.imag() - span.imag() && z.imag() < hi.imag() + span.imag()) {
            for (const auto& seen : out)
                if (std::abs(seen - z) < 1e-6 * (1.0 + std::abs(z))) return;
            out.push_back(z);
        }
        return;
    }
    Complex mid = 0.5 * (lo + hi);
    locate_zeros_rec(f, lo, mid, out, depth + 1);
    locate_zeros_rec(f, Complex(mid.real(), lo.imag()), Complex(hi.real(), mid.imag()), out,
                     depth + 1);
    locate_zeros_rec(f, Complex(lo.real(), mid.imag()), Complex(mid.real(), hi.imag()), out,
                     depth + 1);
    locate_zeros_rec(f, mid, hi, out, depth + 1);
}

inline std::vector<Complex> locate_zeros(const AnalyticFn& f, Complex lo, Complex hi) {
    std::vector<Complex> out;
    locate_zeros_rec(f, lo, hi, out, 0);
    return out;
}

}  // namespace tcres::testsupport
