#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "tcres/types.hpp"

namespace tcres::num {

// ---------------------------------------------------------------------------
// Quadrature. Thin wrapper so callers do not repeat the tolerance plumbing.
template <typename F>
auto integrate(F&& f, double a, double b, double rel_tol = 1e-13) {
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    return gauss_kronrod<double, 31>::integrate(std::forward<F>(f), a, b, 12, rel_tol, &err);
}

// ---------------------------------------------------------------------------
// Adaptive ODE driving (RKF78, controlled). State is a fixed-size array of
// complex numbers; integration stops exactly at the requested endpoint so
// callers can sample without dense-output interpolation.
template <std::size_t N>
using CState = std::array<Complex, N>;

template <std::size_t N, typename Rhs>
void ode_drive(Rhs&& rhs, CState<N>& state, double t0, double t1,
               double abs_tol = 1e-13, double rel_tol = 1e-12) {
    namespace odeint = boost::numeric::odeint;
    if (t0 == t1) return;
    using stepper_t = odeint::runge_kutta_fehlberg78<CState<N>>;
    auto stepper = odeint::make_controlled(abs_tol, rel_tol, stepper_t());
    double dt = (t1 - t0) / 64.0;
    odeint::integrate_adaptive(stepper, std::forward<Rhs>(rhs), state, t0, t1, dt);
}

// ---------------------------------------------------------------------------
// Damped complex Newton with central-difference derivative. The implicit
// equations we solve are analytic, so the difference quotient is accurate to
// the step order; step-halving on |F| keeps far-off guesses in check.
struct NewtonResult {
    Complex root{};
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

inline NewtonResult newton_complex(const std::function<Complex(Complex)>& f, Complex guess,
                                   double tol, int max_iter = 100, double diff_scale = 1e-6,
                                   const std::function<void(Complex)>& iterate_guard = {}) {
    NewtonResult res;
    Complex z = guess;
    Complex fz = f(z);
    for (int it = 0; it < max_iter; ++it) {
        res.iterations = it + 1;
        if (iterate_guard) iterate_guard(z);
        if (std::abs(fz) <= tol && it > 0) break;
        double step = diff_scale * std::max(1.0, std::abs(z));
        Complex df = (f(z + step) - f(z - step)) / (2.0 * step);
        if (df == Complex(0.0, 0.0) || !std::isfinite(std::abs(df))) break;
        Complex dz = -fz / df;
        double damp = 1.0;
        Complex z_new = z;
        Complex f_new = fz;
        bool improved = false;
        for (int half = 0; half < 30; ++half) {
            z_new = z + damp * dz;
            f_new = f(z_new);
            if (std::isfinite(std::abs(f_new)) && std::abs(f_new) < std::abs(fz)) {
                improved = true;
                break;
            }
            damp *= 0.5;
        }
        if (!improved) break;
        z = z_new;
        fz = f_new;
    }
    res.root = z;
    res.residual = std::abs(fz);
    res.converged = res.residual <= tol;
    return res;
}

// Bisection/secant hybrid for a bracketed scalar root.
inline double brent_root(const std::function<double(double)>& f, double a, double b,
                         double tol_x, int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw NumericalFailure("bracket", "root not bracketed");
    for (int it = 0; it < max_iter && std::abs(b - a) > tol_x; ++it) {
        double mid = 0.5 * (a + b);
        double s = (fb != fa) ? b - fb * (b - a) / (fb - fa) : mid;
        if (!(s > std::min(a, b) && s < std::max(a, b))) s = mid;
        // alternate: force a bisection every other step so the bracket shrinks
        if (it % 2 == 1) s = mid;
        double fs = f(s);
        if (fs == 0.0) return s;
        if (fa * fs < 0.0) {
            b = s; fb = fs;
        } else {
            a = s; fa = fs;
        }
    }
    return 0.5 * (a + b);
}

// ---------------------------------------------------------------------------
// Banded complex LU (partial pivoting) for pentadiagonal matrices, the shape
// of the angular blocks. With lower/upper bandwidth 2 the pivoted U widens to
// bandwidth 4, so each row stores columns i-2 .. i+4.
class PentaLU {
public:
    // band[i] = {A(i,i-2), A(i,i-1), A(i,i), A(i,i+1), A(i,i+2)}
    explicit PentaLU(const std::vector<std::array<Complex, 5>>& band) : n_(band.size()) {
        rows_.assign(n_, {});
        for (std::size_t i = 0; i < n_; ++i)
            for (int d = -2; d <= 2; ++d) {
                long col = static_cast<long>(i) + d;
                if (col >= 0 && col < static_cast<long>(n_)) at(i, col) = band[i][d + 2];
            }
        piv_.assign(n_, 0);
        mult_.assign(2 * n_, Complex(0.0));
        factor();
    }

    std::vector<Complex> solve(std::vector<Complex> b) const {
        for (std::size_t k = 0; k < n_; ++k) {
            if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
            for (std::size_t i = k + 1; i < std::min(n_, k + 3); ++i)
                b[i] -= mult_[2 * k + (i - k - 1)] * b[k];
        }
        for (std::size_t k = n_; k-- > 0;) {
            Complex s = b[k];
            for (long col = k + 1; col <= std::min<long>(n_ - 1, k + 4); ++col)
                s -= cat(k, col) * b[col];
            b[k] = s / cat(k, k);
        }
        return b;
    }

private:
    std::size_t n_;
    std::vector<std::array<Complex, 7>> rows_;  // columns i-2 .. i+4
    std::vector<std::size_t> piv_;
    std::vector<Complex> mult_;

    Complex& at(std::size_t i, long col) { return rows_[i][col - (static_cast<long>(i) - 2)]; }
    Complex cat(std::size_t i, long col) const {
        long off = col - (static_cast<long>(i) - 2);
        if (off < 0 || off > 6) return Complex(0.0);
        return rows_[i][off];
    }

    void factor() {
        for (std::size_t k = 0; k < n_; ++k) {
            std::size_t last = std::min(n_ - 1, k + 2);
            std::size_t p = k;
            double best = std::abs(cat(k, k));
            for (std::size_t i = k + 1; i <= last; ++i)
                if (std::abs(cat(i, k)) > best) { best = std::abs(cat(i, k)); p = i; }
            piv_[k] = p;
            if (p != k) {
                // active columns k .. k+4 only; entries beyond are still zero
                for (long col = k; col <= std::min<long>(n_ - 1, k + 4); ++col) {
                    Complex tmp = cat(k, col);
                    at(k, col) = cat(p, col);
                    at(p, col) = tmp;
                }
            }
            Complex pivot = cat(k, k);
            if (pivot == Complex(0.0)) {
                pivot = Complex(1e-290, 0.0);
                at(k, k) = pivot;
            }
            for (std::size_t i = k + 1; i <= last; ++i) {
                Complex m = cat(i, k) / pivot;
                mult_[2 * k + (i - k - 1)] = m;
                if (m != Complex(0.0)) {
                    at(i, k) = Complex(0.0);
                    for (long col = k + 1; col <= std::min<long>(n_ - 1, k + 4); ++col)
                        at(i, col) = cat(i, col) - m * cat(k, col);
                }
            }
        }
    }
};

// Sturm count for a real symmetric pentadiagonal matrix: number of
// eigenvalues strictly below `shift`, from the inertia of the LDL^T
// factorization. Tiny pivots are nudged, the usual bisection safeguard.
//
// band[i] = {A(i,i), A(i,i-1), A(i,i-2)}
inline int count_below(const std::vector<std::array<double, 3>>& band, double shift) {
    const std::size_t n = band.size();
    std::vector<double> D(n, 0.0), l1(n, 0.0), l2(n, 0.0);
    double scale = 1.0;
    for (const auto& r : band)
        scale = std::max(scale, std::abs(r[0]) + std::abs(r[1]) + std::abs(r[2]));
    const double tiny = scale * 1e-280;
    int count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= 2) l2[i] = band[i][2] / D[i - 2];
        if (i >= 1) {
            double e = band[i][1];
            if (i >= 2) e -= l2[i] * D[i - 2] * l1[i - 1];
            l1[i] = e / D[i - 1];
        }
        double d = band[i][0] - shift;
        if (i >= 1) d -= l1[i] * l1[i] * D[i - 1];
        if (i >= 2) d -= l2[i] * l2[i] * D[i - 2];
        if (d == 0.0) d = -tiny;
        D[i] = d;
        if (d < 0.0) ++count;
    }
    return count;
}

}  // namespace tcres::num
