#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "tcres/numerics.hpp"
#include "tcres/types.hpp"

namespace tcres::prufer {

using Potential = std::function<double(double)>;

// Polar representation R y = rho sin(theta), C y' = rho cos(theta) of a
// Sturm-Liouville solution; theta is continuous in x, anchored to [0, pi) at
// the left endpoint when y(a0) >= 0.
struct PruferState {
    double theta = 0.0;
    double rho = 1.0;
    double x = 0.0;
};

struct Interval {
    double a = 0.0;
    double b = 0.0;
};

// Angular potential V(eta) = Z- cos(eta) + E cos^2(eta) and its derivative,
// packaged for the shooting routines.
inline Potential angular_potential(const ProblemParams& p, double e) {
    double zm = p.z_minus;
    return [zm, e](double x) { return zm * std::cos(x) + e * std::cos(x) * std::cos(x); };
}
inline Potential angular_potential_derivative(const ProblemParams& p, double e) {
    double zm = p.z_minus;
    return [zm, e](double x) { return -zm * std::sin(x) - e * std::sin(2.0 * x); };
}

inline double max_on_interval(const Potential& v, Interval iv, int samples = 512) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= samples; ++i) {
        double x = iv.a + (iv.b - iv.a) * i / samples;
        mx = std::max(mx, v(x));
    }
    return mx;
}

// Advance the phase equation
//   theta' = (1/h) sqrt(mu - V) - V'/(4 (mu - V)) sin(2 theta)
// together with rho'/rho = -V'/(2 (mu - V)) sin^2(theta). Requires
// mu - V > 0 on the whole interval.
inline PruferState prufer_advance(const Potential& v, const Potential& dv, double h, double mu,
                                  Interval iv, double theta_anchor) {
    if (!(h > 0.0)) throw InvalidParams("h must be positive");
    if (!(theta_anchor >= 0.0 && theta_anchor < pi))
        throw InvalidParams("anchor must lie in [0, pi)");
    double vmax = max_on_interval(v, iv);
    if (!(mu > vmax))
        throw NumericalFailure("mu_below_potential", "mu must exceed max V on the interval");

    namespace odeint = boost::numeric::odeint;
    using state_t = std::array<double, 2>;  // (theta, log rho)
    auto rhs = [&](const state_t& s, state_t& dsdt, double x) {
        double d = mu - v(x);
        double vp = dv(x);
        dsdt[0] = std::sqrt(d) / h - 0.25 * vp / d * std::sin(2.0 * s[0]);
        dsdt[1] = -0.5 * vp / d * std::sin(s[0]) * std::sin(s[0]);
    };
    state_t s{theta_anchor, 0.0};
    auto stepper = odeint::make_controlled(1e-13, 1e-12,
                                           odeint::runge_kutta_fehlberg78<state_t>());
    try {
        odeint::integrate_adaptive(stepper, rhs, s, iv.a, iv.b, (iv.b - iv.a) / 256.0);
    } catch (const std::exception& ex) {
        throw NumericalFailure("step_underflow", ex.what());
    }
    return PruferState{s[0], std::exp(s[1]), iv.b};
}

inline PruferState prufer_advance(const Potential& v, double h, double mu, Interval iv,
                                  double theta_anchor) {
    auto dv = [v](double x) {
        double d = 1e-6;
        return (v(x + d) - v(x - d)) / (2.0 * d);
    };
    return prufer_advance(v, dv, h, mu, iv, theta_anchor);
}

// N pi <= theta(a1) < (N+1) pi counts the zeros in (a0, a1] once the anchor
// sits in [0, pi).
inline int zero_count(const PruferState& at_a0, const PruferState& at_a1) {
    if (!(at_a0.theta >= 0.0 && at_a0.theta < pi))
        throw InvalidParams("left state not anchored in [0, pi)");
    return static_cast<int>(std::floor(at_a1.theta / pi));
}

// ---------------------------------------------------------------------------
// Periodic phase quantization: both mu_{2m+1} and mu_{2m+2} satisfy
// theta(pi; mu) - theta(-pi; mu) = 2 (m+1) pi asymptotically; the returned
// root of that condition sits between the pair and carries the splitting
// bound as its error estimate.

inline double sqrt_mu_expansion(const ProblemParams& p, double e, int m) {
    double big_m = (m + 1) * p.h;
    double a1 = e / 4.0;
    double a3 = (p.z_minus * p.z_minus - e * e / 4.0) / 16.0;
    return big_m + a1 / big_m + a3 / (big_m * big_m * big_m);
}

struct AsymptoticCoefficients {
    double a1 = 0.0;
    double a2 = 0.0;  // vanishes for the periodic expansion
    double a3 = 0.0;
};

inline AsymptoticCoefficients asymptotic_coefficients(const ProblemParams& p, double e) {
    AsymptoticCoefficients c;
    c.a1 = e / 4.0;
    c.a2 = 0.0;
    c.a3 = (p.z_minus * p.z_minus - e * e / 4.0) / 16.0;
    return c;
}

inline double shooting_eigenvalue(const ProblemParams& p, double e, int m) {
    if (m < 0) throw InvalidParams("m must be non-negative");
    Potential v = angular_potential(p, e);
    Potential dv = angular_potential_derivative(p, e);
    Interval iv{-pi, pi};
    double vmax = max_on_interval(v, iv);

    auto phase_gap = [&](double mu) {
        PruferState end = prufer_advance(v, dv, p.h, mu, iv, 0.0);
        return end.theta - 2.0 * (m + 1) * pi;
    };

    double mu0 = sqrt_mu_expansion(p, e, m);
    mu0 *= mu0;
    double big_m = (m + 1) * p.h;
    double err = 1.0 / std::pow(big_m, 4) + 1.0 / ((m + 1.0) * (m + 1.0));
    double lo = mu0 - 4.0 * err, hi = mu0 + 4.0 * err;
    lo = std::max(lo, vmax * (1.0 + 1e-9) + 1e-12);
    if (!(hi > lo)) throw NumericalFailure("bracket", "prediction below potential maximum");

    const double mu_cap = 16.0 * mu0 + 1e3;
    double flo = phase_gap(lo), fhi = phase_gap(hi);
    while (flo * fhi > 0.0) {
        // the prediction-centred bracket missed; widen geometrically
        if (flo > 0.0) {
            double span = hi - lo;
            hi = lo;
            fhi = flo;
            lo = std::max(vmax * (1.0 + 1e-9) + 1e-12, lo - 2.0 * span);
            if (hi - lo < 1e-15 * std::abs(hi)) throw NumericalFailure("bracket", "bracket collapsed");
            flo = phase_gap(lo);
        } else {
            hi += 2.0 * (hi - lo);
            if (hi > mu_cap) throw NumericalFailure("bracket", "no bracket below mu cap");
            fhi = phase_gap(hi);
        }
    }
    return num::brent_root(phase_gap, lo, hi, 1e-13 * std::max(1.0, std::abs(mu0)));
}

// Eq.-(6.18)-style direct estimate; lives here with the rest of the
// high-energy machinery that justifies it.
inline AngularLevel high_energy_mu(const ProblemParams& p, double e, int m) {
    double big_m = (m + 1) * p.h;
    if (!(big_m >= 0.5))
        throw InvalidParams("high_energy_mu requires (m+1) h >= 0.5");
    AngularLevel lvl;
    lvl.index = 2 * m + 1;
    lvl.method = AngularMethod::high_energy;
    double q = p.z_minus * p.z_minus + e * e / 4.0;
    lvl.mu = Complex(big_m * big_m + 0.5 * e + q / (8.0 * big_m * big_m), 0.0);
    lvl.err_estimate = 1.0 / std::pow(big_m, 4) + 1.0 / ((m + 1.0) * (m + 1.0));
    lvl.even_block = true;
    lvl.parity = Parity::even_sym;
    return lvl;
}

// Complex-E variant used by the resonance solvers (same formula, E complex).
inline Complex high_energy_mu_value(const ProblemParams& p, Complex e, int m) {
    double big_m = (m + 1) * p.h;
    Complex q = p.z_minus * p.z_minus + e * e / 4.0;
    return big_m * big_m + 0.5 * e + q / (8.0 * big_m * big_m);
}

// ---------------------------------------------------------------------------
// Robust zero-count shooting for true boundary eigenvalues on [0, pi]; the
// oracle the angular matrix solver is checked against. Works below the
// potential maximum via a fixed-scale Prufer phase, which winds through a
// multiple of pi exactly at each zero of y.
enum class BoundaryCondition { neumann_neumann, dirichlet_dirichlet };

inline double boundary_phase(const ProblemParams& p, double e, double mu,
                             BoundaryCondition bc) {
    Potential v = angular_potential(p, e);
    namespace odeint = boost::numeric::odeint;
    using state_t = std::array<double, 1>;
    double vbar = 0.0;
    for (int i = 0; i < 64; ++i) vbar += v(pi * i / 63.0);
    vbar /= 64.0;
    double scale = std::sqrt(std::max(1.0, std::abs(mu - vbar))) / p.h;
    auto rhs = [&](const state_t& s, state_t& dsdt, double x) {
        double q = (mu - v(x)) / (p.h * p.h);
        double st = std::sin(s[0]), ct = std::cos(s[0]);
        dsdt[0] = scale * ct * ct + q / scale * st * st;
    };
    state_t s{bc == BoundaryCondition::neumann_neumann ? pi / 2.0 : 0.0};
    auto stepper = odeint::make_controlled(1e-13, 1e-12,
                                           odeint::runge_kutta_fehlberg78<state_t>());
    odeint::integrate_adaptive(stepper, rhs, s, 0.0, pi, pi / 256.0);
    return s[0];
}

// j-th eigenvalue (j = 0, 1, ...) of the separated problem on [0, pi].
inline double boundary_eigenvalue(const ProblemParams& p, double e, BoundaryCondition bc,
                                  int j) {
    double target = (bc == BoundaryCondition::neumann_neumann) ? pi / 2.0 + j * pi
                                                               : (j + 1) * pi;
    auto miss = [&](double mu) { return boundary_phase(p, e, mu, bc) - target; };
    Potential v = angular_potential(p, e);
    double vmin = -max_on_interval([&](double x) { return -v(x); }, {0.0, pi});
    double lo = vmin - 1.0, hi = vmin + std::max(1.0, p.h * p.h);
    while (miss(hi) < 0.0) {
        lo = hi;
        hi = vmin + 2.0 * (hi - vmin);
        if (hi > 1e12) throw NumericalFailure("bracket", "boundary eigenvalue not bracketed");
    }
    if (miss(lo) > 0.0) lo = vmin - std::abs(vmin) - 10.0;
    return num::brent_root(miss, lo, hi, 1e-12 * std::max(1.0, std::abs(hi)));
}

}  // namespace tcres::prufer
