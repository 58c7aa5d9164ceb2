#pragma once

#include <atomic>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "tcres/angular.hpp"
#include "tcres/numerics.hpp"
#include "tcres/prufer.hpp"
#include "tcres/radial.hpp"
#include "tcres/types.hpp"

namespace tcres::resonances {

// ---------------------------------------------------------------------------
// Barrier-top model: the radial potential in Liouville normal form has a
// non-degenerate maximum at the origin, quantized through the local harmonic
// oscillator. Resonances solve A_n = 0.

struct BarrierTopModel {
    Complex a_offset{};  // A = -Z+ - k^2 + mu - h^2/2
    Complex omega{};     // sqrt(mu + 5 h^2/4 - Z+/2)
    int n = 0;
};

namespace detail {

inline Complex omega_arg(const ProblemParams& p, Complex mu) {
    return mu + 1.25 * p.h * p.h - 0.5 * p.z_plus;
}

inline Complex an_value(const ProblemParams& p, int n, Complex k, Complex mu) {
    Complex om = std::sqrt(omega_arg(p, mu));
    return -p.z_plus - k * k + mu - Complex(0.0, 1.0) * (p.h * (2 * n + 1)) * om;
}

}  // namespace detail

inline BarrierTopModel barrier_top_model(const ProblemParams& p, int n, Complex k, Complex mu) {
    Complex arg = detail::omega_arg(p, mu);
    if (!(arg.real() > 0.0))
        throw NumericalFailure("omega_branch",
                               "harmonic frequency off the principal branch (Re <= 0)");
    BarrierTopModel bt;
    bt.n = n;
    bt.omega = std::sqrt(arg);
    bt.a_offset = -p.z_plus - k * k + mu - 0.5 * p.h * p.h;
    return bt;
}

inline Complex barrier_top_An(const ProblemParams& p, int n, Complex k, Complex mu) {
    barrier_top_model(p, n, k, mu);  // branch validation
    return detail::an_value(p, n, k, mu);
}

// ---------------------------------------------------------------------------
// Regime solvers. All three share the same A_n; they differ in the mu(E)
// insertion and the unknown (k for equal charges, E otherwise).

struct SolveOptions {
    bool keep_anti_resonances = false;
    double c_min = 0.5;  // high-energy validity floor on (m+1) h
    EnergyFamily family = EnergyFamily::small_re;
    int max_iter = 100;
};

namespace detail {

// The implicit equations have real coefficients apart from the -i h (2n+1) w
// term, so their solutions come in specular pairs: conjugating a root of the
// -i equation gives an exact root of the +i (mirror) equation. Resonances are
// the lower-half-plane members of the pairs.
inline void reflect_to_lower(Complex& e_root, Complex& mu_root) {
    e_root = std::conj(e_root);
    mu_root = std::conj(mu_root);
}

inline ResonanceRecord finish_record(const ProblemParams& p, int n, int m, Complex e_root,
                                     Complex mu_root, Regime regime, double residual,
                                     const SolveOptions& opts) {
    if (e_root.imag() > 0.0 && !opts.keep_anti_resonances) reflect_to_lower(e_root, mu_root);
    if (e_root.imag() > 0.0 && !opts.keep_anti_resonances)
        throw NumericalFailure("anti_resonance", "converged to the anti-resonance half-plane");
    ResonanceRecord rec;
    rec.n = n;
    rec.m = m;
    Complex k = std::sqrt(e_root);
    rec.energy.e = e_root;
    rec.energy.k = k;
    rec.energy.sheet = k.imag() >= 0.0 ? Sheet::physical : Sheet::second;
    rec.mu = mu_root;
    rec.k_classical = -mu_root.real();
    rec.regime = regime;
    rec.residual = residual;
    double mid = 8.0 * std::pow((m + 1) * p.h, 2);
    rec.family = e_root.real() > mid ? EnergyFamily::large_re : EnergyFamily::small_re;
    return rec;
}

inline double an_tolerance(Complex guess) { return 1e-12 * std::max(1.0, std::norm(guess)); }

}  // namespace detail

// Z- = 0: mu_m = (2m+1) k h inserted into A_n, solved in the k variable.
inline ResonanceRecord solve_equal_charges(const ProblemParams& p, int n, int m,
                                           const SolveOptions& opts = {}) {
    if (p.z_minus != 0.0) throw InvalidParams("equal-charges solver requires Z- = 0");
    if (n < 0 || m < 0) throw InvalidParams("indices must be non-negative");
    auto mu_of = [&](Complex k) { return (2.0 * m + 1.0) * k * p.h; };
    auto f = [&](Complex k) { return detail::an_value(p, n, k, mu_of(k)); };

    double big = (2 * m + 1) * p.h;
    Complex disc = std::sqrt(Complex(big * big - 4.0 * p.z_plus, 0.0));
    Complex k0 = 0.5 * (big + disc);
    if (k0.real() < 0.0) k0 = 0.5 * (big - disc);
    Complex e0 = k0 * k0;
    if (e0.imag() > 0.0) e0 = std::conj(e0);  // resonances sit below the axis
    e0 -= Complex(0.0, (2 * n + 1) * p.h) *
          std::sqrt(Complex(std::max(std::abs(mu_of(k0)), 1e-6), 0.0));
    Complex guess = std::sqrt(e0);

    double tol = detail::an_tolerance(guess);
    auto res = num::newton_complex(f, guess, tol, opts.max_iter);
    if (res.converged && res.root.real() < 0.0) res.root = -res.root;  // sqrt branch freedom
    if (!res.converged)
        throw NumericalFailure("no_converge", "equal-charges Newton did not converge");
    return detail::finish_record(p, n, m, res.root * res.root, mu_of(res.root),
                                 Regime::equal_charges, res.residual, opts);
}

// Z- >= 0 near the bottom of the angular spectrum: quasimode mu(E), branch
// frozen from the initial guess; crossing Z-/2 with a near-real iterate is an
// error (the two sides use different formulas).
inline ResonanceRecord solve_low_lying(const ProblemParams& p, int n, int m,
                                       const SolveOptions& opts = {}) {
    if (n < 0 || m < 0) throw InvalidParams("indices must be non-negative");
    const double half_zm = 0.5 * p.z_minus;

    auto solve_on_branch = [&](angular::WellBranch branch,
                               Complex guess) -> std::optional<ResonanceRecord> {
        auto mu_of = [&](Complex e) { return angular::quasimode_mu_value(p, e, m, branch); };
        auto f = [&](Complex e) { return detail::an_value(p, n, std::sqrt(e), mu_of(e)); };
        auto guard = [&](Complex e) {
            if (std::abs(e.imag()) < 0.1 * std::abs(e)) {
                bool crossed = branch == angular::WellBranch::double_well
                                   ? e.real() < half_zm * (1.0 - 1e-12)
                                   : (e.real() > half_zm || e.real() < 0.0);
                if (crossed && p.z_minus > 0.0)
                    throw NumericalFailure("branch_crossing",
                                           "iterate crossed E = Z-/2 on a near-real path");
            }
        };
        double tol = detail::an_tolerance(std::sqrt(guess));
        num::NewtonResult res = num::newton_complex(f, guess, tol, opts.max_iter, 1e-6, guard);
        if (!res.converged) return std::nullopt;
        return detail::finish_record(p, n, m, res.root, mu_of(res.root), Regime::low_lying,
                                     res.residual, opts);
    };

    // double-well branch first: leading-order balance E^2 + Z+ E + Z-^2/4 = 0
    // with the angular term folded in via a fixed-point refinement
    std::vector<Complex> starts;
    {
        Complex disc = std::sqrt(Complex(p.z_plus * p.z_plus - p.z_minus * p.z_minus, 0.0));
        Complex r1 = 0.5 * (-p.z_plus + disc), r2 = 0.5 * (-p.z_plus - disc);
        for (Complex r : {r1, r2}) {
            if (r.imag() > 0.0) r = std::conj(r);
            if (std::abs(r) > 1e-9) starts.push_back(r);
        }
        // the Z- = 0 style balance sqrt(E) = ((2m+1)h + sqrt(...))/2 covers the
        // regime where the angular term dominates
        double big = (2 * m + 1) * p.h;
        Complex d2 = std::sqrt(Complex(big * big - 4.0 * p.z_plus, 0.0));
        Complex se = 0.5 * (big + d2);
        Complex e0 = se * se;
        if (e0.imag() > 0.0) e0 = std::conj(e0);
        starts.push_back(e0);
    }
    for (Complex s : starts) {
        if (!(std::abs(s) > 0.0)) continue;
        Complex mu0 = angular::quasimode_mu_value(p, s, m, angular::WellBranch::double_well);
        Complex om = std::sqrt(detail::omega_arg(p, mu0));
        Complex guess = s - Complex(0.0, (2 * n + 1) * p.h) * om;
        if (guess.imag() > 0.0) guess = std::conj(guess);
        try {
            if (auto rec = solve_on_branch(angular::WellBranch::double_well, guess)) return *rec;
        } catch (const NumericalFailure& e) {
            if (std::string(e.tag()) == "anti_resonance") throw;
            // fall through to the next start
        }
    }
    // pi-well branch: sqrt(Z-/2 - E) (2m+1) h = Z+ + Z- at leading order
    if (p.z_minus > 0.0) {
        double big = (2 * m + 1) * p.h;
        double root = half_zm - std::pow((p.z_plus + p.z_minus) / big, 2);
        if (root > 0.0 && root < half_zm) {
            Complex mu0 = angular::quasimode_mu_value(p, Complex(root, 0.0), m,
                                                      angular::WellBranch::pi_well);
            Complex guess = Complex(root, 0.0) -
                            Complex(0.0, (2 * n + 1) * p.h) *
                                std::sqrt(detail::omega_arg(p, mu0));
            if (auto rec = solve_on_branch(angular::WellBranch::pi_well, guess)) return *rec;
        }
    }
    throw NumericalFailure("no_converge", "low-lying Newton did not converge on either branch");
}

// High-energy regime: mu_{2m+1}(E) from the Prufer expansion, solved in E.
inline ResonanceRecord solve_high_energy(const ProblemParams& p, int n, int m,
                                         const SolveOptions& opts = {}) {
    if (n < 0 || m < 0) throw InvalidParams("indices must be non-negative");
    double big_m = (m + 1) * p.h;
    if (!(big_m >= opts.c_min))
        throw InvalidParams("high-energy solver requires (m+1) h >= c_min");
    auto mu_of = [&](Complex e) { return prufer::high_energy_mu_value(p, e, m); };
    auto f = [&](Complex e) { return detail::an_value(p, n, std::sqrt(e), mu_of(e)); };

    // the real-part balance is a quadratic in E:
    //   E^2/(32 M^2) - E/2 + (M^2 - Z+ + Z-^2/(8 M^2)) = 0
    double m2 = big_m * big_m;
    double c = m2 - p.z_plus + p.z_minus * p.z_minus / (8.0 * m2);
    double disc = 0.25 - c / (8.0 * m2);
    Complex e0;
    if (disc >= 0.0) {
        double s = std::sqrt(disc);
        e0 = Complex(16.0 * m2 * (opts.family == EnergyFamily::large_re ? 0.5 + s : 0.5 - s), 0.0);
    } else {
        e0 = 16.0 * m2 * Complex(0.5, -std::sqrt(-disc));
    }
    Complex om0 = std::sqrt(detail::omega_arg(p, mu_of(e0)));
    Complex guess = e0 - Complex(0.0, (2 * n + 1) * p.h) * om0;
    if (guess.imag() > 0.0) guess = std::conj(guess);

    double tol = detail::an_tolerance(std::sqrt(std::abs(guess)));
    auto res = num::newton_complex(f, guess, tol, opts.max_iter);
    if (!res.converged)
        throw NumericalFailure("no_converge", "high-energy Newton did not converge");
    ResonanceRecord rec = detail::finish_record(p, n, m, res.root, mu_of(res.root),
                                                Regime::high_energy, res.residual, opts);
    if (disc < 0.0) rec.family = opts.family;  // merged pair: label by request
    return rec;
}

// Barrier-top equation with the true tracked angular eigenvalue
// A_n(h, E, Z+, mu_{2m+1}(h, E)) = 0; the closed-form solvers replace
// mu_{2m+1} by its asymptotic expansions, this one does not.
inline ResonanceRecord solve_barrier_tracked_mu(const ProblemParams& p, int n, int m,
                                                const ComplexEnergy& guess,
                                                const SolveOptions& opts = {}) {
    Complex mu_last{};
    auto f = [&](Complex e) {
        angular::TrackedLevel tl = angular::track_level(p, e, 2 * m + 1);
        mu_last = tl.mu;
        return detail::an_value(p, n, std::sqrt(e), tl.mu);
    };
    double tol = detail::an_tolerance(guess.k);
    auto res = num::newton_complex(f, guess.e, tol, opts.max_iter);
    if (!res.converged)
        throw NumericalFailure("no_converge", "tracked-mu barrier Newton did not converge");
    return detail::finish_record(p, n, m, res.root, mu_last, Regime::high_energy, res.residual,
                                 opts);
}

// ---------------------------------------------------------------------------
// Direct Jost-function zero: f+(k, mu_n(k^2)) = 0 with the angular eigenvalue
// tracked by continuation at every evaluation.

inline ResonanceRecord find_jost_zero(const ProblemParams& p, int n_angular,
                                      const ComplexEnergy& guess,
                                      const SolveOptions& opts = {}) {
    if (n_angular < 0) throw InvalidParams("angular index must be non-negative");
    Complex mu_last{};
    auto f = [&](Complex k) {
        Complex e = k * k;
        angular::TrackedLevel tl = angular::track_level(p, e, n_angular);
        mu_last = tl.mu;
        return radial::f_plus_only(radial::reduce(p, k, tl.mu));
    };
    Complex k_guess = guess.k != Complex(0.0) ? guess.k : std::sqrt(guess.e);
    double f0 = std::abs(f(k_guess));
    auto res = num::newton_complex(f, k_guess, 1e-10 * std::max(f0, 1e-30), 40, 1e-6);
    if (!res.converged && !(res.residual < 1e-7 * f0))
        throw NumericalFailure("no_converge", "Jost-zero Newton did not converge");
    Complex k_root = res.root;
    Complex e_root = k_root * k_root;
    ResonanceRecord rec;
    rec.n = 0;
    rec.m = n_angular;
    rec.energy.e = e_root;
    rec.energy.k = k_root;
    rec.energy.sheet = k_root.imag() >= 0.0 ? Sheet::physical : Sheet::second;
    rec.mu = mu_last;
    rec.k_classical = -mu_last.real();
    rec.regime = Regime::direct_jost;
    rec.residual = res.residual;
    rec.is_eigenvalue = k_root.imag() > 0.0;
    if (!rec.is_eigenvalue && e_root.imag() > 0.0 && !opts.keep_anti_resonances)
        throw NumericalFailure("anti_resonance", "Jost zero landed in the upper energy plane");
    return rec;
}

// ---------------------------------------------------------------------------
// Grid driver: independent solves over (n, m); failures are embedded per cell
// rather than dropped.

struct GridCell {
    int n = 0;
    int m = 0;
    std::optional<ResonanceRecord> record;
    std::string status = "ok";
    std::string reason;
};

struct GridRequest {
    Regime regime = Regime::high_energy;
    int n_min = 0, n_max = 0;
    int m_min = 0, m_max = 0;
    SolveOptions opts;
    int threads = 1;
};

inline GridCell solve_cell(const ProblemParams& p, Regime regime, int n, int m,
                           const SolveOptions& opts) {
    GridCell cell;
    cell.n = n;
    cell.m = m;
    try {
        switch (regime) {
            case Regime::equal_charges:
                cell.record = solve_equal_charges(p, n, m, opts);
                break;
            case Regime::low_lying:
                cell.record = solve_low_lying(p, n, m, opts);
                break;
            case Regime::high_energy:
                cell.record = solve_high_energy(p, n, m, opts);
                break;
            case Regime::direct_jost: {
                ResonanceRecord seed = solve_high_energy(p, n, m, opts);
                ResonanceRecord rec = find_jost_zero(p, 2 * m + 1, seed.energy, opts);
                rec.n = n;
                rec.m = m;
                cell.record = rec;
                break;
            }
        }
    } catch (const Error& e) {
        cell.status = "failed";
        cell.reason = std::string(e.tag()) + ": " + e.what();
    } catch (const std::exception& e) {
        cell.status = "failed";
        cell.reason = e.what();
    }
    return cell;
}

inline std::vector<GridCell> resonance_grid(const ProblemParams& p, const GridRequest& req) {
    if (req.n_max < req.n_min || req.m_max < req.m_min)
        throw InvalidParams("empty grid range");
    const int nn = req.n_max - req.n_min + 1;
    const int nm = req.m_max - req.m_min + 1;
    std::vector<GridCell> cells(static_cast<std::size_t>(nn) * nm);
    int threads = std::max(1, req.threads);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            int n = req.n_min + static_cast<int>(i) / nm;
            int m = req.m_min + static_cast<int>(i) % nm;
            cells[i] = solve_cell(p, req.regime, n, m, req.opts);
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return cells;
}

}  // namespace tcres::resonances
