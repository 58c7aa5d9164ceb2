#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tcres/numerics.hpp"
#include "tcres/types.hpp"

namespace tcres::angular {

// The angular operator -h^2 d^2/deta^2 + Z- cos(eta) + E cos^2(eta) on the
// periodic interval [-pi, pi], discretized in the real trigonometric basis.
// Reflection eta -> -eta is exact for every Z-, splitting the problem into a
// cosine (even) and a sine (odd) block, each pentadiagonal. For Z- = 0 the
// blocks further decouple by Fourier parity, which is what makes the four
// subspace labels exact there.

enum class Block { even, odd };

inline std::size_t pow2ceil(std::size_t v) {
    std::size_t p = 1;
    while (p < v) p <<= 1;
    return p;
}

// Pentadiagonal rows {A(i,i-2), A(i,i-1), A(i,i), A(i,i+1), A(i,i+2)}.
template <typename Scalar>
std::vector<std::array<Scalar, 5>> hill_band(const ProblemParams& p, Scalar e, int n,
                                             Block block) {
    if (n < 8) throw InvalidParams("truncation must be at least 8");
    const double h2 = p.h * p.h;
    const double zm = p.z_minus;
    std::vector<std::array<Scalar, 5>> band(n, {Scalar(0), Scalar(0), Scalar(0), Scalar(0), Scalar(0)});
    const Scalar half_e = e / 2.0;
    const Scalar quarter_e = e / 4.0;
    if (block == Block::even) {
        // basis 1/sqrt(2 pi), cos(j eta)/sqrt(pi), j = 1..n-1
        for (int j = 0; j < n; ++j) band[j][2] = Scalar(h2 * j * j) + half_e;
        if (n > 1) band[1][2] += quarter_e;
        for (int j = 0; j + 1 < n; ++j) {
            Scalar c = Scalar(zm / 2.0) * (j == 0 ? std::sqrt(2.0) : 1.0);
            band[j][3] = c;
            band[j + 1][1] = c;
        }
        for (int j = 0; j + 2 < n; ++j) {
            Scalar c = quarter_e * (j == 0 ? std::sqrt(2.0) : 1.0);
            band[j][4] = c;
            band[j + 2][0] = c;
        }
    } else {
        // basis sin(j eta)/sqrt(pi), j = 1..n
        for (int j = 1; j <= n; ++j) band[j - 1][2] = Scalar(h2 * j * j) + half_e;
        band[0][2] -= quarter_e;
        for (int j = 0; j + 1 < n; ++j) {
            band[j][3] = Scalar(zm / 2.0);
            band[j + 1][1] = Scalar(zm / 2.0);
        }
        for (int j = 0; j + 2 < n; ++j) {
            band[j][4] = quarter_e;
            band[j + 2][0] = quarter_e;
        }
    }
    return band;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> band_to_dense(
    const std::vector<std::array<Scalar, 5>>& band) {
    const int n = static_cast<int>(band.size());
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(n, n);
    m.setZero();
    for (int i = 0; i < n; ++i)
        for (int d = -2; d <= 2; ++d) {
            int j = i + d;
            if (j >= 0 && j < n) m(i, j) = band[i][d + 2];
        }
    return m;
}

// Spec-facing matrix builder: the invariant parity block.
inline Eigen::MatrixXcd hill_matrix(const ProblemParams& p, Complex e, int truncation,
                                    Block block) {
    return band_to_dense(hill_band<Complex>(p, e, truncation, block));
}

// Full periodic problem in the exponential basis e^{ij eta}, j = -n..n; used
// to check that the parity blocks exhaust the spectrum.
inline Eigen::MatrixXcd hill_matrix_full(const ProblemParams& p, Complex e, int n) {
    const int dim = 2 * n + 1;
    Eigen::MatrixXcd m(dim, dim);
    m.setZero();
    const double h2 = p.h * p.h;
    for (int r = 0; r < dim; ++r) {
        int j = r - n;
        m(r, r) = Complex(h2 * j * j) + e / 2.0;
        if (r + 1 < dim) m(r, r + 1) = m(r + 1, r) = Complex(p.z_minus / 2.0);
        if (r + 2 < dim) m(r, r + 2) = m(r + 2, r) = e / 4.0;
    }
    return m;
}

// ---------------------------------------------------------------------------

inline Parity label_of(Block block, int dominant_j) {
    bool j_even = (dominant_j % 2) == 0;
    if (block == Block::even) return j_even ? Parity::even_sym : Parity::even_antisym;
    return j_even ? Parity::odd_antisym : Parity::odd_sym;
}

namespace detail {

struct RealBlockEig {
    std::vector<double> values;
    Eigen::MatrixXd vectors;
};

inline RealBlockEig solve_real_block(const ProblemParams& p, double e, int n, Block block) {
    auto band = hill_band<double>(p, e, n, block);
    Eigen::MatrixXd m = band_to_dense(band);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success)
        throw NumericalFailure("eigensolver", "dense symmetric eigensolver failed");
    RealBlockEig out;
    out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
    out.vectors = es.eigenvectors();
    return out;
}

struct MergedLevel {
    double mu;
    Block block;
    int pos;  // index within the block
};

inline std::vector<MergedLevel> merge_real(const RealBlockEig& ev, const RealBlockEig& od,
                                           std::size_t count) {
    std::vector<MergedLevel> merged;
    std::size_t ie = 0, io = 0;
    while (merged.size() < count && (ie < ev.values.size() || io < od.values.size())) {
        bool take_even;
        if (ie >= ev.values.size()) take_even = false;
        else if (io >= od.values.size()) take_even = true;
        else take_even = ev.values[ie] <= od.values[io];
        if (take_even) {
            merged.push_back({ev.values[ie], Block::even, static_cast<int>(ie)});
            ++ie;
        } else {
            merged.push_back({od.values[io], Block::odd, static_cast<int>(io)});
            ++io;
        }
    }
    return merged;
}

inline int dominant_index(const Eigen::VectorXd& v) {
    int best = 0;
    for (int i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
    return best;
}

}  // namespace detail

// First `count` levels at real E, truncation raised until the last requested
// level is converged to 1e-10 relative.
inline std::vector<AngularLevel> eigenvalues_real(const ProblemParams& p, double e, int count) {
    if (count < 1) throw InvalidParams("count must be positive");
    std::size_t n = std::max<std::size_t>(64, pow2ceil(static_cast<std::size_t>(0.75 * count + 24)));
    std::optional<double> last_prev;
    for (; n <= 4096; n *= 2) {
        auto ev = detail::solve_real_block(p, e, static_cast<int>(n), Block::even);
        auto od = detail::solve_real_block(p, e, static_cast<int>(n), Block::odd);
        auto merged = detail::merge_real(ev, od, count);
        if (merged.size() < static_cast<std::size_t>(count))
            throw NumericalFailure("truncation", "fewer levels than requested");
        double last = merged.back().mu;
        double scale = std::max(1.0, std::abs(last));
        if (last_prev && std::abs(last - *last_prev) < 1e-10 * scale) {
            std::vector<AngularLevel> out;
            out.reserve(count);
            for (int i = 0; i < count; ++i) {
                const auto& ml = merged[i];
                const auto& blk = ml.block == Block::even ? ev : od;
                AngularLevel lvl;
                lvl.index = i;
                lvl.mu = Complex(ml.mu, 0.0);
                lvl.method = AngularMethod::matrix;
                lvl.even_block = ml.block == Block::even;
                Eigen::VectorXd vec = blk.vectors.col(ml.pos);
                // sign: first coefficient of appreciable size positive
                int first = 0;
                while (first < vec.size() && std::abs(vec[first]) < 1e-12) ++first;
                if (first < vec.size() && vec[first] < 0.0) vec = -vec;
                int dom = detail::dominant_index(vec);
                int dom_j = ml.block == Block::even ? dom : dom + 1;
                lvl.parity = label_of(ml.block, dom_j);
                lvl.coeffs.assign(vec.data(), vec.data() + vec.size());
                lvl.err_estimate = last_prev ? std::abs(last - *last_prev) : 0.0;
                lvl.continuation_guaranteed = e > 2.0 * p.z_minus;
                out.push_back(std::move(lvl));
            }
            // ties at Z- = 0 are ordered by parity enum; the merge above keeps
            // block order stable, so just stable-sort with the tie-break.
            std::stable_sort(out.begin(), out.end(), [](const AngularLevel& a, const AngularLevel& b) {
                if (a.mu.real() != b.mu.real()) return a.mu.real() < b.mu.real();
                return static_cast<int>(a.parity) < static_cast<int>(b.parity);
            });
            for (int i = 0; i < count; ++i) out[i].index = i;
            // Simplicity holds within each parity block; across blocks the
            // double-well pairs sit exponentially close in h and can coincide
            // to machine precision, so those are flagged, not rejected.
            for (int i = 0; i + 1 < count; ++i) {
                double gap = out[i + 1].mu.real() - out[i].mu.real();
                double scale_i = std::max(1.0, std::abs(out[i].mu.real()));
                if (gap <= 1e-12 * scale_i) {
                    if (out[i].even_block == out[i + 1].even_block)
                        throw NumericalFailure("degenerate",
                                               "within-block spectrum unexpectedly degenerate");
                    out[i].degenerate_pair = out[i + 1].degenerate_pair = true;
                }
            }
            return out;
        }
        last_prev = last;
    }
    throw NumericalFailure("truncation", "truncation ladder exceeded 4096 modes");
}

// ---------------------------------------------------------------------------
// Single-level continuation to complex E. The pentadiagonal structure makes
// shift-invert iteration O(n); levels n-1, n, n+1 are tracked together so a
// tracking collision is detected rather than silently mislabeled.

namespace detail {

inline std::vector<std::array<double, 3>> sym_band(const ProblemParams& p, double e, int n,
                                                   Block block) {
    auto full = hill_band<double>(p, e, n, block);
    std::vector<std::array<double, 3>> b(n);
    for (int i = 0; i < n; ++i) b[i] = {full[i][2], full[i][1], full[i][0]};
    return b;
}

// Multiply the pentadiagonal matrix by a vector.
template <typename Scalar>
std::vector<Scalar> band_mul(const std::vector<std::array<Scalar, 5>>& band,
                             const std::vector<Scalar>& x) {
    const int n = static_cast<int>(band.size());
    std::vector<Scalar> y(n, Scalar(0));
    for (int i = 0; i < n; ++i)
        for (int d = -2; d <= 2; ++d) {
            int j = i + d;
            if (j >= 0 && j < n) y[i] += band[i][d + 2] * x[j];
        }
    return y;
}

struct TrackedVec {
    Complex mu;
    std::vector<Complex> vec;  // bilinear-normalized
};

// One shift-invert refinement pass: returns eigenpair近 the shift.
inline TrackedVec shift_invert(const std::vector<std::array<Complex, 5>>& band, Complex shift,
                               std::vector<Complex> start, int max_iter = 12) {
    const int n = static_cast<int>(band.size());
    auto shifted = band;
    for (int i = 0; i < n; ++i) shifted[i][2] -= shift;
    num::PentaLU lu(shifted);
    std::vector<Complex> x = std::move(start);
    if (x.empty()) x.assign(n, Complex(1.0, 0.0));
    double scale = 0.0;
    for (const auto& row : band)
        scale = std::max(scale, std::abs(row[2]) + std::abs(row[1]) + std::abs(row[3]));
    Complex mu = shift;
    for (int it = 0; it < max_iter; ++it) {
        x = lu.solve(x);
        double nrm = 0.0;
        for (const auto& c : x) nrm = std::max(nrm, std::abs(c));
        for (auto& c : x) c /= nrm;
        // bilinear Rayleigh quotient
        auto tx = band_mul(band, x);
        Complex num_ = 0.0, den = 0.0;
        for (int i = 0; i < n; ++i) {
            num_ += x[i] * tx[i];
            den += x[i] * x[i];
        }
        if (std::abs(den) < 1e-12)
            throw NumericalFailure("self_orthogonal", "eigenvector nearly self-orthogonal");
        mu = num_ / den;
        double resid = 0.0;
        for (int i = 0; i < n; ++i) resid = std::max(resid, std::abs(tx[i] - mu * x[i]));
        if (resid <= 1e-12 * scale) break;
    }
    // final residual check
    auto tx = band_mul(band, x);
    double resid = 0.0;
    for (int i = 0; i < n; ++i) resid = std::max(resid, std::abs(tx[i] - mu * x[i]));
    if (resid > 1e-9 * scale)
        throw NumericalFailure("no_converge", "shift-invert iteration did not converge");
    Complex bil = 0.0;
    for (const auto& c : x) bil += c * c;
    Complex nrm = std::sqrt(bil);
    if (std::abs(nrm) < 1e-8)
        throw NumericalFailure("self_orthogonal", "eigenvector nearly self-orthogonal");
    for (auto& c : x) c /= nrm;
    return {mu, std::move(x)};
}

}  // namespace detail

struct TrackedLevel {
    Complex mu;
    Block block = Block::even;
    int block_index = 0;          // index within the block at the real anchor
    std::vector<Complex> coeffs;  // bilinear-normalized Fourier coefficients
    bool continuation_guaranteed = true;
    int steps_taken = 1;
};

// Locate level `n` (merged ordering) at real energy, then continue along the
// straight path to complex E with adaptive step halving.
inline TrackedLevel track_level(const ProblemParams& p, Complex e, int n,
                                int truncation_hint = 0) {
    const double e0 = e.real();
    int nsize = truncation_hint;
    if (nsize <= 0) {
        double mu_guess = std::max(1.0, std::abs(e0) + p.z_minus + 1.0);
        double jmax = std::sqrt((mu_guess + std::abs(e0) + p.z_minus) / (p.h * p.h));
        nsize = static_cast<int>(pow2ceil(static_cast<std::size_t>(
            std::max(64.0, 1.4 * (n / 2.0 + 8.0) + 0.9 * jmax))));
    }
    for (; nsize <= 16384; nsize *= 2) {
        auto be = detail::sym_band(p, e0, nsize, Block::even);
        auto bo = detail::sym_band(p, e0, nsize, Block::odd);
        auto total_below = [&](double t) {
            return num::count_below(be, t) + num::count_below(bo, t);
        };
        // bisect for the n-th merged eigenvalue
        double lo = -std::abs(e0) - p.z_minus - 1.0, hi = std::max(1.0, p.h * p.h) * nsize * nsize * 4.0;
        while (total_below(lo) > n) lo = lo * 2.0 - 10.0;
        while (total_below(hi) <= n) {
            hi *= 2.0;
            if (hi > 1e14) throw NumericalFailure("bracket", "eigenvalue bisection bound blew up");
        }
        for (int it = 0; it < 200 && hi - lo > 1e-9 * std::max(1.0, std::abs(hi)); ++it) {
            double mid = 0.5 * (lo + hi);
            if (total_below(mid) <= n) lo = mid;
            else hi = mid;
        }
        double target = 0.5 * (lo + hi);
        Block blk = (num::count_below(be, hi) - num::count_below(be, lo) >= 1) ? Block::even
                                                                               : Block::odd;
        int bidx = num::count_below(blk == Block::even ? be : bo, lo);

        auto cband = hill_band<Complex>(p, Complex(e0, 0.0), nsize, blk);
        detail::TrackedVec tv;
        try {
            tv = detail::shift_invert(cband, Complex(target, 0.0), {});
        } catch (const NumericalFailure&) {
            continue;  // enlarge truncation
        }
        // truncation check: Fourier tail must be negligible
        double tail = 0.0;
        for (int i = nsize - nsize / 8; i < nsize; ++i) tail = std::max(tail, std::abs(tv.vec[i]));
        if (tail > 1e-11) continue;

        // continuation along the straight segment e0 -> e
        Complex de = e - Complex(e0, 0.0);
        TrackedLevel out;
        out.block = blk;
        out.block_index = bidx;
        out.continuation_guaranteed = e.real() > 2.0 * p.z_minus;
        if (std::abs(de) == 0.0) {
            out.mu = tv.mu;
            out.coeffs = tv.vec;
            return out;
        }
        double t = 0.0;
        double dt = 1.0;
        Complex mu_prev = tv.mu;
        std::vector<Complex> vec_prev = tv.vec;
        Complex dmu_de;  // Hellmann-Feynman slope, bilinear form
        auto slope = [&](const std::vector<Complex>& v, Complex et) {
            auto dband = hill_band<Complex>(p, Complex(1.0, 0.0), nsize, blk);
            // d/dE of the band: rebuild with E replaced by 1 and Z-, h^2 j^2 dropped
            for (int i = 0; i < nsize; ++i) {
                dband[i][1] = dband[i][3] = Complex(0.0);
                dband[i][2] -= Complex(p.h * p.h * ((blk == Block::even) ? i : i + 1) *
                                       ((blk == Block::even) ? i : i + 1));
            }
            (void)et;
            auto tx = detail::band_mul(dband, v);
            Complex num_ = 0.0, den = 0.0;
            for (int i = 0; i < nsize; ++i) {
                num_ += v[i] * tx[i];
                den += v[i] * v[i];
            }
            return num_ / den;
        };
        dmu_de = slope(vec_prev, Complex(e0, 0.0));
        int steps = 0;
        while (t < 1.0) {
            double step = std::min(dt, 1.0 - t);
            Complex et = Complex(e0, 0.0) + (t + step) * de;
            Complex predicted = mu_prev + dmu_de * (step * de);
            auto band_t = hill_band<Complex>(p, et, nsize, blk);
            bool ok = true;
            detail::TrackedVec next;
            try {
                next = detail::shift_invert(band_t, predicted, vec_prev);
            } catch (const NumericalFailure&) {
                ok = false;
            }
            if (ok) {
                // collision guard: the corrector must land close to the
                // predictor relative to the step-induced motion, otherwise a
                // neighbouring level has been picked up
                double motion = std::abs(next.mu - mu_prev) + 1e-14;
                if (std::abs(next.mu - predicted) > 10.0 * motion + 0.02 * std::max(1.0, std::abs(next.mu)))
                    ok = false;
            }
            if (!ok) {
                dt *= 0.5;
                if (dt < 1e-4)
                    throw NumericalFailure("tracking_ambiguity",
                                           "level tracking lost between neighbouring indices");
                continue;
            }
            dmu_de = (std::abs(step * de) > 0.0) ? (next.mu - mu_prev) / (step * de) : dmu_de;
            mu_prev = next.mu;
            vec_prev = std::move(next.vec);
            t += step;
            ++steps;
        }
        out.mu = mu_prev;
        out.coeffs = std::move(vec_prev);
        out.steps_taken = std::max(1, steps);
        return out;
    }
    throw NumericalFailure("truncation", "truncation ladder exceeded cap in track_level");
}

// ---------------------------------------------------------------------------
// Public spec operations.

inline std::vector<AngularLevel> angular_eigenvalues(const ProblemParams& p, Complex e,
                                                     int count) {
    if (count < 1) throw InvalidParams("count must be positive");
    if (e.imag() == 0.0) return eigenvalues_real(p, e.real(), count);
    std::vector<AngularLevel> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        TrackedLevel tl = track_level(p, e, i);
        AngularLevel lvl;
        lvl.index = i;
        lvl.mu = tl.mu;
        lvl.method = AngularMethod::matrix;
        lvl.even_block = tl.block == Block::even;
        lvl.continuation_guaranteed = tl.continuation_guaranteed;
        int dom = 0;
        for (std::size_t j = 1; j < tl.coeffs.size(); ++j)
            if (std::abs(tl.coeffs[j]) > std::abs(tl.coeffs[dom])) dom = static_cast<int>(j);
        lvl.parity = label_of(tl.block, tl.block == Block::even ? dom : dom + 1);
        lvl.err_estimate = 0.0;
        out.push_back(std::move(lvl));
    }
    return out;
}

// Evaluate the normalized eigenfunction from its trigonometric coefficients.
inline double angular_eigenfunction(const AngularLevel& lvl, double eta) {
    if (lvl.method != AngularMethod::matrix || lvl.coeffs.empty())
        throw InvalidParams("eigenfunction requires matrix-method coefficients");
    double s = 0.0;
    if (lvl.even_block) {
        s += lvl.coeffs[0] / std::sqrt(2.0 * pi);
        for (std::size_t j = 1; j < lvl.coeffs.size(); ++j)
            s += lvl.coeffs[j] * std::cos(j * eta) / std::sqrt(pi);
    } else {
        for (std::size_t j = 0; j < lvl.coeffs.size(); ++j)
            s += lvl.coeffs[j] * std::sin((j + 1) * eta) / std::sqrt(pi);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Quasimode approximations near the bottom of the angular potential.

enum class WellBranch { double_well, pi_well };

struct QuasimodeModel {
    double eta_star = 0.0;
    double a_offset = 0.0;
    double b_freq = 0.0;
    WellBranch branch = WellBranch::double_well;
};

inline QuasimodeModel quasimode_model(const ProblemParams& p, double e) {
    if (!(e > 0.0)) throw InvalidParams("quasimode requires E > 0");
    if (e == 0.5 * p.z_minus) throw InvalidParams("branch boundary E = Z-/2");
    QuasimodeModel qm;
    if (e > 0.5 * p.z_minus) {
        qm.branch = WellBranch::double_well;
        qm.eta_star = std::acos(-p.z_minus / (2.0 * e));
        qm.a_offset = -p.z_minus * p.z_minus / (4.0 * e);
        qm.b_freq = std::sqrt(e * (1.0 - std::pow(p.z_minus / (2.0 * e), 2)));
    } else {
        qm.branch = WellBranch::pi_well;
        qm.eta_star = pi;
        qm.a_offset = e - p.z_minus;
        qm.b_freq = std::sqrt(0.5 * p.z_minus - e);
    }
    return qm;
}

inline AngularLevel quasimode_mu(const ProblemParams& p, double e, int n) {
    QuasimodeModel qm = quasimode_model(p, e);
    AngularLevel lvl;
    lvl.index = n;
    lvl.method = AngularMethod::quasimode;
    lvl.mu = Complex(qm.a_offset + qm.b_freq * (2 * n + 1) * p.h, 0.0);
    lvl.err_estimate = std::pow(p.h, 1.5);
    lvl.degenerate_pair = qm.branch == WellBranch::double_well;
    return lvl;
}

// Complex-E evaluation of the same formulas, branch chosen by the caller.
inline Complex quasimode_mu_value(const ProblemParams& p, Complex e, int m, WellBranch branch) {
    Complex zm2 = Complex(p.z_minus * p.z_minus, 0.0);
    if (branch == WellBranch::double_well)
        return -zm2 / (4.0 * e) + std::sqrt(e - zm2 / (4.0 * e)) * ((2 * m + 1) * p.h);
    return e - p.z_minus + std::sqrt(Complex(0.5 * p.z_minus, 0.0) - e) * ((2 * m + 1) * p.h);
}

}  // namespace tcres::angular
