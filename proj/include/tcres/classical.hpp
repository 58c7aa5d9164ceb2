#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "tcres/types.hpp"

namespace tcres {

// Bifurcation set of the classical energy-momentum map: six closed-form
// curves plus the admissible-K band boundaries K+-(E) for E >= 0.
enum class CurveId { L0, Lm1, Lp2, Lm2, Lp3, Lm3, Kplus, Kminus };

inline const char* to_string(CurveId id) {
    switch (id) {
        case CurveId::L0: return "L0";
        case CurveId::Lm1: return "Lm1";
        case CurveId::Lp2: return "Lp2";
        case CurveId::Lm2: return "Lm2";
        case CurveId::Lp3: return "Lp3";
        case CurveId::Lm3: return "Lm3";
        case CurveId::Kplus: return "Kplus";
        default: return "Kminus";
    }
}

struct CurveSample {
    double e = 0.0;
    std::optional<double> k;  // empty = unbounded below (K+ for E > 0)
};

struct BifurcationCurve {
    CurveId id = CurveId::L0;
    std::vector<CurveSample> samples;
};

inline double k_minus(const ProblemParams& p, double e) {
    if (e <= 0.5 * p.z_minus) return p.z_minus - e;
    return p.z_minus * p.z_minus / (4.0 * e);
}

// K+(E) is -inf for E > 0; represented by an empty optional, never a float
// infinity (serialized as the string "unbounded").
inline std::optional<double> k_plus(const ProblemParams& p, double e) {
    if (e > 0.0) return std::nullopt;
    double lo = std::min(-0.5 * p.z_plus, 0.0);
    if (e <= lo) return -(p.z_plus + e);
    return p.z_plus * p.z_plus / (4.0 * e);
}

// Estimated classical constant of motion for a computed resonance.
// Convention: K_est = -Re(mu); the barrier-top balance mu = Z+ + E then lands
// exactly on the K = -Z+ - E line.
inline double estimate_K(const ResonanceRecord& rec) { return -rec.mu.real(); }

// Growth rate of the Lyapunov exponent of the orbit bouncing between the
// centers, used to rescale resonance positions.
inline double lyapunov_normalizer(double e) {
    if (!(e > 1.0)) throw InvalidParams("lyapunov_normalizer requires E > 1");
    return std::sqrt(e) * std::log(e);
}

inline std::vector<BifurcationCurve> bifurcation_diagram(const ProblemParams& p, double e_min,
                                                         double e_max, int samples) {
    if (!(e_max > e_min)) throw InvalidParams("degenerate energy range");
    if (samples < 2) throw InvalidParams("need at least 2 samples");
    std::vector<BifurcationCurve> out;
    auto grid = [&](int i) { return e_min + (e_max - e_min) * i / (samples - 1); };

    // K span of the closed-form curves, used to sample the vertical line E=0
    double k_lo = 0.0, k_hi = 0.0;
    auto widen = [&](double v) {
        k_lo = std::min(k_lo, v);
        k_hi = std::max(k_hi, v);
    };

    auto line = [&](CurveId id, auto f) {
        BifurcationCurve c;
        c.id = id;
        for (int i = 0; i < samples; ++i) {
            double e = grid(i);
            std::optional<double> k = f(e);
            if (k) widen(*k);
            c.samples.push_back({e, k});
        }
        out.push_back(std::move(c));
    };

    line(CurveId::Lm1, [&](double e) -> std::optional<double> { return p.z_minus - e; });
    line(CurveId::Lp2, [&](double e) -> std::optional<double> { return -p.z_plus - e; });
    line(CurveId::Lm2, [&](double e) -> std::optional<double> { return -p.z_minus - e; });
    line(CurveId::Lp3, [&](double e) -> std::optional<double> {
        if (e == 0.0) return std::nullopt;
        return p.z_plus * p.z_plus / (4.0 * e);
    });
    line(CurveId::Lm3, [&](double e) -> std::optional<double> {
        if (e == 0.0) return std::nullopt;
        return p.z_minus * p.z_minus / (4.0 * e);
    });
    line(CurveId::Kplus, [&](double e) { return k_plus(p, e); });
    line(CurveId::Kminus, [&](double e) -> std::optional<double> { return k_minus(p, e); });

    BifurcationCurve l0;
    l0.id = CurveId::L0;
    for (int i = 0; i < samples; ++i) {
        double k = k_lo + (k_hi - k_lo) * i / (samples - 1);
        l0.samples.push_back({0.0, k});
    }
    out.insert(out.begin(), std::move(l0));
    return out;
}

}  // namespace tcres
