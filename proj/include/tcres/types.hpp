#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcres {

using Complex = std::complex<double>;

constexpr double pi = 3.14159265358979323846;

// Errors carry a short machine-readable tag plus a human message so grid
// drivers can embed the reason string in output rows instead of dying.
class Error : public std::runtime_error {
public:
    Error(std::string tag, const std::string& msg)
        : std::runtime_error(msg), tag_(std::move(tag)) {}
    const std::string& tag() const { return tag_; }
private:
    std::string tag_;
};

class InvalidParams : public Error {
public:
    explicit InvalidParams(const std::string& msg) : Error("invalid_params", msg) {}
};

class NumericalFailure : public Error {
public:
    NumericalFailure(std::string tag, const std::string& msg) : Error(std::move(tag), msg) {}
};

// ---------------------------------------------------------------------------
// Global physical configuration.
//
// Charges are stored in the normalized order z2 >= z1 so that
// z_minus = z2 - z1 >= 0; `swapped` remembers whether the inputs were
// exchanged so reports can show what the caller passed in.
struct ProblemParams {
    double z1 = 0.0;
    double z2 = 0.0;
    double h = 0.0;
    double z_plus = 0.0;   // z2 + z1
    double z_minus = 0.0;  // z2 - z1 >= 0
    bool swapped = false;
    double z1_input = 0.0;
    double z2_input = 0.0;
};

inline ProblemParams validate_params(double z1, double z2, double h) {
    if (!(h > 0.0)) throw InvalidParams("h must be positive");
    if (z1 == 0.0 || z2 == 0.0) throw InvalidParams("zero charge");
    ProblemParams p;
    p.z1_input = z1;
    p.z2_input = z2;
    p.swapped = z2 < z1;
    if (p.swapped) std::swap(z1, z2);
    p.z1 = z1;
    p.z2 = z2;
    p.h = h;
    p.z_plus = z2 + z1;
    p.z_minus = z2 - z1;
    if (p.z_plus == p.z_minus) throw InvalidParams("Z+ equals Z- (one charge vanishes)");
    return p;
}

// Convenience constructor from the (Z+, Z-) pair used on the command line.
inline ProblemParams params_from_zpm(double z_plus, double z_minus, double h) {
    return validate_params(0.5 * (z_plus - z_minus), 0.5 * (z_plus + z_minus), h);
}

// ---------------------------------------------------------------------------
// Energy bookkeeping. k is the primary variable, e = k^2 derived; `sheet`
// records whether the point was reached by continuation across the positive
// real k-axis.
enum class Sheet { physical, second };

struct ComplexEnergy {
    Complex e{};
    Complex k{};
    Sheet sheet = Sheet::physical;
};

inline ComplexEnergy energy_from_k(Complex k, std::optional<Sheet> hint = std::nullopt) {
    if (k == Complex(0.0, 0.0)) throw InvalidParams("k = 0 excluded");
    ComplexEnergy ce;
    ce.k = k;
    ce.e = k * k;
    ce.sheet = hint.value_or(k.imag() >= 0.0 ? Sheet::physical : Sheet::second);
    return ce;
}

// ---------------------------------------------------------------------------
// Angular level metadata.
enum class Parity { even_sym, even_antisym, odd_sym, odd_antisym };
enum class AngularMethod { matrix, shooting, quasimode, high_energy };

inline const char* to_string(Parity p) {
    switch (p) {
        case Parity::even_sym: return "even_sym";
        case Parity::even_antisym: return "even_antisym";
        case Parity::odd_sym: return "odd_sym";
        default: return "odd_antisym";
    }
}

struct AngularLevel {
    int index = 0;
    Complex mu{};
    Parity parity = Parity::even_sym;
    AngularMethod method = AngularMethod::matrix;
    double err_estimate = 0.0;
    // Nonzero only for the matrix method: Fourier coefficients of the
    // normalized eigenfunction over the block's trigonometric basis.
    std::vector<double> coeffs;
    bool even_block = true;
    // Theorem-3.2-style diagnostic: Re E > 2|Z-| guarantees the complex
    // continuation; we continue regardless but surface the flag.
    bool continuation_guaranteed = true;
    // quasimode double-well levels come in near-degenerate +- pairs
    bool degenerate_pair = false;
};

struct MathieuParams {
    Complex lambda{};
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double delta = 0.0;
};

inline MathieuParams mathieu_parameters(Complex mu, Complex e, double h) {
    if (!(h > 0.0)) throw InvalidParams("h must be positive");
    MathieuParams mp;
    mp.lambda = (2.0 * mu - e) / (2.0 * h * h);
    mp.gamma1 = 0.0;  // filled by callers that know Z-; kept for completeness
    mp.gamma2 = e.real() / (2.0 * h * h);
    mp.delta = e.real() / (4.0 * h * h);
    return mp;
}

inline MathieuParams mathieu_parameters(const ProblemParams& p, Complex mu, Complex e) {
    MathieuParams mp = mathieu_parameters(mu, e, p.h);
    mp.gamma1 = p.z_minus / (p.h * p.h);
    return mp;
}

// ---------------------------------------------------------------------------
// Resonance records.
enum class Regime { equal_charges, low_lying, high_energy, direct_jost };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::equal_charges: return "equal_charges";
        case Regime::low_lying: return "low_lying";
        case Regime::high_energy: return "high_energy";
        default: return "direct_jost";
    }
}

enum class EnergyFamily { small_re, large_re };

struct ResonanceRecord {
    int n = 0;  // barrier-top index
    int m = 0;  // angular index
    ComplexEnergy energy;
    Complex mu{};
    double k_classical = 0.0;  // estimated classical constant of motion, -Re mu
    Regime regime = Regime::equal_charges;
    double residual = 0.0;
    EnergyFamily family = EnergyFamily::small_re;
    bool is_eigenvalue = false;  // direct_jost only: zero with Im k > 0
};

}  // namespace tcres
