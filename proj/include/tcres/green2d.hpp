#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "tcres/angular.hpp"
#include "tcres/radial.hpp"
#include "tcres/types.hpp"

namespace tcres::green2d {

// Complex-coefficient eigenfunction evaluation (bilinear-normalized, no
// conjugation: the continuation keeps v real for real E).
inline Complex eigenfunction_value(const std::vector<Complex>& coeffs, bool even_block,
                                   double eta) {
    Complex s{0.0};
    if (even_block) {
        s += coeffs[0] / std::sqrt(2.0 * pi);
        for (std::size_t j = 1; j < coeffs.size(); ++j)
            s += coeffs[j] * std::cos(double(j) * eta) / std::sqrt(pi);
    } else {
        for (std::size_t j = 0; j < coeffs.size(); ++j)
            s += coeffs[j] * std::sin(double(j + 1) * eta) / std::sqrt(pi);
    }
    return s;
}

struct PartialWaveTerm {
    Complex mu{};
    Complex value{};  // v_n(eta) v_n(eta~) G_n(xi, xi~) (cosh^2 xi~ - cos^2 eta~)
};

// Truncated partial-wave Green's function
//   G_N = sum_{n=0}^{N} v_n(eta) v_n(eta~) G_n(xi, xi~; E) (cosh^2 xi~ - cos^2 eta~).
inline Complex truncated_green_2d(const ProblemParams& p, Complex e, int n_top, double xi,
                                  double eta, double xi_t, double eta_t,
                                  std::vector<PartialWaveTerm>* terms = nullptr) {
    if (n_top < 0) throw InvalidParams("truncation order must be non-negative");
    Complex k = std::sqrt(e);
    if (k == Complex(0.0)) throw InvalidParams("k = 0 excluded");
    double x = std::exp(xi) - 1.0;
    double x_t = std::exp(xi_t) - 1.0;
    double jac = std::pow(std::cosh(xi_t), 2) - std::pow(std::cos(eta_t), 2);
    Complex total{0.0};
    for (int n = 0; n <= n_top; ++n) {
        angular::TrackedLevel tl = angular::track_level(p, e, n);
        Complex vn = eigenfunction_value(tl.coeffs, tl.block == angular::Block::even, eta);
        Complex vn_t = eigenfunction_value(tl.coeffs, tl.block == angular::Block::even, eta_t);
        Complex gn = radial::radial_green(radial::reduce(p, k, tl.mu), x, x_t);
        Complex term = vn * vn_t * gn * jac;
        if (terms) terms->push_back({tl.mu, term});
        total += term;
    }
    return total;
}

}  // namespace tcres::green2d
