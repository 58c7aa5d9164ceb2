#include <catch2/catch_amalgamated.hpp>

#include "tcres/classical.hpp"

using namespace tcres;
using Catch::Approx;

static ProblemParams zp2_zm4() { return params_from_zpm(2.0, 4.0, 0.01); }

TEST_CASE("K- piecewise values and continuity at Z-/2") {
    auto p = zp2_zm4();
    CHECK(k_minus(p, 1.5) == Approx(2.5));
    CHECK(k_minus(p, 8.0) == Approx(0.5));
    CHECK(k_minus(p, 2.0) == Approx(2.0));
    CHECK(k_minus(p, std::nextafter(2.0, 3.0)) == Approx(2.0).epsilon(1e-12));
}

TEST_CASE("K+ piecewise values, unbounded sentinel for E > 0") {
    auto p = zp2_zm4();
    CHECK_FALSE(k_plus(p, 1.0).has_value());
    CHECK(k_plus(p, -2.0).value() == Approx(0.0).margin(1e-15));
    CHECK(k_plus(p, -0.5).value() == Approx(-2.0));
    // continuity at min(-Z+/2, 0) = -1
    CHECK(k_plus(p, -1.0).value() == Approx(k_plus(p, std::nextafter(-1.0, 0.0)).value())
                                         .epsilon(1e-9));
}

TEST_CASE("K estimate lands barrier-top balance on the K = -Z+ - E line") {
    auto p = zp2_zm4();
    ResonanceRecord rec;
    double e = 3.7;
    rec.mu = Complex(p.z_plus + e, 0.0);  // leading-order A_n cancellation
    rec.energy.e = Complex(e, 0.0);
    CHECK(estimate_K(rec) == Approx(-p.z_plus - e));
}

TEST_CASE("Lyapunov normalizer") {
    CHECK(lyapunov_normalizer(std::exp(1.0)) == Approx(std::sqrt(std::exp(1.0))));
    CHECK_THROWS_AS(lyapunov_normalizer(1.0), InvalidParams);
    CHECK_THROWS_AS(lyapunov_normalizer(0.5), InvalidParams);
}

TEST_CASE("bifurcation diagram: closed-form identities at every sample") {
    auto p = zp2_zm4();
    auto curves = bifurcation_diagram(p, 0.0, 10.0, 64);
    REQUIRE(curves.size() == 8);

    for (const auto& c : curves) {
        for (const auto& s : c.samples) {
            switch (c.id) {
                case CurveId::L0:
                    CHECK(s.e == 0.0);
                    break;
                case CurveId::Lm1:
                    CHECK(s.k.value() == Approx(p.z_minus - s.e));
                    break;
                case CurveId::Lp2:
                    CHECK(s.k.value() == Approx(-p.z_plus - s.e));
                    break;
                case CurveId::Lm2:
                    CHECK(s.k.value() == Approx(-p.z_minus - s.e));
                    break;
                case CurveId::Lp3:
                    if (s.k) CHECK(4.0 * s.e * s.k.value() == Approx(p.z_plus * p.z_plus));
                    break;
                case CurveId::Lm3:
                    if (s.k) CHECK(4.0 * s.e * s.k.value() == Approx(p.z_minus * p.z_minus));
                    break;
                case CurveId::Kplus:
                    CHECK((s.e > 0.0) == !s.k.has_value());
                    break;
                case CurveId::Kminus:
                    CHECK(s.k.value() == Approx(k_minus(p, s.e)));
                    break;
            }
        }
    }
}

TEST_CASE("Lm3 passes through (Z-/2, Z-/2)") {
    auto p = zp2_zm4();
    double e = 0.5 * p.z_minus;
    CHECK(4.0 * e * (0.5 * p.z_minus) == Approx(p.z_minus * p.z_minus));
    CHECK(k_minus(p, e) == Approx(0.5 * p.z_minus));
}

TEST_CASE("admissible band at E = 1 for (Z+, Z-) = (2, 4)") {
    auto p = zp2_zm4();
    CHECK(k_minus(p, 1.0) == Approx(3.0));
    CHECK_FALSE(k_plus(p, 1.0).has_value());  // band is (-inf, 3]
}

TEST_CASE("Lp2 coincides with K+ on the linear branch") {
    auto p = zp2_zm4();
    for (double e : {-1.0, -1.7, -3.0})
        CHECK(k_plus(p, e).value() == Approx(-(p.z_plus + e)));
}

TEST_CASE("degenerate requests rejected") {
    auto p = zp2_zm4();
    CHECK_THROWS_AS(bifurcation_diagram(p, 1.0, 1.0, 10), InvalidParams);
    CHECK_THROWS_AS(bifurcation_diagram(p, 0.0, 1.0, 1), InvalidParams);
}
