#include <catch2/catch_amalgamated.hpp>

#include "tcres/types.hpp"

using namespace tcres;
using Catch::Approx;

TEST_CASE("validate_params normalizes and caches the charge combinations") {
    auto p = validate_params(1.0, 1.0, 0.01);
    CHECK(p.z_plus == 2.0);
    CHECK(p.z_minus == 0.0);
    CHECK_FALSE(p.swapped);

    // ordering convention: swap so that Z- >= 0
    auto q = validate_params(3.0, -1.0, 0.1);
    CHECK(q.swapped);
    CHECK(q.z1 == -1.0);
    CHECK(q.z2 == 3.0);
    CHECK(q.z_plus == 2.0);
    CHECK(q.z_minus == 4.0);
    CHECK(q.z1_input == 3.0);
    CHECK(q.z2_input == -1.0);
}

TEST_CASE("validate_params rejects degenerate input") {
    CHECK_THROWS_AS(validate_params(0.0, 1.0, 0.1), InvalidParams);
    CHECK_THROWS_AS(validate_params(1.0, 0.0, 0.1), InvalidParams);
    CHECK_THROWS_AS(validate_params(1.0, 1.0, 0.0), InvalidParams);
    CHECK_THROWS_AS(validate_params(1.0, 1.0, -2.0), InvalidParams);
}

TEST_CASE("validate_params is idempotent") {
    auto p = validate_params(3.0, -1.0, 0.1);
    auto q = validate_params(p.z1, p.z2, p.h);
    CHECK(q.z1 == p.z1);
    CHECK(q.z2 == p.z2);
    CHECK(q.z_plus == p.z_plus);
    CHECK(q.z_minus == p.z_minus);
    CHECK_FALSE(q.swapped);
}

TEST_CASE("energy bookkeeping: e = k^2 with sheet from the sign of Im k") {
    auto a = energy_from_k(Complex(0.0, 1.0));
    CHECK(a.e.real() == Approx(-1.0));
    CHECK(a.e.imag() == Approx(0.0).margin(1e-15));
    CHECK(a.sheet == Sheet::physical);

    auto b = energy_from_k(Complex(1.0, -0.1));
    CHECK(b.e.real() == Approx(0.99));
    CHECK(b.e.imag() == Approx(-0.2));
    CHECK(b.sheet == Sheet::second);

    auto c = energy_from_k(Complex(2.0, 0.0));
    CHECK(c.e.real() == Approx(4.0));
    CHECK(c.sheet == Sheet::physical);

    // hint forces the second sheet on the boundary
    auto d = energy_from_k(Complex(2.0, 0.0), Sheet::second);
    CHECK(d.sheet == Sheet::second);

    CHECK_THROWS_AS(energy_from_k(Complex(0.0, 0.0)), InvalidParams);
}

TEST_CASE("energy round-trip keeps k exact and e consistent") {
    for (Complex k : {Complex(1.7, 0.3), Complex(0.2, -4.0), Complex(-3.0, 0.01)}) {
        auto ce = energy_from_k(k);
        CHECK(ce.k == k);
        CHECK(std::abs(ce.k * ce.k - ce.e) <= 1e-14 * std::max(1.0, std::abs(ce.e)));
    }
}

TEST_CASE("mathieu parameter map") {
    auto a = mathieu_parameters(Complex(2.0, 0.0), Complex(4.0, 0.0), 0.3);
    CHECK(std::abs(a.lambda) == Approx(0.0).margin(1e-15));  // mu = E/2

    auto b = mathieu_parameters(Complex(1.0, 0.0), Complex(0.0, 0.0), 0.1);
    CHECK(b.lambda.real() == Approx(100.0));
    CHECK(b.gamma2 == Approx(0.0));

    auto c = mathieu_parameters(Complex(0.0, 0.0), Complex(2.0, 0.0), 1.0);
    CHECK(c.lambda.real() == Approx(-1.0));
    CHECK(c.delta == Approx(0.5));

    auto p = validate_params(-1.0, 3.0, 0.5);  // Z- = 4
    auto d = mathieu_parameters(p, Complex(1.0, 0.0), Complex(2.0, 0.0));
    CHECK(d.gamma1 == Approx(4.0 / 0.25));
}
