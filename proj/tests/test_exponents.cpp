#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "rlab/exponents.hpp"

using namespace rlab;

TEST_CASE("main1 thresholds") {
    CHECK(main1_threshold(2, 0.75).value == doctest::Approx(3.0));
    CHECK(main1_threshold(2, 1.5).value == doctest::Approx(5.0));
    CHECK(main1_threshold(3, 1.5).value == doctest::Approx(3.0));
    CHECK(main1_threshold(3, 2.0).value == doctest::Approx(3.5));
    CHECK(main1_threshold(3, 1.0).value == 2.0);
    CHECK_FALSE(main1_threshold(2, 0.75).inclusive);
    CHECK_THROWS_AS(main1_threshold(2, 2.0), std::domain_error);
    CHECK_THROWS_AS(main1_threshold(3, 2.5), std::domain_error);
    CHECK_NOTHROW(main1_threshold(3, 2.5, true));
    CHECK_THROWS_AS(main1_threshold(3, -1.0), std::domain_error);
}

TEST_CASE("main2 lower bounds") {
    CHECK(main2_lower(2, 0.75).value == doctest::Approx(3.0));
    CHECK(main2_lower(2, 1.5).value == doctest::Approx(5.0));
    CHECK(main2_lower(5, 1.0).value == 2.0);
    CHECK(main2_lower(2, 0.25).value == 2.0);
    CHECK(main2_lower(2, 0.75).inclusive);
}

TEST_CASE("main3 lower bounds") {
    CHECK(main3_lower(2, 2.0).value == doctest::Approx(4.0));
    CHECK(main3_lower(3, 1.0 / 3).value == doctest::Approx(2.0 / 3));
    CHECK(main3_lower(3, 3.0).value == doctest::Approx(3.0));
}

TEST_CASE("main3 is continuous at its breakpoints") {
    auto jump = [](int n, double a) {
        double e = 1e-9;
        return std::abs(main3_lower(n, a + e).value - main3_lower(n, a - e).value);
    };
    CHECK(jump(2, 1.0 / 6) < 1e-8);
    CHECK(jump(2, 1.0) < 1e-8);
    for (int n = 3; n <= 6; ++n) CHECK(jump(n, (n - 1.0) * (n - 1.0) / (2.0 * n)) < 1e-8);
}

TEST_CASE("main1 is continuous at its breakpoints") {
    for (int n = 2; n <= 6; ++n) CHECK(boundary_gap(n) < 1e-12);
    // the three identities spelled out
    CHECK(main1_threshold(4, 1.5).value == doctest::Approx(2.0));
    CHECK(4 * 2.0 / 3 == doctest::Approx(2 * 4.0 / 3 + 2 - 4 / 2.0));
    CHECK(main1_threshold(2, 1.0).value == doctest::Approx(4.0));
}

TEST_CASE("main1 over alpha never increases") {
    for (int n = 2; n <= 5; ++n) {
        double prev = INFINITY;
        for (double a = 0.05; a <= n / 2.0 + 1e-12; a += 0.05) {
            double r = main1_threshold(n, a).value / a;
            CHECK(r <= prev * (1 + 1e-12));
            prev = r;
        }
    }
}

TEST_CASE("lower bounds stay below the upper thresholds") {
    for (int n = 2; n <= 5; ++n)
        for (double a = 0.05; a < n; a += 0.05) {
            double top = n == 2 ? 2.0 : (n + 1) / 2.0;
            if (a >= top) break;
            CHECK(main2_lower(n, a).value <= main1_threshold(n, a).value + 1e-12);
        }
}

TEST_CASE("base thresholds") {
    CHECK(base_thresholds(3, 0.5).q_ii == doctest::Approx(1.5));
    CHECK(base_thresholds(4, 1e-9).q_ii == doctest::Approx(5.0 / 4));
    CHECK(base_thresholds(2, 0.5 - 1e-12).q_ii == doctest::Approx(2.0));
}

TEST_CASE("simbase thresholds") {
    CHECK(simbase_threshold(3, 1.0).q == doctest::Approx(3.2));
    for (int n = 3; n <= 8; ++n) {
        CHECK(simbase_threshold(n, n).q == 2.0 * (n + 1) / (n - 1));
        double e = 0.99 / n;
        CHECK(simbase_threshold(n, n - 1, e).A_exponent <= 2.0 / (n - 1) + 1e-12);
    }
    CHECK_THROWS_AS(simbase_threshold(2, 1.0), std::domain_error);
}

TEST_CASE("crossover") {
    CHECK(crossover_alpha(3) == 2.0);
    CHECK(crossover_alpha(4) == 2.5);
    for (int n = 3; n <= 12; ++n) {
        double x = n;
        double radical = (x * x + 1 - std::sqrt(x * x * x * x - 4 * x * x * x + 2 * x * x + 4 * x + 1)) / 4;
        CHECK(std::abs(radical - crossover_alpha(n)) < 1e-9);
        double an = crossover_alpha(n);
        CHECK(main1_threshold(n, an).value == doctest::Approx(simbase_threshold(n, an).q).epsilon(1e-12));
        for (double a = n / 2.0 + 0.01; a < an; a += 0.01) CHECK(main1_threshold(n, a).value < simbase_threshold(n, a).q);
    }
}

TEST_CASE("Du-Zhang exponents") {
    CHECK(dz_exponents(2, 2.0).gamma_exponent == doctest::Approx(0.5));
    CHECK(dz_exponents(3, 1.0).e == 0.0);
    CHECK(dz_exponents(3, 1.0).e_defined);
    CHECK(dz_exponents(3, 1.5).e == doctest::Approx(0.25));
    CHECK_FALSE(dz_exponents(3, 2.0).e_defined);
}

TEST_CASE("interpolation exponent") {
    Interpolation i = interpolation_p(3, 2.0);
    CHECK(i.p == doctest::Approx(1.5));
    CHECK(i.alpha_prime == doctest::Approx(1.0));
    CHECK(interpolation_p(3, 1.5).p == doctest::Approx(1.0));
    for (int n = 3; n <= 6; ++n)
        for (double a = n / 2.0; a <= n * (n - 1) / 2.0 && a <= n; a += 0.1) CHECK(interpolation_p(n, a).p <= 2.0 + 1e-12);
}

TEST_CASE("table rows") {
    TableRow r = table_row(3, 2.0);
    CHECK(r.has_main1);
    CHECK(r.main1 == doctest::Approx(3.5));
    CHECK(table_row(3, 1.0).main1 == 2.0);
    TableRow t = table_row(2, 2.0);
    CHECK_FALSE(t.has_main1);
    CHECK(t.has_main2);
}
