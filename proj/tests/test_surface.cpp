#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rlab/fit.hpp"
#include "rlab/surface.hpp"

using namespace rlab;

namespace {

constexpr double kPi = std::numbers::pi;

// adaptive Simpson, independent of the chart code
template <class F>
double simpson(F f, double a, double b, double fa, double fm, double fb, double whole, double eps, int depth) {
    double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6 * (fa + 4 * flm + fm), right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15 * eps) return left + right + (left + right - whole) / 15;
    return simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

template <class F>
double integrate(F f, double a, double b) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return simpson(f, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), 1e-12, 40);
}

}  // namespace

TEST_CASE("circle weights sum to the circumference") {
    SurfaceChart c = build_chart(SurfaceKind::circle, 2, 2 * kPi / 4096);
    CHECK(c.total_weight() == doctest::Approx(2 * kPi).epsilon(1e-9));
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double* x = c.point(j);
        REQUIRE(std::abs(std::hypot(x[0], x[1]) - 1.0) < 1e-12);
    }
}

TEST_CASE("sphere weights sum to the area") {
    SurfaceChart c = build_chart(SurfaceKind::sphere, 3, 0.01);
    CHECK(c.size() > 50000);
    CHECK(std::abs(c.total_weight() - 4 * kPi) < 1e-3);
    for (std::size_t j = 0; j < c.size(); j += 97) {
        const double* x = c.point(j);
        REQUIRE(std::abs(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 1.0) < 1e-12);
    }
}

TEST_CASE("parabola arc length matches a 1-D quadrature") {
    double oracle = integrate([](double t) { return std::sqrt(1 + 4 * t * t); }, -1.0, 1.0);
    CHECK(oracle == doctest::Approx(2.9578857150891).epsilon(1e-10));
    SurfaceChart c = build_chart(SurfaceKind::paraboloid_cap, 2, 1e-3);
    CHECK(c.total_weight() == doctest::Approx(oracle).epsilon(1e-6));
    for (std::size_t j = 0; j < c.size(); ++j) REQUIRE(std::abs(c.point(j)[1] - c.point(j)[0] * c.point(j)[0]) < 1e-12);
}

TEST_CASE("paraboloid cap in R^3 has the right area") {
    // area of {z = |x|^2, |x| <= 1} is pi (5^{3/2} - 1) / 6
    SurfaceChart c = build_chart(SurfaceKind::paraboloid_cap, 3, 0.01);
    CHECK(c.total_weight() == doctest::Approx(kPi * (std::pow(5.0, 1.5) - 1) / 6).epsilon(1e-3));
    for (std::size_t j = 0; j < c.size(); j += 31) {
        const double* x = c.point(j);
        REQUIRE(std::abs(x[2] - x[0] * x[0] - x[1] * x[1]) < 1e-12);
    }
}

TEST_CASE("sphere quadrature error shrinks like h^2") {
    double e1 = std::abs(build_chart(SurfaceKind::sphere, 3, 0.1).total_weight() - 4 * kPi);
    double e2 = std::abs(build_chart(SurfaceKind::sphere, 3, 0.05).total_weight() - 4 * kPi);
    CHECK(e2 <= e1 / 3.0 + 1e-13);
}

TEST_CASE("refine halves the spacing") {
    SurfaceChart c = build_chart(SurfaceKind::circle, 2, 0.01);
    SurfaceChart r = refine(c);
    CHECK(r.h == doctest::Approx(c.h / 2));
    CHECK(r.size() >= 2 * c.size() - 2);
}

TEST_CASE("lp norms of the constant density") {
    auto c = std::make_shared<const SurfaceChart>(build_chart(SurfaceKind::circle, 2, 0.001));
    SurfaceDensity f = constant_density(c);
    CHECK(lp_norm(f, 2) == doctest::Approx(std::sqrt(2 * kPi)).epsilon(1e-9));
    CHECK(lp_norm(f, 1) == doctest::Approx(2 * kPi).epsilon(1e-9));
    CHECK(lp_norm(f, INFINITY) == 1.0);
}

TEST_CASE("norms do not depend on node order") {
    auto c = std::make_shared<const SurfaceChart>(build_chart(SurfaceKind::sphere, 3, 0.05));
    SurfaceChart rev = *c;
    std::size_t m = rev.size();
    for (std::size_t j = 0; j < m; ++j) {
        rev.weights[j] = c->weights[m - 1 - j];
        for (int d = 0; d < 3; ++d) rev.points[j * 3 + d] = c->points[(m - 1 - j) * 3 + d];
    }
    SurfaceDensity f = constant_density(c), g = constant_density(std::make_shared<const SurfaceChart>(rev));
    for (std::size_t j = 0; j < m; ++j) {
        f.values[j] = std::sin(0.37 * static_cast<double>(j));
        g.values[m - 1 - j] = f.values[j];
    }
    CHECK(lp_norm(f, 2) == doctest::Approx(lp_norm(g, 2)).epsilon(1e-14));
}

TEST_CASE("Knapp cap at R = 1, c = 1") {
    auto c = std::make_shared<const SurfaceChart>(build_chart(SurfaceKind::circle, 2, 0.001));
    KnappCap k = build_knapp(c, 1.0, 1.0);
    CHECK(k.halfwidth == 1.0);
    CHECK(lp_norm(k.density, INFINITY) == 1.0);
    // chord |xi - e1| <= 1 is the arc of half-angle pi/3
    CHECK(k.cap_area == doctest::Approx(2 * kPi / 3).epsilon(1e-3));
}

TEST_CASE("Knapp cap rejects an under-resolved chart") {
    auto c = std::make_shared<const SurfaceChart>(build_chart(SurfaceKind::circle, 2, 0.01));
    CHECK_THROWS_AS(build_knapp(c, 1e4, 0.1), std::invalid_argument);
}

TEST_CASE("Knapp L2 norms decay like R^{-(n-1)/4}") {
    std::vector<double> Rs, circle, sphere;
    for (double R = 16; R <= 1024; R *= 2) {
        Rs.push_back(R);
        circle.push_back(lp_norm(build_knapp(knapp_chart(SurfaceKind::circle, 2, R, 0.1, 0.01), R).density, 2));
    }
    FitResult f2 = fit_power_law(Rs, circle);
    CHECK(std::abs(f2.slope + 0.25) <= 0.03);
    Rs.clear();
    for (double R = 16; R <= 256; R *= 2) {
        Rs.push_back(R);
        sphere.push_back(lp_norm(build_knapp(knapp_chart(SurfaceKind::sphere, 3, R, 0.1, 0.01), R).density, 2));
    }
    FitResult f3 = fit_power_law(Rs, sphere);
    CHECK(std::abs(f3.slope + 0.5) <= 0.05);
}
