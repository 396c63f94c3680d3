#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "rlab/fit.hpp"
#include "rlab/weights.hpp"

using namespace rlab;

namespace {

constexpr double kPi = std::numbers::pi;

// brute-force window counts over the same dyadic sides, plus side R
double gamma_oracle(const CubeSet& X, double alpha) {
    long lo = X.lower();
    std::vector<long> sides;
    for (long r = 1; r <= X.R; r *= 2) sides.push_back(r);
    if (sides.back() != X.R) sides.push_back(X.R);
    double best = 0.0;
    for (long r : sides)
        for (long a = lo; a + r <= lo + X.R; ++a)
            for (long b = lo; b + r <= lo + X.R; ++b) {
                long cnt = 0;
                for (std::size_t i = 0; i < X.size(); ++i) {
                    long x = X.corners[2 * i], y = X.corners[2 * i + 1];
                    cnt += x >= a && x < a + r && y >= b && y < b + r;
                }
                best = std::max(best, cnt / std::pow(static_cast<double>(r), alpha));
            }
    return best;
}

}  // namespace

TEST_CASE("nominal dimensions") {
    CHECK(parse_weight("X_b:b=0.25", 2).nominal_alpha == doctest::Approx(0.75));
    CHECK(parse_weight("Y_b:b=0.5", 2).nominal_alpha == doctest::Approx(1.5));
    CHECK(parse_weight("Omega_b_R3:b=0.3", 3).nominal_alpha == doctest::Approx(2.3));
    CHECK(parse_weight("Omega", 2).nominal_alpha == doctest::Approx(1.0));
    CHECK(parse_weight("constant_one", 3).nominal_alpha == 3.0);
    CHECK_THROWS(parse_weight("nope", 2));
    CHECK_THROWS(parse_weight("X_b:b=0.25", 3));
}

TEST_CASE("polynomial parsing and presets") {
    Polynomial p = Polynomial::parse("3*x0^2*x1 - x1 + 2", 2);
    double x[2] = {2.0, -1.0}, g[2];
    CHECK(p(x) == doctest::Approx(-12 + 1 + 2));
    p.gradient(x, g);
    CHECK(g[0] == doctest::Approx(-12));
    CHECK(g[1] == doctest::Approx(11));
    CHECK(p.degree() == 3);
    Polynomial c = Polynomial::parse("circle", 2);
    double on[2] = {0.6, 0.8};
    CHECK(std::abs(c(on)) < 1e-15);
    CHECK(Polynomial::parse("parabola", 2).degree() == 2);
}

TEST_CASE("weights take values in [0, 1]") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-30, 30);
    for (const char* spec : {"X_b:b=0.25", "Y_b:b=0.5", "Omega", "variety_nbhd:P=circle,rho=0.1,box=-2:2"}) {
        Weight H = parse_weight(spec, 2);
        double h[2] = {0.7, 0.3};
        for (int t = 0; t < 500; ++t) {
            double x[2] = {U(rng), U(rng)};
            double v = H.value(x), a = H.cell_average(x, h);
            REQUIRE((v == 0.0 || v == 1.0));
            REQUIRE(a >= 0.0);
            REQUIRE(a <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("separable cell averages factor") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-20, 20);
    for (auto [spec, n] : {std::pair{"Y_b:b=0.5", 2}, {"Omega_b_R3:b=0.5", 3}, {"Omega_b_Rn:b=0.5", 3}}) {
        Weight H = parse_weight(spec, n);
        REQUIRE(H.separable());
        double h[3] = {0.5, 0.25, 0.5};
        for (int t = 0; t < 200; ++t) {
            double x[3] = {U(rng), U(rng), U(rng)};
            double prod = 1.0;
            for (int a = 0; a < n; ++a) prod *= H.axis_average(a, x[a], h[a]);
            REQUIRE(H.cell_average(x, h) == doctest::Approx(prod).epsilon(1e-12));
        }
    }
}

TEST_CASE("ball mass of H = 1 is the disk area") {
    Weight one = make_weight(WeightFamily::constant_one, 2, {});
    for (double R : {1.0, 3.5, 40.0}) {
        double x0[2] = {1.3, -7.0};
        CHECK(ball_mass(one, x0, R) == doctest::Approx(kPi * R * R).epsilon(0.01));
    }
}

TEST_CASE("ball mass of X_1 grows logarithmically") {
    WeightParams p;
    p.b = 1.0;
    p.alpha = 0.5;
    Weight H = make_weight(WeightFamily::X_b, 2, p);
    std::vector<double> Rs, m;
    for (double R = 16; R <= 4096; R *= 4) {
        double x0[2] = {R / 2, 0.0};
        Rs.push_back(R);
        m.push_back(ball_mass(H, x0, R));
    }
    // increments per factor 4 in R approach log 4 times a bounded constant
    for (std::size_t i = 1; i < m.size(); ++i) {
        double inc = m[i] - m[i - 1];
        CHECK(inc > 0.0);
        CHECK(inc < 3.0 * std::log(4.0));
    }
    CHECK(fit_power_law(Rs, m).slope < 0.25);
}

TEST_CASE("cube sets carry their volume") {
    CubeSet X = make_cube_set(2, 8, {0, 0, 1, 0, -3, 2, 2, 3, 3, -4});
    Weight H = weight_from_cubes(X, 1.0);
    double x0[2] = {0.0, 0.0};
    CHECK(ball_mass(H, x0, 20.0) == doctest::Approx(5.0).epsilon(0.01));
    std::stringstream ss;
    write_cubes_csv(ss, X);
    CubeSet Y = read_cubes_csv(ss, 2, 8);
    CHECK(Y.corners == X.corners);
    CHECK_THROWS(make_cube_set(2, 8, {4, 0}));
}

TEST_CASE("A_alpha of H = 1 at alpha = n is pi") {
    Weight one = make_weight(WeightFamily::constant_one, 2, {});
    BallSweepReport r = estimate_A_alpha(one, 2.0, 64);
    CHECK(r.max_ratio == doctest::Approx(kPi).epsilon(0.01));
}

TEST_CASE("A_alpha of H = 1 below n grows like R^(n - alpha)") {
    Weight one = make_weight(WeightFamily::constant_one, 2, {});
    std::vector<double> Rs, A;
    for (double R = 8; R <= 128; R *= 2) {
        Rs.push_back(R);
        A.push_back(estimate_A_alpha(one, 1.5, R).max_ratio);
    }
    CHECK(std::abs(fit_power_law(Rs, A).slope - 0.5) <= 0.1);
}

TEST_CASE("A_alpha is monotone in alpha and in the sweep") {
    Weight H = parse_weight("Y_b:b=0.5", 2);
    double prev = INFINITY;
    for (double a : {1.2, 1.5, 1.8, 2.0}) {
        double v = estimate_A_alpha(H, a, 64).max_ratio;
        CHECK(v <= prev * (1 + 1e-12));
        prev = v;
    }
    CHECK(estimate_A_alpha(H, 1.5, 128).max_ratio >= estimate_A_alpha(H, 1.5, 64).max_ratio);
}

TEST_CASE("Omega in the plane is n/2 dimensional") {
    Weight H = parse_weight("Omega", 2);
    BallSweepReport r = estimate_A_alpha(H, 1.0, 256);
    CHECK(r.stabilized);
    CHECK(r.max_ratio < 5.0);
}

TEST_CASE("neighbourhoods of curves scale like rho") {
    for (const char* P : {"circle", "parabola"}) {
        std::vector<double> ratio;
        for (double rho : {0.1, 0.05, 0.025}) {
            std::string spec = std::string("variety_nbhd:P=") + P + ",rho=" + std::to_string(rho) + ",box=-2:2";
            Weight H = parse_weight(spec, 2);
            ratio.push_back(estimate_A_alpha(H, 1.0, 8).max_ratio / (2 * rho));
        }
        for (std::size_t i = 1; i < ratio.size(); ++i) {
            CHECK(ratio[i] <= 4 * ratio[i - 1]);
            CHECK(ratio[i] >= ratio[i - 1] / 4);
        }
    }
}

TEST_CASE("gamma on small cube sets") {
    CubeSet one = make_cube_set(2, 8, {1, 1});
    CHECK(gamma_statistic(one, 1.0).gamma == 1.0);
    CHECK(gamma_statistic(one, 2.0).gamma == 1.0);

    CubeSet full = full_cube_set(2, 8);
    double g = gamma_statistic(full, 2.0).gamma;
    CHECK(g == doctest::Approx(gamma_oracle(full, 2.0)));
    CHECK(g >= 0.25);
    CHECK(g <= 1.0);

    std::vector<long> row;
    for (long x = -8; x < 8; ++x) row.insert(row.end(), {x, 0});
    CubeSet line = make_cube_set(2, 16, row);
    double gl = gamma_statistic(line, 1.0).gamma;
    CHECK(gl == doctest::Approx(gamma_oracle(line, 1.0)));
    CHECK(gl >= 0.5);
    CHECK(gl <= 2.0);
}

TEST_CASE("gamma matches brute force on random sets") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 5; ++t) {
        std::bernoulli_distribution keep(0.3);
        std::vector<long> c;
        for (long x = -8; x < 8; ++x)
            for (long y = -8; y < 8; ++y)
                if (keep(rng)) c.insert(c.end(), {x, y});
        CubeSet X = make_cube_set(2, 16, c);
        for (double a : {1.0, 1.5, 2.0}) CHECK(gamma_statistic(X, a).gamma == doctest::Approx(gamma_oracle(X, a)));
    }
}

TEST_CASE("Cantor rows: A_1 tracks gamma") {
    CubeSet X = cantor_rows(4);
    CHECK(X.R == 16);
    CHECK(X.size() == 16);
    double g = gamma_statistic(X, 1.0).gamma;
    CHECK(g == doctest::Approx(gamma_oracle(X, 1.0)));
    Weight H = weight_from_cubes(X, 1.0);
    BallSweepReport r = estimate_A_alpha(H, 1.0, 16);
    CHECK(r.max_ratio <= 4 * g);
    CHECK(r.max_ratio >= g / 4);
    CHECK(r.max_ratio <= 3.0 * g);  // (r + 2)^alpha <= (3r)^alpha
}

TEST_CASE("sampled weights round-trip through a grid") {
    Weight H = parse_weight("Y_b:b=0.5", 2);
    Grid g = make_cell_grid(cube_box(2, -4, 4), 0.25);
    RealGrid s = sample_weight(H, g);
    Weight S = sampled_weight(s, 1.5);
    std::vector<double> x(2);
    for (std::size_t i = 0; i < g.size(); i += 7) {
        g.point(i, x.data());
        CHECK(S.value(x.data()) == doctest::Approx(s.values[i]));
    }
}
