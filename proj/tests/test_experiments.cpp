#include <cmath>
#include <sstream>

#include "doctest.h"
#include "rlab/experiments.hpp"
#include "rlab/extension.hpp"

using namespace rlab;

namespace {

double column(const ScenarioResult& r, std::size_t row, const std::string& name) {
    for (std::size_t i = 0; i < r.header.size(); ++i)
        if (r.header[i] == name) return std::stod(r.rows.at(row).at(i));
    throw std::out_of_range(name);
}

double summary(const ScenarioResult& r, const std::string& key) { return std::stod(r.summary_value(key)); }

}  // namespace

TEST_CASE("config parsing") {
    Config c = Config::parse_string("# comment\nq = 4\nR_list = 16..128  # trailing\nname = circle\nlist = 1, 2.5,4\n");
    CHECK(c.num("q") == 4.0);
    CHECK(c.list("R_list") == std::vector<double>{16, 32, 64, 128});
    CHECK(c.list("list") == std::vector<double>{1, 2.5, 4});
    CHECK(c.str("name") == "circle");
    CHECK(c.num("missing", 7.0) == 7.0);
    CHECK_NOTHROW(c.check_all_used());

    Config d = Config::parse_string("q = 4\ntypo = 1\n");
    d.num("q");
    CHECK_THROWS_WITH_AS(d.check_all_used(), "config: unknown key 'typo'", std::invalid_argument);
    CHECK_THROWS(d.num("absent"));
    CHECK_THROWS(Config::parse_string("q = 1\nq = 2\n"));
    CHECK_THROWS(Config::parse_string("no equals sign\n"));
    CHECK_THROWS(Config::parse_string("q = four\n").num("q"));
}

TEST_CASE("bounded tails") {
    CHECK(bounded_tail({1.0, 2.0, 1.9}));
    CHECK(bounded_tail({1.0, 1.0, 1.14}));
    CHECK_FALSE(bounded_tail({1.0, 1.0, 1.3}));
    CHECK(bounded_tail({5.0}));
}

TEST_CASE("result formatting") {
    CHECK(fmt(0.1) == "0.1");
    CHECK(fmt(1.0 / 3) == "0.333333333333");
    ScenarioResult r;
    r.header = {"a", "b"};
    r.rows = {{"1", "2"}};
    r.summary = {{"slope", "-0.5"}};
    CHECK(r.csv() == "a,b\n1,2\n# slope=-0.5\n");
    CHECK(r.summary_value("slope") == "-0.5");
}

TEST_CASE("tables scenario") {
    ScenarioResult r = run_tables(Config::parse_string("n_list = 2,3\nalpha_step = 0.1\n"), 1);
    CHECK(r.exit_code == 0);
    CHECK(r.header.at(2) == "main1");
    bool seen = false;
    for (std::size_t i = 0; i < r.rows.size(); ++i)
        if (r.rows[i][0] == "3" && r.rows[i][1] == "2") {
            CHECK(column(r, i, "main1") == doctest::Approx(3.5));
            seen = true;
        } else if (r.rows[i][0] == "3" && r.rows[i][1] == "1") {
            CHECK(column(r, i, "main1") == 2.0);
        }
    CHECK(seen);
    CHECK(r.summary_value("q_over_alpha_monotone") == "1");
}

TEST_CASE("ratio scenario rejects q below the threshold") {
    Config c = Config::parse_string("weight = X_b:b=0.25\nalpha = 0.75\nq = 2.5\nR_list = 16,32\nseed = 1\n");
    CHECK_THROWS_WITH(run_ratio(c, 1), doctest::Contains("q > 3"));
    Config ts = Config::parse_string("weight = constant_one\nalpha = 2\nq = 5.5\nR_list = 16,32\nseed = 1\n");
    CHECK_THROWS_WITH(run_ratio(ts, 1), doctest::Contains("q >= 6"));
    Config noseed = Config::parse_string("weight = constant_one\nalpha = 2\nq = 6\nR_list = 16,32\n");
    CHECK_THROWS_WITH(run_ratio(noseed, 1), doctest::Contains("seed"));
}

TEST_CASE("sweeps need increasing radii") {
    Config c = Config::parse_string("weight = Y_b:b=0.5\nq = 5\nR_list = 32,16\n");
    CHECK_THROWS(run_sharpness(c, 1));
    Config one = Config::parse_string("weight = Y_b:b=0.5\nq = 5\nR_list = 32\n");
    CHECK_THROWS(run_sharpness(one, 1));
}

TEST_CASE("sharpness with Y_1/2 at q = 6") {
    ScenarioResult r = run_sharpness(Config::parse_string("weight = Y_b:b=0.5\nq = 6\nR_list = 16..256\n"), 0);
    CHECK(summary(r, "expected_slope") == doctest::Approx(-0.5 + 1.25 / 6));
    CHECK(std::abs(summary(r, "slope") - summary(r, "expected_slope")) <= 0.05);
    CHECK(r.exit_code == 0);

    // brute-force norm at R = 64: cells of side 1/2 with centers in the ball
    const double R = 64, h = 0.5, q = 6;
    Weight H = parse_weight("Y_b:b=0.5", 2);
    auto chart = knapp_chart(SurfaceKind::circle, 2, R, 0.1, kResolution / (1 + R));
    KnappCap k = build_knapp(chart, R, 0.1);
    std::vector<double> pts, wts;
    double hv[2] = {h, h};
    for (double x = -R + h / 2; x < R; x += h)
        for (double y = -R + h / 2; y < R; y += h) {
            double c[2] = {x, y};
            double w = H.cell_average(c, hv);
            if (x * x + y * y <= R * R && w > 0.0) {
                pts.insert(pts.end(), {x, y});
                wts.push_back(w);
            }
        }
    auto E = evaluate_extension(k.density, pts);
    double s = 0.0;
    for (std::size_t i = 0; i < E.size(); ++i) s += std::pow(std::abs(E[i]), q) * wts[i];
    double brute = std::pow(s * h * h, 1 / q);
    std::size_t row = 2;
    REQUIRE(column(r, row, "R") == R);
    CHECK(column(r, row, "norm") == doctest::Approx(brute).epsilon(1e-9));
}

TEST_CASE("unstabilized fits are soft failures") {
    // two points always fit exactly; a wrong expected slope fails softly
    ScenarioResult r = run_sharpness(
        Config::parse_string("weight = X_b:b=0.25\nq = 4\nR_list = 16,32\nexpected_slope = 1\n"), 1);
    CHECK(r.exit_code == 2);
    CHECK(r.summary_value("pass") == "0");
}

TEST_CASE("decay of a smooth density") {
    ScenarioResult r = run_decay(
        Config::parse_string("measure = gaussian\nsigma = 0.08\nh = 0.0078125\nR_list = 4,8,16\n"), 0);
    // smooth densities decay faster than any power, so only the one-sided bound applies
    CHECK(summary(r, "slope") <= -0.5 + 0.1);
}

TEST_CASE("decay scenario reproduces the bump rate") {
    ScenarioResult r = run_decay(Config::parse_string("measure = bump\nalpha = 1.5\nR_list = 8..128\nexpected_slope = -0.75\n"), 0);
    CHECK(r.exit_code == 0);
    CHECK(std::abs(summary(r, "slope") + 0.75) <= 0.1);
}

TEST_CASE("hoelder scenario") {
    ScenarioResult r = run_hoelder(Config::parse_string("trials = 10\nseed = 9\n"), 0);
    CHECK(r.exit_code == 0);
    CHECK(summary(r, "saturation_alpha") == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(summary(r, "iterate_worst_residual") < 1e-9);
}

TEST_CASE("same seed, different thread counts, same bytes") {
    Config c = Config::parse_string("weight = X_b:b=0.25\nalpha = 0.75\nq = 3.5\nR_list = 16,32\nensemble = 4\nseed = 3\n");
    std::string a = run_ratio(c, 1).csv();
    std::string b = run_ratio(c, 3).csv();
    CHECK(a == b);
    Config d = Config::parse_string("depths = 3,4\nseed = 2\n");
    CHECK(run_duzhang(d, 1).csv() == run_duzhang(d, 2).csv());
}

TEST_CASE("unknown scenarios are hard errors") {
    CHECK_THROWS(run_scenario("nope", Config{}, 1));
}
