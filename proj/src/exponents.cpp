#include "rlab/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rlab {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::domain_error("exponents: " + msg); }

void check_n(int n) {
    if (n < 2) fail("n must be >= 2");
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

// the four formulas of the upper-bound table
double m1_small() { return 2.0; }
double m1_mid(int n, double a) { return 4.0 * a / (n - 1); }
double m1_plane(double a) { return 2.0 * a + 2.0; }
double m1_high(int n, double a) { return 2.0 * n / (n - 1) + 2.0 - n / a; }

}  // namespace

Threshold main1_threshold(int n, double alpha, bool extended) {
    check_n(n);
    if (!(alpha > 0.0)) fail("alpha must be positive");
    double lo = (n - 1) / 2.0, mid = n / 2.0;
    if (alpha < lo) return {m1_small(), false, "0 < alpha < (n-1)/2"};
    if (alpha <= mid) return {m1_mid(n, alpha), false, "(n-1)/2 <= alpha <= n/2"};
    if (n == 2) {
        if (alpha < 2.0) return {m1_plane(alpha), false, "n = 2, 1 < alpha < 2"};
        fail("alpha = " + num(alpha) + " outside 0 < alpha < 2 for n = 2");
    }
    double top = extended ? n : (n + 1) / 2.0;
    if (alpha <= top) return {m1_high(n, alpha), false, "n >= 3, n/2 < alpha <= " + num(top)};
    fail("alpha = " + num(alpha) + " outside 0 < alpha <= " + num(top) + " for n = " + std::to_string(n));
}

Threshold main2_lower(int n, double alpha) {
    check_n(n);
    if (!(alpha > 0.0 && alpha <= n)) fail("alpha must lie in (0, n]");
    if (n == 2) {
        // the (2 alpha + 2)/(n - 1) line is only used above alpha = 1 in the plane
        if (alpha < 0.5) return {2.0, true, "n = 2, 0 < alpha < 1/2"};
        if (alpha <= 1.0) return {4.0 * alpha, true, "n = 2, 1/2 <= alpha <= 1"};
        return {2.0 * alpha + 2.0, true, "n = 2, 1 < alpha <= 2"};
    }
    if (alpha <= n - 2) return {2.0, true, "n >= 3, 0 < alpha <= n-2"};
    return {(2.0 * alpha + 2.0) / (n - 1), true, "n-2 < alpha <= n"};
}

Threshold main3_lower(int n, double alpha) {
    check_n(n);
    if (!(alpha > 0.0 && alpha <= n)) fail("alpha must lie in (0, n]");
    if (n == 2) {
        if (alpha <= 1.0 / 6.0) return {0.5, true, "n = 2, 0 < alpha <= 1/6"};
        if (alpha <= 1.0) return {3.0 * alpha, true, "n = 2, 1/6 <= alpha <= 1"};
        return {alpha + 2.0, true, "n = 2, 1 <= alpha <= 2"};
    }
    double b = (n - 1.0) * (n - 1.0) / (2.0 * n);
    if (alpha <= b) return {(n - 1.0) / n, true, "n >= 3, 0 < alpha <= (n-1)^2/(2n)"};
    return {2.0 * alpha / (n - 1), true, "n >= 3, (n-1)^2/(2n) <= alpha <= n"};
}

BaseThresholds base_thresholds(int n, double alpha) {
    check_n(n);
    if (!(alpha > 0.0 && alpha < (n - 1) / 2.0)) fail("base thresholds need 0 < alpha < (n-1)/2");
    BaseThresholds b;
    b.q_i = 2.0;
    b.q_ii = (n + 1.0 - 2.0 * alpha) / (n - 2.0 * alpha);
    b.A_coef = 1.0 / (n - 2.0 * alpha);
    b.H_coef = (n - 1.0 - 2.0 * alpha) / (n - 2.0 * alpha);
    return b;
}

SimbaseThreshold simbase_threshold(int n, double alpha, double eps) {
    if (n < 3) fail("simbase needs n >= 3");
    if (!(alpha >= 1.0 && alpha <= n)) fail("simbase needs 1 <= alpha <= n");
    if (!(eps >= 0.0)) fail("epsilon must be >= 0");
    double nn = static_cast<double>(n) * n;
    SimbaseThreshold s;
    s.q = 2.0 * (nn + 3.0 * n - 2.0 * alpha) / (nn + n - 2.0 * alpha);
    double d = (n + 1.0) / 2.0 - alpha / n - eps;
    if (!(d > 0.0)) fail("epsilon too large");
    s.A_exponent = 1.0 / d;
    return s;
}

double crossover_alpha(int n) {
    if (n < 3) fail("crossover needs n >= 3");
    double x = n;
    double radical = (x * x + 1.0 - std::sqrt(x * x * x * x - 4.0 * x * x * x + 2.0 * x * x + 4.0 * x + 1.0)) / 4.0;
    double simple = (x + 1.0) / 2.0;
    if (std::abs(radical - simple) > 1e-9) fail("radical form disagrees with (n+1)/2");
    return simple;
}

DZExponents dz_exponents(int n, double alpha) {
    check_n(n);
    if (!(alpha > 0.0 && alpha <= n)) fail("alpha must lie in (0, n]");
    DZExponents d;
    d.gamma_exponent = alpha / (2.0 * n);
    d.weight_exponent = alpha / n;
    if (alpha <= (n - 1) / 2.0) {
        d.e = 0.0;
        d.e_defined = true;
    } else if (alpha <= n / 2.0) {
        d.e = alpha / 2.0 - (n - 1) / 4.0;
        d.e_defined = true;
    } else {
        d.e = std::numeric_limits<double>::quiet_NaN();
    }
    return d;
}

Interpolation interpolation_p(int n, double alpha) {
    if (n < 3) fail("interpolation needs n >= 3");
    // at alpha = n/2 every p gives the same q0; the formula value is kept
    if (!(alpha >= n / 2.0 && alpha <= n)) fail("interpolation needs n/2 <= alpha <= n");
    Interpolation r;
    r.p = 2.0 * n / (n - 1) - n / alpha;
    r.alpha_prime = (1.0 - (n - 1.0) / (2.0 * n) * r.p) * alpha;
    return r;
}

TableRow table_row(int n, double alpha, bool extended) {
    TableRow r;
    r.n = n;
    r.alpha = alpha;
    auto attempt = [](auto&& fn, double& out, bool& has) {
        try {
            out = fn();
            has = true;
        } catch (const std::domain_error&) {
            has = false;
        }
    };
    attempt([&] { return main1_threshold(n, alpha, extended).value; }, r.main1, r.has_main1);
    attempt([&] { return main2_lower(n, alpha).value; }, r.main2, r.has_main2);
    attempt([&] { return main3_lower(n, alpha).value; }, r.main3, r.has_main3);
    attempt([&] { return simbase_threshold(n, alpha).q; }, r.simbase, r.has_simbase);
    attempt([&] { return base_thresholds(n, alpha).q_ii; }, r.q_ii, r.has_q_ii);
    attempt(
        [&] {
            auto d = dz_exponents(n, alpha);
            if (!d.e_defined) throw std::domain_error("e");
            return d.e;
        },
        r.e_alpha, r.has_e);
    attempt([&] { return interpolation_p(n, alpha).p; }, r.p_interp, r.has_p);

    // formula mismatch at boundaries this alpha sits on
    auto on = [alpha](double b) { return std::abs(alpha - b) < 1e-12; };
    double g = 0.0;
    if (on((n - 1) / 2.0)) g = std::max(g, std::abs(m1_small() - m1_mid(n, alpha)));
    if (on(n / 2.0)) g = std::max(g, std::abs(m1_mid(n, alpha) - (n == 2 ? m1_plane(alpha) : m1_high(n, alpha))));
    if (n == 2) {
        if (on(1.0 / 6.0)) g = std::max(g, std::abs(0.5 - 3.0 * alpha));
        if (on(1.0)) g = std::max(g, std::abs(3.0 * alpha - (alpha + 2.0)));
    } else if (on((n - 1.0) * (n - 1.0) / (2.0 * n))) {
        g = std::max(g, std::abs((n - 1.0) / n - 2.0 * alpha / (n - 1)));
    }
    r.boundary_gap = g;
    return r;
}

double boundary_gap(int n) {
    std::vector<double> pts{(n - 1) / 2.0, n / 2.0};
    if (n == 2) {
        pts.push_back(1.0 / 6.0);
        pts.push_back(1.0);
    } else {
        pts.push_back((n - 1.0) * (n - 1.0) / (2.0 * n));
    }
    double g = 0.0;
    for (double a : pts) g = std::max(g, table_row(n, a, true).boundary_gap);
    return g;
}

}  // namespace rlab
