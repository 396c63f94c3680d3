#include "rlab/weights.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rlab/parallel.hpp"

namespace rlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("weights: " + msg); }

double overlap(double a0, double a1, double b0, double b1) {
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

// Calls fn(a, c) for each slab [l^(1/b), 1 + l^(1/b)], l >= 1, meeting [lo, hi].
template <class Fn>
void for_each_slab(double lo, double hi, double b, Fn&& fn) {
    if (hi < 1.0) return;
    double start = std::max(0.0, lo - 1.0);
    auto l = static_cast<long>(std::max(1.0, std::floor(std::pow(start, b))));
    for (;; ++l) {
        double a = std::pow(static_cast<double>(l), 1.0 / b);
        if (a > hi) break;
        if (a + 1.0 >= lo) fn(a, a + 1.0);
    }
}

double slab_overlap(double y0, double y1, double b) {
    double s = 0.0;
    for_each_slab(y0, y1, b, [&](double a, double c) { s += overlap(y0, y1, a, c); });
    return s;
}

bool in_slabs(double y, double b) {
    bool hit = false;
    for_each_slab(y, y, b, [&](double a, double c) { hit = hit || (y >= a && y <= c); });
    return hit;
}

// integral of 2 sqrt(R^2 - t^2) over t in [t0, t1]
double chord_area(double t0, double t1, double R) {
    auto F = [R](double t) {
        t = std::clamp(t, -R, R);
        return t * std::sqrt(std::max(0.0, R * R - t * t)) + R * R * std::asin(t / R);
    };
    return t1 > t0 ? F(t1) - F(t0) : 0.0;
}

// integral of pi (R^2 - t^2) over t in [t0, t1]
double disk_volume(double t0, double t1, double R) {
    t0 = std::max(t0, -R);
    t1 = std::min(t1, R);
    if (t1 <= t0) return 0.0;
    auto F = [R](double t) { return kPi * (R * R * t - t * t * t / 3.0); };
    return F(t1) - F(t0);
}

double ball_volume(int n, double R) {
    return std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0 + 1.0) * std::pow(R, n);
}

template <class F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                   int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

template <class F>
double adaptive_simpson(F f, double a, double b, double tol) {
    if (b <= a) return 0.0;
    // a fixed pre-split keeps narrow features from being stepped over
    const int pieces = 16;
    double s = 0.0;
    for (int i = 0; i < pieces; ++i) {
        double x0 = a + (b - a) * i / pieces, x1 = a + (b - a) * (i + 1) / pieces;
        double f0 = f(x0), f1 = f(x1), fm = f(0.5 * (x0 + x1));
        double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        s += simpson_rec(f, x0, x1, f0, fm, f1, whole, tol / pieces, 40);
    }
    return s;
}

double x_b_ball_mass(double b, double x0, double y0, double R) {
    auto len = [&](double x) {
        if (x <= 0.0) return 0.0;
        double w2 = R * R - (x - x0) * (x - x0);
        if (w2 <= 0.0) return 0.0;
        double w = std::sqrt(w2);
        double top = b == 0.0 ? 1.0 : std::pow(x, -b);
        return overlap(y0 - w, y0 + w, 0.0, top);
    };
    return adaptive_simpson(len, std::max(0.0, x0 - R), x0 + R, 1e-9 * R * R);
}

// exact mean of chi_{X_b} over [x0,x1] x [y0,y1]
double x_b_cell(double b, double x0, double x1, double y0, double y1) {
    double u = std::max(x0, 0.0), v = x1;
    double lo = std::max(y0, 0.0), hi = y1;
    double area = (x1 - x0) * (y1 - y0);
    if (v <= u || hi <= lo) return 0.0;
    if (b == 0.0) return (v - u) * overlap(lo, hi, 0.0, 1.0) / area;
    double a = std::pow(hi, -1.0 / b);                   // x^-b >= hi for x <= a
    double c = lo > 0.0 ? std::pow(lo, -1.0 / b) : kInf;  // x^-b <= lo for x >= c
    auto G = [b](double x) { return b == 1.0 ? std::log(x) : std::pow(x, 1.0 - b) / (1.0 - b); };
    double s = (hi - lo) * std::max(0.0, std::min(v, a) - u);
    double p = std::max(u, a), q = std::min(v, c);
    if (q > p) s += G(q) - G(p) - lo * (q - p);
    return s / area;
}

long ipow(long base, int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

std::size_t cube_index(const CubeSet& X, const long* k) {
    std::size_t idx = 0;
    for (int a = X.n - 1; a >= 0; --a) idx = idx * static_cast<std::size_t>(X.R) + static_cast<std::size_t>(k[a] - X.lower());
    return idx;
}

std::shared_ptr<std::vector<std::uint8_t>> build_occupancy(const CubeSet& X) {
    auto occ = std::make_shared<std::vector<std::uint8_t>>(static_cast<std::size_t>(ipow(X.R, X.n)), 0);
    for (std::size_t i = 0; i < X.size(); ++i) (*occ)[cube_index(X, &X.corners[i * X.n])] = 1;
    return occ;
}

}  // namespace

// ---------------------------------------------------------------- Polynomial

double Polynomial::operator()(const double* x) const {
    double s = 0.0;
    for (const auto& t : terms) {
        double v = t.coef;
        for (int i = 0; i < n; ++i)
            for (int p = 0; p < t.powers[i]; ++p) v *= x[i];
        s += v;
    }
    return s;
}

void Polynomial::gradient(const double* x, double* g) const {
    for (int i = 0; i < n; ++i) g[i] = 0.0;
    for (const auto& t : terms) {
        for (int d = 0; d < n; ++d) {
            if (t.powers[d] == 0) continue;
            double v = t.coef * t.powers[d];
            for (int i = 0; i < n; ++i) {
                int e = t.powers[i] - (i == d ? 1 : 0);
                for (int p = 0; p < e; ++p) v *= x[i];
            }
            g[d] += v;
        }
    }
}

int Polynomial::degree() const {
    int d = 0;
    for (const auto& t : terms) {
        int s = 0;
        for (int p : t.powers) s += p;
        if (t.coef != 0.0) d = std::max(d, s);
    }
    return d;
}

Polynomial Polynomial::parse(const std::string& text, int n) {
    if (text == "circle") return parse("x0^2 + x1^2 - 1", n);
    if (text == "sphere") return parse("x0^2 + x1^2 + x2^2 - 1", n);
    if (text == "parabola") return parse("x1 - x0^2", n);
    Polynomial P;
    P.n = n;
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    std::size_t i = 0;
    auto number = [&]() {
        std::size_t j = i;
        while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.' || s[j] == 'e' ||
                                ((s[j] == '-' || s[j] == '+') && j > i && s[j - 1] == 'e')))
            ++j;
        if (j == i) fail("polynomial: expected a number at '" + s.substr(i) + "'");
        double v = std::stod(s.substr(i, j - i));
        i = j;
        return v;
    };
    while (i < s.size()) {
        double sign = 1.0;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1.0 : 1.0;
            ++i;
        } else if (!P.terms.empty()) {
            fail("polynomial: expected '+' or '-' in '" + text + "'");
        }
        Term t;
        t.coef = sign;
        t.powers.assign(n, 0);
        for (;;) {
            if (i < s.size() && s[i] == 'x') {
                ++i;
                auto var = static_cast<int>(number());
                if (var < 0 || var >= n) fail("polynomial: variable index out of range");
                int e = 1;
                if (i < s.size() && s[i] == '^') {
                    ++i;
                    e = static_cast<int>(number());
                }
                t.powers[var] += e;
            } else {
                t.coef *= number();
            }
            if (i < s.size() && s[i] == '*') {
                ++i;
                continue;
            }
            break;
        }
        P.terms.push_back(t);
    }
    if (P.terms.empty()) fail("polynomial: empty expression");
    return P;
}

// ---------------------------------------------------------------- cube sets

CubeSet make_cube_set(int n, long R, std::vector<long> corners) {
    if (n < 1) fail("cube set: dimension must be positive");
    if (R < 1) fail("cube set: R must be >= 1");
    if (corners.size() % n) fail("cube set: corner list length not a multiple of n");
    CubeSet X;
    X.n = n;
    X.R = R;
    long lo = X.lower(), hi = lo + R - 1;
    std::vector<std::vector<long>> rows;
    for (std::size_t i = 0; i < corners.size(); i += n) {
        std::vector<long> c(corners.begin() + static_cast<long>(i), corners.begin() + static_cast<long>(i) + n);
        for (long v : c)
            if (v < lo || v > hi) fail("cube set: cube outside the enclosing cube of side " + std::to_string(R));
        rows.push_back(std::move(c));
    }
    std::sort(rows.begin(), rows.end());
    if (std::adjacent_find(rows.begin(), rows.end()) != rows.end()) fail("cube set: duplicate cube");
    for (auto& r : rows) X.corners.insert(X.corners.end(), r.begin(), r.end());
    return X;
}

CubeSet full_cube_set(int n, long R) {
    std::vector<long> corners;
    long total = ipow(R, n);
    for (long idx = 0; idx < total; ++idx) {
        long rem = idx;
        for (int a = 0; a < n; ++a) {
            corners.push_back(rem % R - R / 2);
            rem /= R;
        }
    }
    return make_cube_set(n, R, std::move(corners));
}

CubeSet cantor_rows(int depth) {
    if (depth < 0 || depth > 20) fail("cantor_rows: depth out of range");
    long R = 1L << depth;
    long even_mask = 0, odd_mask = 0;
    for (int k = 0; k < depth; ++k) (k % 2 == 0 ? even_mask : odd_mask) |= (1L << k);
    std::vector<long> corners;
    for (long j = 0; j < R; ++j) {
        if (j & even_mask) continue;
        for (long i = 0; i < R; ++i) {
            if (i & odd_mask) continue;
            corners.push_back(i - R / 2);
            corners.push_back(j - R / 2);
        }
    }
    return make_cube_set(2, R, std::move(corners));
}

void write_cubes_csv(std::ostream& os, const CubeSet& X) {
    os << "# R=" << X.R << "\n";
    for (std::size_t i = 0; i < X.size(); ++i) {
        for (int a = 0; a < X.n; ++a) os << (a ? "," : "") << X.corners[i * X.n + a];
        os << "\n";
    }
}

CubeSet read_cubes_csv(std::istream& is, int n, long R) {
    std::vector<long> corners;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto p = line.find("R=");
            if (p != std::string::npos && R == 0) R = std::stol(line.substr(p + 2));
            continue;
        }
        std::stringstream ss(line);
        std::string tok;
        int count = 0;
        while (std::getline(ss, tok, ',')) {
            corners.push_back(std::stol(tok));
            ++count;
        }
        if (count != n) fail("cube csv: expected " + std::to_string(n) + " coordinates per line");
    }
    if (R == 0) {
        long m = 1;
        for (long c : corners) m = std::max(m, std::max(2 * (c + 1), -2 * c));
        R = m;
    }
    return make_cube_set(n, R, std::move(corners));
}

// ---------------------------------------------------------------- Weight

std::string to_string(WeightFamily f) {
    switch (f) {
        case WeightFamily::X_b: return "X_b";
        case WeightFamily::Y_b: return "Y_b";
        case WeightFamily::Omega: return "Omega";
        case WeightFamily::Omega_b_R3: return "Omega_b_R3";
        case WeightFamily::Omega_b_Rn: return "Omega_b_Rn";
        case WeightFamily::variety_nbhd: return "variety_nbhd";
        case WeightFamily::cube_set: return "cube_set";
        case WeightFamily::constant_one: return "constant_one";
        case WeightFamily::sampled: return "sampled";
    }
    return "?";
}

WeightFamily parse_weight_family(const std::string& s) {
    for (auto f : {WeightFamily::X_b, WeightFamily::Y_b, WeightFamily::Omega, WeightFamily::Omega_b_R3,
                   WeightFamily::Omega_b_Rn, WeightFamily::variety_nbhd, WeightFamily::cube_set,
                   WeightFamily::constant_one, WeightFamily::sampled})
        if (to_string(f) == s) return f;
    fail("unknown family '" + s + "'");
}

double Weight::value(const double* x) const {
    switch (family) {
        case WeightFamily::X_b: {
            if (x[0] <= 0.0 || x[1] < 0.0) return 0.0;
            double top = params.b == 0.0 ? 1.0 : std::pow(x[0], -params.b);
            return x[1] <= top ? 1.0 : 0.0;
        }
        case WeightFamily::Y_b: return in_slabs(x[1], params.b) ? 1.0 : 0.0;
        case WeightFamily::Omega: {
            double r2 = 0.0;
            for (int i = 0; i < n - 1; ++i) r2 += x[i] * x[i];
            if (n == 2) return std::abs(x[1]) <= 1.0 ? 1.0 : 0.0;
            if (r2 == 0.0) return 1.0;
            return std::abs(x[n - 1]) <= std::pow(r2, 0.5 * (1.0 - n / 2.0)) ? 1.0 : 0.0;
        }
        case WeightFamily::Omega_b_R3: return in_slabs(x[2], params.b) ? 1.0 : 0.0;
        case WeightFamily::Omega_b_Rn:
            for (int i = 1; i < n; ++i)
                if (!in_slabs(x[i], params.b)) return 0.0;
            return 1.0;
        case WeightFamily::variety_nbhd: {
            if (!params.region.contains(x)) return 0.0;
            std::vector<double> g(n);
            params.P.gradient(x, g.data());
            double gn = 0.0;
            for (double v : g) gn += v * v;
            return std::abs(params.P(x)) <= params.rho * std::max(1.0, std::sqrt(gn)) ? 1.0 : 0.0;
        }
        case WeightFamily::cube_set: {
            const CubeSet& X = *params.cubes;
            std::vector<long> k(n);
            for (int a = 0; a < n; ++a) {
                k[a] = static_cast<long>(std::floor(x[a]));
                if (k[a] < X.lower() || k[a] >= X.lower() + X.R) return 0.0;
            }
            return (*occupancy)[cube_index(X, k.data())];
        }
        case WeightFamily::constant_one: return 1.0;
        case WeightFamily::sampled: {
            const RealGrid& g = *params.samples;
            std::vector<std::size_t> k(n);
            for (int a = 0; a < n; ++a) {
                double t = std::floor((x[a] - g.grid.lo[a]) / g.grid.h[a] + 0.5);
                if (t < 0.0 || t >= static_cast<double>(g.grid.count[a])) return 0.0;
                k[a] = static_cast<std::size_t>(t);
            }
            return g.values[g.grid.flat(k.data())];
        }
    }
    return 0.0;
}

double Weight::cell_average(const double* c, const double* h) const {
    switch (family) {
        case WeightFamily::X_b:
            return x_b_cell(params.b, c[0] - h[0] / 2, c[0] + h[0] / 2, c[1] - h[1] / 2, c[1] + h[1] / 2);
        case WeightFamily::Y_b: return slab_overlap(c[1] - h[1] / 2, c[1] + h[1] / 2, params.b) / h[1];
        case WeightFamily::Omega: {
            if (n == 2) return overlap(c[1] - h[1] / 2, c[1] + h[1] / 2, -1.0, 1.0) / h[1];
            // subsample the base, exact along x_n
            const int s = 6;
            int m = n - 1;
            std::size_t total = 1;
            for (int a = 0; a < m; ++a) total *= s;
            double acc = 0.0;
            for (std::size_t idx = 0; idx < total; ++idx) {
                std::size_t rem = idx;
                double r2 = 0.0;
                for (int a = 0; a < m; ++a) {
                    double x = c[a] + h[a] * ((static_cast<double>(rem % s) + 0.5) / s - 0.5);
                    rem /= s;
                    r2 += x * x;
                }
                double half = r2 > 0.0 ? std::pow(r2, 0.5 * (1.0 - n / 2.0)) : kInf;
                acc += overlap(c[m] - h[m] / 2, c[m] + h[m] / 2, -half, half) / h[m];
            }
            return acc / static_cast<double>(total);
        }
        case WeightFamily::Omega_b_R3: return slab_overlap(c[2] - h[2] / 2, c[2] + h[2] / 2, params.b) / h[2];
        case WeightFamily::Omega_b_Rn: {
            double v = 1.0;
            for (int a = 1; a < n; ++a) v *= slab_overlap(c[a] - h[a] / 2, c[a] + h[a] / 2, params.b) / h[a];
            return v;
        }
        case WeightFamily::cube_set: {
            const CubeSet& X = *params.cubes;
            std::vector<long> klo(n), khi(n), k(n);
            for (int a = 0; a < n; ++a) {
                klo[a] = std::max(X.lower(), static_cast<long>(std::floor(c[a] - h[a] / 2)));
                khi[a] = std::min(X.lower() + X.R - 1, static_cast<long>(std::ceil(c[a] + h[a] / 2)) - 1);
                if (khi[a] < klo[a]) return 0.0;
                k[a] = klo[a];
            }
            double vol = 1.0;
            for (int a = 0; a < n; ++a) vol *= h[a];
            double acc = 0.0;
            for (;;) {
                if ((*occupancy)[cube_index(X, k.data())]) {
                    double v = 1.0;
                    for (int a = 0; a < n; ++a)
                        v *= overlap(c[a] - h[a] / 2, c[a] + h[a] / 2, static_cast<double>(k[a]),
                                     static_cast<double>(k[a] + 1));
                    acc += v;
                }
                int a = 0;
                while (a < n) {
                    if (k[a] < khi[a]) {
                        ++k[a];
                        break;
                    }
                    k[a] = klo[a];
                    ++a;
                }
                if (a == n) break;
            }
            return acc / vol;
        }
        case WeightFamily::constant_one: return 1.0;
        case WeightFamily::sampled: {
            const RealGrid& g = *params.samples;
            std::vector<std::size_t> klo(n), khi(n), k(n);
            for (int a = 0; a < n; ++a) {
                double e0 = g.grid.lo[a] - 0.5 * g.grid.h[a];
                double tlo = std::floor((c[a] - h[a] / 2 - e0) / g.grid.h[a]);
                double thi = std::ceil((c[a] + h[a] / 2 - e0) / g.grid.h[a]) - 1.0;
                tlo = std::max(tlo, 0.0);
                thi = std::min(thi, static_cast<double>(g.grid.count[a]) - 1.0);
                if (thi < tlo) return 0.0;
                klo[a] = static_cast<std::size_t>(tlo);
                khi[a] = static_cast<std::size_t>(thi);
                k[a] = klo[a];
            }
            double vol = 1.0;
            for (int a = 0; a < n; ++a) vol *= h[a];
            double acc = 0.0;
            for (;;) {
                double v = g.values[g.grid.flat(k.data())];
                if (v != 0.0) {
                    for (int a = 0; a < n; ++a) {
                        double x = g.grid.lo[a] + static_cast<double>(k[a]) * g.grid.h[a];
                        v *= overlap(c[a] - h[a] / 2, c[a] + h[a] / 2, x - g.grid.h[a] / 2, x + g.grid.h[a] / 2);
                    }
                    acc += v;
                }
                int a = 0;
                while (a < n) {
                    if (k[a] < khi[a]) {
                        ++k[a];
                        break;
                    }
                    k[a] = klo[a];
                    ++a;
                }
                if (a == n) break;
            }
            return acc / vol;
        }
        case WeightFamily::variety_nbhd: break;
    }
    // midpoint subsampling
    const int s = 4;
    std::size_t total = 1;
    for (int a = 0; a < n; ++a) total *= s;
    std::vector<double> x(n);
    double acc = 0.0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (int a = 0; a < n; ++a) {
            x[a] = c[a] + h[a] * ((static_cast<double>(rem % s) + 0.5) / s - 0.5);
            rem /= s;
        }
        acc += value(x.data());
    }
    return acc / static_cast<double>(total);
}

std::optional<Box> Weight::support() const {
    switch (family) {
        case WeightFamily::variety_nbhd: return params.region;
        case WeightFamily::cube_set: {
            const CubeSet& X = *params.cubes;
            Box b{std::vector<double>(n, kInf), std::vector<double>(n, -kInf)};
            for (std::size_t i = 0; i < X.size(); ++i)
                for (int a = 0; a < n; ++a) {
                    auto v = static_cast<double>(X.corners[i * n + a]);
                    b.lo[a] = std::min(b.lo[a], v);
                    b.hi[a] = std::max(b.hi[a], v + 1.0);
                }
            return b;
        }
        case WeightFamily::sampled: return params.samples->grid.extent();
        default: return std::nullopt;
    }
}

double Weight::feature_scale() const {
    switch (family) {
        case WeightFamily::variety_nbhd: return params.rho / 8.0;
        case WeightFamily::cube_set: return 1.0;
        case WeightFamily::sampled: return *std::min_element(params.samples->grid.h.begin(), params.samples->grid.h.end());
        case WeightFamily::X_b: return 0.25;
        default: return 0.5;
    }
}

bool Weight::has_closed_ball_mass() const {
    switch (family) {
        case WeightFamily::X_b:
        case WeightFamily::Y_b:
        case WeightFamily::Omega_b_R3:
        case WeightFamily::constant_one: return true;
        case WeightFamily::Omega:
        case WeightFamily::Omega_b_Rn: return n == 2;
        default: return false;
    }
}

bool Weight::separable() const {
    switch (family) {
        case WeightFamily::Y_b:
        case WeightFamily::Omega_b_R3:
        case WeightFamily::Omega_b_Rn:
        case WeightFamily::constant_one: return true;
        case WeightFamily::Omega: return n == 2;
        default: return false;
    }
}

double Weight::axis_average(int axis, double c, double h) const {
    double lo = c - h / 2, hi = c + h / 2;
    switch (family) {
        case WeightFamily::Y_b: return axis == 1 ? slab_overlap(lo, hi, params.b) / h : 1.0;
        case WeightFamily::Omega_b_R3: return axis == 2 ? slab_overlap(lo, hi, params.b) / h : 1.0;
        case WeightFamily::Omega_b_Rn: return axis >= 1 ? slab_overlap(lo, hi, params.b) / h : 1.0;
        case WeightFamily::Omega:
            if (n == 2) return axis == 1 ? overlap(lo, hi, -1.0, 1.0) / h : 1.0;
            break;
        case WeightFamily::constant_one: return 1.0;
        default: break;
    }
    fail(to_string(family) + " is not separable");
}

Weight make_weight(WeightFamily family, int n, const WeightParams& p) {
    Weight w;
    w.n = n;
    w.family = family;
    w.params = p;
    if (n < 1) fail("dimension must be positive");
    switch (family) {
        case WeightFamily::X_b:
            if (n != 2) fail("X_b lives in the plane");
            if (!(p.b >= 0.0 && p.b <= 1.0)) fail("X_b needs 0 <= b <= 1");
            if (p.b < 1.0) {
                w.nominal_alpha = 1.0 - p.b;
            } else {
                // X_1 has every dimension in (0, 2]; the caller picks one
                if (!(p.alpha > 0.0 && p.alpha <= 2.0)) fail("X_1 needs an explicit alpha in (0, 2]");
                w.nominal_alpha = p.alpha;
            }
            break;
        case WeightFamily::Y_b:
            if (n != 2) fail("Y_b lives in the plane");
            if (!(p.b > 0.0 && p.b < 1.0)) fail("Y_b needs 0 < b < 1");
            w.nominal_alpha = 1.0 + p.b;
            break;
        case WeightFamily::Omega:
            if (n < 2) fail("Omega needs n >= 2");
            w.nominal_alpha = n / 2.0;
            break;
        case WeightFamily::Omega_b_R3:
            if (n != 3) fail("Omega_b_R3 lives in R^3");
            if (!(p.b > 0.0 && p.b <= 1.0)) fail("Omega_b_R3 needs 0 < b <= 1");
            w.nominal_alpha = 2.0 + p.b;
            break;
        case WeightFamily::Omega_b_Rn:
            if (n < 2) fail("Omega_b_Rn needs n >= 2");
            if (!(p.b > 0.0 && p.b <= 1.0)) fail("Omega_b_Rn needs 0 < b <= 1");
            w.nominal_alpha = 1.0 + (n - 1) * p.b;
            break;
        case WeightFamily::variety_nbhd:
            if (!(p.rho > 0.0 && p.rho <= 1.0)) fail("variety_nbhd needs 0 < rho <= 1");
            if (p.P.n != n || p.P.terms.empty()) fail("variety_nbhd needs a polynomial in n variables");
            if (p.P.degree() < 1) fail("variety_nbhd needs a nonconstant polynomial");
            if (p.region.dim() != n) fail("variety_nbhd needs a bounding region");
            if (p.degree == 0) w.params.degree = p.P.degree();
            w.nominal_alpha = n - 1.0;  // hypersurface zero sets only
            break;
        case WeightFamily::cube_set:
            if (!p.cubes || p.cubes->size() == 0) fail("cube_set needs a nonempty cube set");
            if (p.cubes->n != n) fail("cube_set dimension mismatch");
            w.nominal_alpha = p.alpha > 0.0 ? p.alpha : n;
            w.occupancy = build_occupancy(*p.cubes);
            break;
        case WeightFamily::constant_one: w.nominal_alpha = n; break;
        case WeightFamily::sampled:
            if (!p.samples || p.samples->grid.dim() != n) fail("sampled weight needs an n-dimensional grid");
            for (double v : p.samples->values)
                if (!(v >= 0.0 && v <= 1.0)) fail("sampled weight values must lie in [0,1]");
            w.nominal_alpha = p.alpha > 0.0 ? p.alpha : n;
            break;
    }
    if (!(w.nominal_alpha > 0.0 && w.nominal_alpha <= n)) fail("nominal alpha outside (0, n]");
    return w;
}

Weight parse_weight(const std::string& spec, int n) {
    auto colon = spec.find(':');
    WeightFamily fam = parse_weight_family(spec.substr(0, colon));
    WeightParams p;
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            auto eq = tok.find('=');
            if (eq == std::string::npos) fail("weight spec: expected key=value in '" + tok + "'");
            kv[tok.substr(0, eq)] = tok.substr(eq + 1);
        }
    }
    for (auto& [k, v] : kv) {
        if (k == "b") p.b = std::stod(v);
        else if (k == "rho") p.rho = std::stod(v);
        else if (k == "P") p.P = Polynomial::parse(v, n);
        else if (k == "D") p.degree = std::stoi(v);
        else if (k == "alpha") p.alpha = std::stod(v);
        else if (k == "box") {
            auto c = v.find(':');
            if (c == std::string::npos) fail("weight spec: box=lo:hi");
            p.region = cube_box(n, std::stod(v.substr(0, c)), std::stod(v.substr(c + 1)));
        } else if (k == "cantor_depth") {
            p.cubes = std::make_shared<CubeSet>(cantor_rows(std::stoi(v)));
        } else if (k == "full") {
            p.cubes = std::make_shared<CubeSet>(full_cube_set(n, std::stol(v)));
        } else fail("weight spec: unknown key '" + k + "'");
    }
    return make_weight(fam, n, p);
}

Weight weight_from_cubes(const CubeSet& X, double alpha) {
    WeightParams p;
    p.cubes = std::make_shared<CubeSet>(X);
    p.alpha = alpha;
    return make_weight(WeightFamily::cube_set, X.n, p);
}

Weight sampled_weight(RealGrid values, double alpha) {
    WeightParams p;
    int n = values.grid.dim();
    p.samples = std::make_shared<RealGrid>(std::move(values));
    p.alpha = alpha;
    return make_weight(WeightFamily::sampled, n, p);
}

RealGrid sample_weight(const Weight& H, const Grid& grid) {
    RealGrid out{grid, std::vector<double>(grid.size())};
    std::vector<double> x(grid.dim());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.point(i, x.data());
        out.values[i] = H.cell_average(x.data(), grid.h.data());
    }
    return out;
}

namespace {

bool may_meet(const Weight& H, const double* x0, double R) {
    switch (H.family) {
        case WeightFamily::X_b: {
            if (x0[0] + R <= 0.0 || x0[1] + R < 0.0) return false;
            double xl = x0[0] - R;
            if (xl > 0.0) {
                double top = H.params.b == 0.0 ? 1.0 : std::pow(xl, -H.params.b);
                if (x0[1] - R > top) return false;
            }
            return true;
        }
        case WeightFamily::Y_b: return x0[1] + R >= 1.0;
        case WeightFamily::Omega_b_R3: return x0[2] + R >= 1.0;
        default: return true;
    }
}

RealGrid raster(const Weight& H, Box box, double h) {
    if (H.family == WeightFamily::cube_set) {
        for (int a = 0; a < box.dim(); ++a) {
            box.lo[a] = std::floor(box.lo[a]);
            box.hi[a] = std::ceil(box.hi[a]);
        }
        h = 1.0;
    }
    Grid g = make_cell_grid(box, h);
    if (static_cast<double>(g.size()) > 6e7) fail("raster of " + std::to_string(g.size()) + " cells is too large");
    return sample_weight(H, g);
}

double closed_ball_mass(const Weight& H, const double* x0, double R) {
    int n = H.n;
    switch (H.family) {
        case WeightFamily::constant_one: return ball_volume(n, R);
        case WeightFamily::X_b: return x_b_ball_mass(H.params.b, x0[0], x0[1], R);
        case WeightFamily::Y_b:
        case WeightFamily::Omega_b_Rn: {
            double s = 0.0;
            for_each_slab(x0[1] - R, x0[1] + R, H.params.b,
                          [&](double a, double c) { s += chord_area(a - x0[1], c - x0[1], R); });
            return s;
        }
        case WeightFamily::Omega: return chord_area(-1.0 - x0[1], 1.0 - x0[1], R);
        case WeightFamily::Omega_b_R3: {
            double s = 0.0;
            for_each_slab(x0[2] - R, x0[2] + R, H.params.b,
                          [&](double a, double c) { s += disk_volume(a - x0[2], c - x0[2], R); });
            return s;
        }
        default: break;
    }
    fail("no closed-form ball mass for " + to_string(H.family));
}

}  // namespace

double ball_mass(const Weight& H, const double* x0, double R) {
    if (!(R > 0.0)) fail("ball radius must be positive");
    if (H.has_closed_ball_mass()) return may_meet(H, x0, R) ? closed_ball_mass(H, x0, R) : 0.0;
    Box ball{std::vector<double>(x0, x0 + H.n), std::vector<double>(x0, x0 + H.n)};
    ball = ball.expanded(R);
    if (auto s = H.support()) {
        if (!intersects(ball, *s)) return 0.0;
        ball = intersection(ball, *s);
    }
    if (H.family == WeightFamily::sampled) return BallIntegrator(*H.params.samples).mass(x0, R);
    double h = std::min(H.feature_scale(), R / 32.0);
    return BallIntegrator(raster(H, ball, h)).mass(x0, R);
}

BallSweepReport estimate_A_alpha(const Weight& H, double alpha, double R_max, const SweepOptions& opt) {
    int n = H.n;
    if (!(alpha > 0.0 && alpha <= n + 1e-12)) fail("estimate_A_alpha needs 0 < alpha <= n");
    if (!(R_max >= 1.0)) fail("estimate_A_alpha needs R_max >= 1");
    if (opt.density < 1) fail("sweep density must be >= 1");
    BallSweepReport rep;
    rep.alpha = alpha;
    std::vector<double> radii;
    for (double r = 1.0; r <= R_max * (1 + 1e-12); r *= 2.0) radii.push_back(r);
    if (radii.back() < R_max) radii.push_back(R_max);
    for (double r : opt.extra_radii)
        if (r >= 1.0) radii.push_back(r);
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

    auto support = H.support();
    auto centers_for = [&](double R) {
        if (opt.centers) return *opt.centers;
        if (support) return support->expanded(R);
        return cube_box(n, -R_max, R_max);
    };

    std::optional<BallIntegrator> integ;
    if (!H.has_closed_ball_mass()) {
        if (H.family == WeightFamily::sampled) {
            integ.emplace(*H.params.samples);
        } else {
            Box rb = centers_for(radii.front()).expanded(radii.front());
            for (double R : radii) {
                Box b = centers_for(R).expanded(R);
                for (int a = 0; a < n; ++a) {
                    rb.lo[a] = std::min(rb.lo[a], b.lo[a]);
                    rb.hi[a] = std::max(rb.hi[a], b.hi[a]);
                }
            }
            if (support) rb = intersection(rb, *support);
            integ.emplace(raster(H, rb, H.feature_scale()));
        }
    }

    double best_so_far = 0.0;
    for (double R : radii) {
        Box cb = centers_for(R);
        double s = R / (2.0 * opt.density);
        std::vector<long> klo(n), cnt(n);
        std::size_t total = 1;
        for (int a = 0; a < n; ++a) {
            klo[a] = static_cast<long>(std::ceil(cb.lo[a] / s - 1e-9));
            long khi = static_cast<long>(std::floor(cb.hi[a] / s + 1e-9));
            cnt[a] = std::max(0L, khi - klo[a] + 1);
            total *= static_cast<std::size_t>(cnt[a]);
        }
        std::vector<double> ratio(total, 0.0);
        double scale = std::pow(R, -alpha);
        parallel_blocks(
            total, 256,
            [&](std::size_t b, std::size_t e) {
                std::vector<double> x(n);
                for (std::size_t i = b; i < e; ++i) {
                    std::size_t rem = i;
                    for (int a = 0; a < n; ++a) {
                        x[a] = static_cast<double>(klo[a] + static_cast<long>(rem % cnt[a])) * s;
                        rem /= cnt[a];
                    }
                    double m;
                    if (integ)
                        m = integ->mass(x.data(), R);
                    else
                        m = may_meet(H, x.data(), R) ? closed_ball_mass(H, x.data(), R) : 0.0;
                    ratio[i] = m * scale;
                }
            },
            opt.threads);
        double lvl = 0.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < total; ++i)
            if (ratio[i] > lvl) {
                lvl = ratio[i];
                arg = i;
            }
        rep.radii.push_back(R);
        rep.centers_per_radius.push_back(total);
        rep.level_max.push_back(lvl);
        if (lvl > best_so_far) {
            best_so_far = lvl;
            rep.argmax_radius = R;
            rep.argmax_center.assign(n, 0.0);
            std::size_t rem = arg;
            for (int a = 0; a < n; ++a) {
                rep.argmax_center[a] = static_cast<double>(klo[a] + static_cast<long>(rem % cnt[a])) * s;
                rem /= cnt[a];
            }
        }
        rep.cumulative_max.push_back(best_so_far);
    }
    rep.max_ratio = best_so_far;
    std::size_t L = rep.cumulative_max.size();
    rep.stabilized = L < 2 || rep.cumulative_max[L - 1] <= 1.1 * rep.cumulative_max[L - 2];
    return rep;
}

GammaReport gamma_statistic(const CubeSet& X, double alpha) {
    int n = X.n;
    if (X.size() == 0) fail("gamma_statistic: empty cube set");
    if (!(alpha >= 1.0 && alpha <= n)) fail("gamma_statistic needs 1 <= alpha <= n");
    long R = X.R;
    // summed-volume table over (R+1)^n
    std::size_t side = static_cast<std::size_t>(R + 1);
    std::size_t total = 1;
    for (int a = 0; a < n; ++a) total *= side;
    std::vector<long> sat(total, 0);
    auto at = [&](const long* k) {
        std::size_t idx = 0;
        for (int a = n - 1; a >= 0; --a) idx = idx * side + static_cast<std::size_t>(k[a]);
        return idx;
    };
    std::vector<long> k(n);
    for (std::size_t i = 0; i < X.size(); ++i) {
        for (int a = 0; a < n; ++a) k[a] = X.corners[i * n + a] - X.lower() + 1;
        sat[at(k.data())] = 1;
    }
    for (int a = 0; a < n; ++a) {
        std::size_t stride = 1;
        for (int b = 0; b < a; ++b) stride *= side;
        for (std::size_t idx = 0; idx < total; ++idx)
            if ((idx / stride) % side) sat[idx] += sat[idx - stride];
    }
    auto count = [&](const long* lo, long r) {
        // inclusion-exclusion over the 2^n corners
        long s = 0;
        std::vector<long> c(n);
        for (int mask = 0; mask < (1 << n); ++mask) {
            int bits = 0;
            for (int a = 0; a < n; ++a) {
                bool up = mask & (1 << a);
                c[a] = up ? lo[a] + r : lo[a];
                bits += up ? 0 : 1;
            }
            s += (bits % 2 ? -1 : 1) * sat[at(c.data())];
        }
        return s;
    };
    GammaReport rep;
    std::vector<long> radii;
    for (long r = 1; r <= R; r *= 2) radii.push_back(r);
    if (radii.back() != R) radii.push_back(R);
    double best = 0.0;
    for (long r : radii) {
        long span = R - r + 1;
        double lvl = 0.0;
        std::vector<long> arg(n, 0), lo(n, 0);
        long windows = ipow(span, n);
        for (long w = 0; w < windows; ++w) {
            long rem = w;
            for (int a = 0; a < n; ++a) {
                lo[a] = rem % span;
                rem /= span;
            }
            double v = static_cast<double>(count(lo.data(), r)) / std::pow(static_cast<double>(r), alpha);
            if (v > lvl) {
                lvl = v;
                arg = lo;
            }
        }
        rep.radii.push_back(r);
        rep.level_max.push_back(lvl);
        if (lvl > best) {
            best = lvl;
            rep.argmax_r = r;
            rep.argmax_corner.clear();
            for (long v : arg) rep.argmax_corner.push_back(v + X.lower());
        }
        rep.cumulative_max.push_back(best);
    }
    rep.gamma = best;
    std::size_t L = rep.cumulative_max.size();
    rep.stabilized = L < 2 || rep.cumulative_max[L - 1] <= 1.1 * rep.cumulative_max[L - 2];
    return rep;
}

}  // namespace rlab
