#include "rlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rlab {

bool Box::contains(const double* x, double slack) const {
    for (int i = 0; i < dim(); ++i)
        if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
    return true;
}

Box Box::expanded(double r) const {
    Box b = *this;
    for (int i = 0; i < dim(); ++i) {
        b.lo[i] -= r;
        b.hi[i] += r;
    }
    return b;
}

double Box::max_norm() const {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) {
        double m = std::max(std::abs(lo[i]), std::abs(hi[i]));
        s += m * m;
    }
    return std::sqrt(s);
}

Box cube_box(int n, double lo, double hi) {
    return Box{std::vector<double>(n, lo), std::vector<double>(n, hi)};
}

bool intersects(const Box& a, const Box& b) {
    for (int i = 0; i < a.dim(); ++i)
        if (a.hi[i] < b.lo[i] || b.hi[i] < a.lo[i]) return false;
    return true;
}

Box intersection(const Box& a, const Box& b) {
    Box r = a;
    for (int i = 0; i < a.dim(); ++i) {
        r.lo[i] = std::max(a.lo[i], b.lo[i]);
        r.hi[i] = std::min(a.hi[i], b.hi[i]);
    }
    return r;
}

std::size_t Grid::size() const {
    std::size_t s = 1;
    for (auto c : count) s *= c;
    return s;
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (double x : h) v *= x;
    return v;
}

void Grid::point(std::size_t idx, double* x) const {
    for (int a = 0; a < dim(); ++a) {
        std::size_t i = idx % count[a];
        idx /= count[a];
        x[a] = lo[a] + static_cast<double>(i) * h[a];
    }
}

std::size_t Grid::flat(const std::size_t* ijk) const {
    std::size_t idx = 0;
    for (int a = dim() - 1; a >= 0; --a) idx = idx * count[a] + ijk[a];
    return idx;
}

Box Grid::extent() const {
    Box b;
    for (int a = 0; a < dim(); ++a) {
        b.lo.push_back(lo[a] - 0.5 * h[a]);
        b.hi.push_back(lo[a] + (static_cast<double>(count[a]) - 0.5) * h[a]);
    }
    return b;
}

Grid make_grid(const Box& box, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("grid: spacing must be positive");
    Grid g;
    for (int a = 0; a < box.dim(); ++a) {
        double len = box.hi[a] - box.lo[a];
        if (len < 0.0) throw std::invalid_argument("grid: inverted box");
        g.lo.push_back(box.lo[a]);
        g.h.push_back(h);
        g.count.push_back(static_cast<std::size_t>(std::floor(len / h + 1e-9)) + 1);
    }
    return g;
}

Grid make_cell_grid(const Box& box, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("grid: spacing must be positive");
    Grid g;
    for (int a = 0; a < box.dim(); ++a) {
        double len = box.hi[a] - box.lo[a];
        if (len < 0.0) throw std::invalid_argument("grid: inverted box");
        auto c = static_cast<std::size_t>(std::ceil(len / h - 1e-9));
        g.lo.push_back(box.lo[a] + 0.5 * h);
        g.h.push_back(h);
        g.count.push_back(std::max<std::size_t>(c, 1));
    }
    return g;
}

namespace {

void write_list(std::ostream& os, const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

}  // namespace

void write_grid_csv(std::ostream& os, const RealGrid& g) {
    auto old = os.precision(17);
    Box ext = g.grid.extent();
    os << "# dim=" << g.grid.dim() << "\n# box=";
    write_list(os, ext.lo);
    os << ";";
    write_list(os, ext.hi);
    os << "\n# spacing=";
    write_list(os, g.grid.h);
    os << "\n# count=";
    for (int a = 0; a < g.grid.dim(); ++a) os << (a ? "," : "") << g.grid.count[a];
    os << "\nindex,value\n";
    for (std::size_t i = 0; i < g.values.size(); ++i) os << i << "," << g.values[i] << "\n";
    os.precision(old);
}

RealGrid read_grid_csv(std::istream& is) {
    RealGrid g;
    std::vector<double> box_lo, spacing;
    std::vector<std::size_t> count;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(2, eq - 2);
            std::string val = line.substr(eq + 1);
            if (key == "box") {
                box_lo = parse_list(val.substr(0, val.find(';')));
            } else if (key == "spacing") {
                spacing = parse_list(val);
            } else if (key == "count") {
                for (double c : parse_list(val)) count.push_back(static_cast<std::size_t>(c));
            }
            continue;
        }
        if (line.rfind("index", 0) == 0) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("grid csv: malformed row: " + line);
        std::size_t idx = std::stoul(line.substr(0, comma));
        if (idx != g.values.size()) throw std::runtime_error("grid csv: rows out of order");
        g.values.push_back(std::stod(line.substr(comma + 1)));
    }
    if (box_lo.empty() || spacing.size() != box_lo.size() || count.size() != box_lo.size())
        throw std::runtime_error("grid csv: incomplete header");
    for (std::size_t a = 0; a < box_lo.size(); ++a) g.grid.lo.push_back(box_lo[a] + 0.5 * spacing[a]);
    g.grid.h = spacing;
    g.grid.count = count;
    if (g.values.size() != g.grid.size()) throw std::runtime_error("grid csv: value count mismatch");
    return g;
}

namespace {
constexpr double kGaussX[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr double kGaussW[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};  // on [-1/2, 1/2]
}  // namespace

BallIntegrator::BallIntegrator(const RealGrid& g) : grid_(g.grid), values_(g.values) {
    if (values_.size() != grid_.size()) throw std::invalid_argument("ball integrator: size mismatch");
    std::size_t c0 = grid_.count[0];
    rows_ = grid_.size() / c0;
    prefix_.assign(rows_ * (c0 + 1), 0.0);
    double h0 = grid_.h[0];
    CompensatedSum tot;
    for (std::size_t r = 0; r < rows_; ++r) {
        double* p = &prefix_[r * (c0 + 1)];
        for (std::size_t j = 0; j < c0; ++j) p[j + 1] = p[j] + values_[r * c0 + j] * h0;
        tot.add(p[c0]);
    }
    double trans = 1.0;
    for (int a = 1; a < grid_.dim(); ++a) trans *= grid_.h[a];
    total_ = tot.value() * trans;
}

double BallIntegrator::row_integral(std::size_t row, double a, double b) const {
    std::size_t c0 = grid_.count[0];
    double h0 = grid_.h[0];
    double start = grid_.lo[0] - 0.5 * h0;
    const double* p = &prefix_[row * (c0 + 1)];
    const double* v = &values_[row * c0];
    auto cum = [&](double x) {
        double t = (x - start) / h0;
        if (t <= 0.0) return 0.0;
        if (t >= static_cast<double>(c0)) return p[c0];
        auto k = static_cast<std::size_t>(t);
        return p[k] + (t - static_cast<double>(k)) * v[k] * h0;
    };
    return cum(b) - cum(a);
}

double BallIntegrator::mass(const double* center, double r) const {
    int n = grid_.dim();
    if (n == 1) return row_integral(0, center[0] - r, center[0] + r);
    // transverse index ranges
    std::vector<std::size_t> lo(n, 0), hi(n, 0);
    for (int a = 1; a < n; ++a) {
        double h = grid_.h[a];
        double first = grid_.lo[a];
        double tlo = std::ceil((center[a] - r - first) / h - 0.5);
        double thi = std::floor((center[a] + r - first) / h + 0.5);
        if (thi < 0.0 || tlo > static_cast<double>(grid_.count[a]) - 1.0) return 0.0;
        lo[a] = static_cast<std::size_t>(std::max(0.0, tlo));
        hi[a] = static_cast<std::size_t>(std::min(thi, static_cast<double>(grid_.count[a]) - 1.0));
    }
    double r2 = r * r;
    double result = 0.0;
    std::vector<std::size_t> idx(n, 0);
    for (int a = 1; a < n; ++a) idx[a] = lo[a];
    int ng = 1;
    for (int a = 1; a < n; ++a) ng *= 3;
    for (;;) {
        std::size_t row = 0;
        for (int a = n - 1; a >= 1; --a) row = row * grid_.count[a] + idx[a];
        double acc = 0.0;
        for (int gi = 0; gi < ng; ++gi) {
            int code = gi;
            double d2 = 0.0, w = 1.0;
            for (int a = 1; a < n; ++a) {
                int k = code % 3;
                code /= 3;
                double y = grid_.lo[a] + (static_cast<double>(idx[a]) + 0.5 * kGaussX[k]) * grid_.h[a];
                double d = y - center[a];
                d2 += d * d;
                w *= kGaussW[k] * grid_.h[a];
            }
            if (d2 >= r2) continue;
            double half = std::sqrt(r2 - d2);
            acc += w * row_integral(row, center[0] - half, center[0] + half);
        }
        result += acc;
        int a = 1;
        while (a < n) {
            if (idx[a] < hi[a]) {
                ++idx[a];
                break;
            }
            idx[a] = lo[a];
            ++a;
        }
        if (a == n) break;
    }
    return result;
}

void CompensatedSum::add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
        comp_ += (sum_ - t) + v;
    else
        comp_ += (v - t) + sum_;
    sum_ = t;
}

}  // namespace rlab
