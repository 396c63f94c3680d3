#include "rlab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rlab {

namespace {

constexpr double kPi = std::numbers::pi;

double dot(const double* a, const double* b, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

std::vector<double> normalized(std::vector<double> v) {
    double s = std::sqrt(dot(v.data(), v.data(), static_cast<int>(v.size())));
    if (!(s > 0.0)) throw std::invalid_argument("surface: zero direction");
    for (double& x : v) x /= s;
    return v;
}

std::size_t steps(double len, double h) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / h - 1e-9)));
}

SurfaceChart circle_chart(double h, double a, double b, bool periodic) {
    SurfaceChart c;
    c.n = 2;
    c.kind = SurfaceKind::circle;
    c.h = h;
    c.param_domain = Box{{a}, {b}};
    c.area_element_desc = "dphi";
    std::size_t N = steps(b - a, h);
    double d = (b - a) / static_cast<double>(N);
    for (std::size_t j = 0; j < N; ++j) {
        // periodic charts start at phi = a so that a node sits on the x-axis
        double phi = a + (static_cast<double>(j) + (periodic ? 0.0 : 0.5)) * d;
        c.points.push_back(std::cos(phi));
        c.points.push_back(std::sin(phi));
        c.weights.push_back(d);
    }
    c.node_spacing = d;
    return c;
}

SurfaceChart sphere_chart(double h, const std::vector<double>& pole, double theta_max) {
    SurfaceChart c;
    c.n = 3;
    c.kind = SurfaceKind::sphere;
    c.h = h;
    c.param_domain = Box{{0.0, 0.0}, {theta_max, 2.0 * kPi}};
    c.area_element_desc = "sin(theta) dtheta dphi, band-integrated in theta";
    auto frame = orthonormal_complement(pole);
    const auto& u = frame[0];
    const auto& v = frame[1];
    std::size_t Nt = steps(theta_max, h);
    double dt = theta_max / static_cast<double>(Nt);
    double spacing = dt;
    for (std::size_t i = 0; i < Nt; ++i) {
        double t = (static_cast<double>(i) + 0.5) * dt;
        double band = std::cos(t - 0.5 * dt) - std::cos(t + 0.5 * dt);
        std::size_t Np = std::max<std::size_t>(3, steps(2.0 * kPi * std::sin(t), h));
        double dp = 2.0 * kPi / static_cast<double>(Np);
        spacing = std::max(spacing, std::sin(t) * dp);
        double ct = std::cos(t), st = std::sin(t);
        for (std::size_t j = 0; j < Np; ++j) {
            double p = (static_cast<double>(j) + 0.5) * dp;
            double cp = std::cos(p), sp = std::sin(p);
            for (int k = 0; k < 3; ++k) c.points.push_back(ct * pole[k] + st * (cp * u[k] + sp * v[k]));
            c.weights.push_back(band * dp);
        }
    }
    c.node_spacing = spacing;
    return c;
}

SurfaceChart parabola_chart(double h, double a, double b) {
    SurfaceChart c;
    c.n = 2;
    c.kind = SurfaceKind::paraboloid_cap;
    c.h = h;
    c.param_domain = Box{{a}, {b}};
    c.area_element_desc = "sqrt(1+4t^2) dt";
    std::size_t N = steps(b - a, h);
    double d = (b - a) / static_cast<double>(N);
    double tmax = std::max(std::abs(a), std::abs(b));
    for (std::size_t j = 0; j < N; ++j) {
        double t = a + (static_cast<double>(j) + 0.5) * d;
        c.points.push_back(t);
        c.points.push_back(t * t);
        c.weights.push_back(std::sqrt(1.0 + 4.0 * t * t) * d);
    }
    c.node_spacing = d * std::sqrt(1.0 + 4.0 * tmax * tmax);
    return c;
}

SurfaceChart paraboloid3_chart(double h) {
    SurfaceChart c;
    c.n = 3;
    c.kind = SurfaceKind::paraboloid_cap;
    c.h = h;
    c.param_domain = Box{{0.0, 0.0}, {1.0, 2.0 * kPi}};
    c.area_element_desc = "r sqrt(1+4r^2) dr dphi, band-integrated in r";
    std::size_t Nr = steps(1.0, h);
    double dr = 1.0 / static_cast<double>(Nr);
    double spacing = dr * std::sqrt(5.0);
    auto F = [](double r) { return std::pow(1.0 + 4.0 * r * r, 1.5) / 12.0; };
    for (std::size_t i = 0; i < Nr; ++i) {
        double r = (static_cast<double>(i) + 0.5) * dr;
        double band = F(r + 0.5 * dr) - F(r - 0.5 * dr);
        std::size_t Np = std::max<std::size_t>(3, steps(2.0 * kPi * r, h));
        double dp = 2.0 * kPi / static_cast<double>(Np);
        spacing = std::max(spacing, r * dp);
        for (std::size_t j = 0; j < Np; ++j) {
            double p = (static_cast<double>(j) + 0.5) * dp;
            c.points.push_back(r * std::cos(p));
            c.points.push_back(r * std::sin(p));
            c.points.push_back(r * r);
            c.weights.push_back(band * dp);
        }
    }
    c.node_spacing = spacing;
    return c;
}

void check_h(int n, double h) {
    if (n < 2) throw std::invalid_argument("surface: ambient dimension must be >= 2");
    if (!(h > 0.0)) throw std::invalid_argument("surface: resolution must be positive");
}

[[noreturn]] void unsupported(SurfaceKind kind, int n) {
    throw std::invalid_argument("surface: unsupported combination " + to_string(kind) +
                                " in dimension " + std::to_string(n));
}

}  // namespace

SurfaceKind parse_surface_kind(const std::string& s) {
    if (s == "circle") return SurfaceKind::circle;
    if (s == "sphere") return SurfaceKind::sphere;
    if (s == "paraboloid_cap" || s == "paraboloid") return SurfaceKind::paraboloid_cap;
    throw std::invalid_argument("surface: unknown kind '" + s + "'");
}

std::string to_string(SurfaceKind k) {
    switch (k) {
        case SurfaceKind::circle: return "circle";
        case SurfaceKind::sphere: return "sphere";
        case SurfaceKind::paraboloid_cap: return "paraboloid_cap";
    }
    return "?";
}

double SurfaceChart::total_weight() const {
    CompensatedSum s;
    for (double w : weights) s.add(w);
    return s.value();
}

bool SurfaceChart::covers(const double* center, double radius) const {
    if (patch_radius < 0.0) return true;
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) d2 += (center[i] - patch_center[i]) * (center[i] - patch_center[i]);
    return std::sqrt(d2) + radius <= patch_radius * (1.0 + 1e-12);
}

SurfaceChart build_chart(SurfaceKind kind, int n, double h) {
    check_h(n, h);
    switch (kind) {
        case SurfaceKind::circle:
            if (n != 2) unsupported(kind, n);
            return circle_chart(h, 0.0, 2.0 * kPi, true);
        case SurfaceKind::sphere:
            if (n != 3) unsupported(kind, n);
            return sphere_chart(h, {0.0, 0.0, 1.0}, kPi);
        case SurfaceKind::paraboloid_cap:
            if (n == 2) return parabola_chart(h, -1.0, 1.0);
            if (n == 3) return paraboloid3_chart(h);
            unsupported(kind, n);
    }
    unsupported(kind, n);
}

SurfaceChart build_chart(SurfaceKind kind, int n, double h, const Box& param_domain) {
    check_h(n, h);
    if (param_domain.dim() != 1) unsupported(kind, n);
    double a = param_domain.lo[0], b = param_domain.hi[0];
    if (!(b > a)) throw std::invalid_argument("surface: empty parameter domain");
    if (kind == SurfaceKind::circle && n == 2) {
        bool full = std::abs((b - a) - 2.0 * kPi) < 1e-14;
        return circle_chart(h, a, b, full);
    }
    if (kind == SurfaceKind::paraboloid_cap && n == 2) {
        if (a < -1.0 || b > 1.0) throw std::invalid_argument("surface: paraboloid parameter outside [-1,1]");
        return parabola_chart(h, a, b);
    }
    unsupported(kind, n);
}

SurfaceChart build_patch(SurfaceKind kind, int n, double h, const std::vector<double>& center,
                         double radius) {
    check_h(n, h);
    if (static_cast<int>(center.size()) != n) throw std::invalid_argument("surface: center dimension");
    if (!(radius > 0.0)) throw std::invalid_argument("surface: patch radius must be positive");
    auto c = normalized(center);
    double ang = radius >= 2.0 ? kPi : 2.0 * std::asin(radius / 2.0);
    SurfaceChart out;
    if (kind == SurfaceKind::circle && n == 2) {
        double phi = std::atan2(c[1], c[0]);
        out = circle_chart(h, phi - ang, phi + ang, false);
    } else if (kind == SurfaceKind::sphere && n == 3) {
        out = sphere_chart(h, c, ang);
    } else {
        unsupported(kind, n);
    }
    out.patch_center = c;
    out.patch_radius = radius;
    return out;
}

SurfaceChart refine(const SurfaceChart& c) {
    if (c.patch_radius >= 0.0) return build_patch(c.kind, c.n, c.h / 2, c.patch_center, c.patch_radius);
    if (c.kind == SurfaceKind::circle || (c.kind == SurfaceKind::paraboloid_cap && c.n == 2))
        return build_chart(c.kind, c.n, c.h / 2, c.param_domain);
    return build_chart(c.kind, c.n, c.h / 2);
}

SurfaceDensity constant_density(std::shared_ptr<const SurfaceChart> chart, cplx value) {
    SurfaceDensity f;
    f.values.assign(chart->size(), value);
    f.chart = std::move(chart);
    return f;
}

double lp_norm(const SurfaceDensity& f, double p) {
    const auto& w = f.chart->weights;
    if (f.values.size() != w.size()) throw std::invalid_argument("lp_norm: value count != node count");
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    if (!(p > 0.0)) throw std::invalid_argument("lp_norm: p must be positive");
    CompensatedSum s;
    for (std::size_t j = 0; j < w.size(); ++j) {
        double a = std::abs(f.values[j]);
        s.add(w[j] * (p == 2.0 ? a * a : std::pow(a, p)));
    }
    return std::pow(s.value(), 1.0 / p);
}

std::vector<std::vector<double>> orthonormal_complement(const std::vector<double>& v0) {
    int n = static_cast<int>(v0.size());
    std::vector<std::vector<double>> basis{normalized(v0)};
    for (int e = 0; e < n && static_cast<int>(basis.size()) < n; ++e) {
        std::vector<double> w(n, 0.0);
        w[e] = 1.0;
        for (const auto& b : basis) {
            double d = dot(w.data(), b.data(), n);
            for (int i = 0; i < n; ++i) w[i] -= d * b[i];
        }
        double s = std::sqrt(dot(w.data(), w.data(), n));
        if (s < 1e-8) continue;
        for (double& x : w) x /= s;
        basis.push_back(w);
    }
    basis.erase(basis.begin());
    return basis;
}

bool KnappCap::in_dual_box(const double* x, double slack) const {
    int n = static_cast<int>(direction.size());
    for (int k = 0; k < n; ++k) {
        double t = dot(x, axes[k].data(), n);
        if (t < -slack || t > extent[k] + slack) return false;
    }
    return true;
}

std::vector<double> KnappCap::dual_box_points(int per_axis) const {
    int n = static_cast<int>(direction.size());
    std::vector<double> out;
    std::size_t total = 1;
    for (int k = 0; k < n; ++k) total *= static_cast<std::size_t>(per_axis);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        std::vector<double> x(n, 0.0);
        for (int k = 0; k < n; ++k) {
            double t = per_axis > 1 ? extent[k] * static_cast<double>(rem % per_axis) / (per_axis - 1) : 0.0;
            rem /= per_axis;
            for (int i = 0; i < n; ++i) x[i] += t * axes[k][i];
        }
        out.insert(out.end(), x.begin(), x.end());
    }
    return out;
}

KnappCap build_knapp(std::shared_ptr<const SurfaceChart> chart, double R, double c,
                     const std::vector<double>& direction) {
    if (!(R >= 1.0)) throw std::invalid_argument("knapp: R must be >= 1");
    if (!(c > 0.0)) throw std::invalid_argument("knapp: cap constant must be positive");
    int n = chart->n;
    KnappCap k;
    k.R = R;
    k.c = c;
    k.halfwidth = c / std::sqrt(R);
    std::vector<double> dir = direction;
    if (dir.empty()) {
        if (chart->patch_radius >= 0.0) {
            dir = chart->patch_center;
        } else {
            dir.assign(n, 0.0);
            dir[chart->kind == SurfaceKind::paraboloid_cap ? n - 1 : 0] = 1.0;
        }
    }
    if (static_cast<int>(dir.size()) != n) throw std::invalid_argument("knapp: direction dimension");
    dir = normalized(dir);
    std::vector<double> center(n);
    if (chart->kind == SurfaceKind::paraboloid_cap) {
        // point with normal proportional to (-2 xi', 1)
        if (!(dir[n - 1] > 0.0)) throw std::invalid_argument("knapp: direction not a paraboloid normal");
        double s = 0.0;
        for (int i = 0; i < n - 1; ++i) {
            center[i] = -dir[i] / (2.0 * dir[n - 1]);
            s += center[i] * center[i];
        }
        if (s > 1.0) throw std::invalid_argument("knapp: normal direction outside the cap");
        center[n - 1] = s;
    } else {
        center = dir;
    }
    if (!chart->covers(center.data(), k.halfwidth))
        throw std::invalid_argument("knapp: cap not contained in the chart patch");
    double width = 2.0 * k.halfwidth;
    if (chart->node_spacing > width / 32.0)
        throw std::invalid_argument("knapp: under-resolved cap (node spacing " +
                                    std::to_string(chart->node_spacing) + " > cap width/32 = " +
                                    std::to_string(width / 32.0) + ")");
    k.density.chart = chart;
    k.density.values.assign(chart->size(), 0.0);
    CompensatedSum area;
    double hw2 = k.halfwidth * k.halfwidth;
    for (std::size_t j = 0; j < chart->size(); ++j) {
        const double* p = chart->point(j);
        double d2 = 0.0;
        for (int i = 0; i < n; ++i) d2 += (p[i] - center[i]) * (p[i] - center[i]);
        if (d2 <= hw2) {
            k.density.values[j] = 1.0;
            ++k.node_count;
            area.add(chart->weights[j]);
        }
    }
    if (k.node_count == 0) throw std::invalid_argument("knapp: no nodes inside the cap");
    k.cap_area = area.value();
    k.center = center;
    k.direction = dir;
    k.chart = std::move(chart);
    k.axes.push_back(dir);
    for (auto& v : orthonormal_complement(dir)) k.axes.push_back(v);
    k.extent.assign(n, std::sqrt(R));
    k.extent[0] = R;
    return k;
}

namespace {

template <class Make>
std::shared_ptr<const SurfaceChart> shrink_until(Make make, double spacing) {
    if (!(spacing > 0.0)) throw std::invalid_argument("chart: spacing must be positive");
    double h = spacing;
    for (int it = 0; it < 20; ++it) {
        SurfaceChart c = make(h);
        if (c.node_spacing <= spacing) return std::make_shared<const SurfaceChart>(std::move(c));
        h *= 0.999 * spacing / c.node_spacing;
    }
    throw std::runtime_error("chart: could not reach the requested node spacing");
}

}  // namespace

std::shared_ptr<const SurfaceChart> resolved_chart(SurfaceKind kind, int n, double spacing) {
    return shrink_until([&](double h) { return build_chart(kind, n, h); }, spacing);
}

std::shared_ptr<const SurfaceChart> knapp_chart(SurfaceKind kind, int n, double R, double c, double spacing) {
    spacing = std::min(spacing, 2.0 * c / std::sqrt(R) / 33.0);
    if (kind == SurfaceKind::paraboloid_cap) return resolved_chart(kind, n, spacing);
    std::vector<double> dir(n, 0.0);
    dir[0] = 1.0;
    double radius = std::min(2.0, 1.1 * c / std::sqrt(R));
    return shrink_until([&](double h) { return build_patch(kind, n, h, dir, radius); }, spacing);
}

}  // namespace rlab
