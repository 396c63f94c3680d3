#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rlab/grid.hpp"

namespace rlab {

enum class SurfaceKind { circle, sphere, paraboloid_cap };

SurfaceKind parse_surface_kind(const std::string& s);
std::string to_string(SurfaceKind k);

struct SurfaceChart {
    int n = 0;
    SurfaceKind kind = SurfaceKind::circle;
    Box param_domain;
    std::vector<double> points;   // n per node
    std::vector<double> weights;  // dsigma quadrature weights
    std::string area_element_desc;
    double h = 0.0;             // parameter spacing requested
    double node_spacing = 0.0;  // bound on the distance between neighbouring nodes
    // Patches cover {xi : |xi - patch_center| <= patch_radius}; full charts have radius < 0.
    std::vector<double> patch_center;
    double patch_radius = -1.0;

    std::size_t size() const { return weights.size(); }
    const double* point(std::size_t i) const { return &points[i * n]; }
    double total_weight() const;
    bool covers(const double* center, double radius) const;
};

// circle: n = 2. sphere: n = 3, rings of polar angle with band-area weights.
// paraboloid_cap: xi_n = |xi'|^2 <= 1, n = 2 (t in [-1,1]) or n = 3 (polar).
SurfaceChart build_chart(SurfaceKind kind, int n, double h);
// Same chart restricted to a parameter box (circle: angle interval;
// paraboloid n = 2: t interval).
SurfaceChart build_chart(SurfaceKind kind, int n, double h, const Box& param_domain);
// Circle arc or spherical cap {|xi - center| <= radius} around a unit vector.
SurfaceChart build_patch(SurfaceKind kind, int n, double h, const std::vector<double>& center,
                         double radius);
SurfaceChart refine(const SurfaceChart& c);

struct SurfaceDensity {
    std::shared_ptr<const SurfaceChart> chart;
    std::vector<cplx> values;
};

SurfaceDensity constant_density(std::shared_ptr<const SurfaceChart> chart, cplx value = 1.0);

// (sum_j w_j |f_j|^p)^{1/p}; p = infinity gives the largest node value, which
// is a lower bound for the true sup.
double lp_norm(const SurfaceDensity& f, double p);

struct KnappCap {
    std::shared_ptr<const SurfaceChart> chart;
    std::vector<double> center;     // point on S
    std::vector<double> direction;  // unit normal at center
    double R = 1.0;
    double c = 0.1;
    double halfwidth = 0.0;
    std::size_t node_count = 0;
    double cap_area = 0.0;  // sigma(cap) by quadrature
    SurfaceDensity density;
    // dual box: [0, R] along axes[0] = direction, [0, sqrt R] along the others
    std::vector<std::vector<double>> axes;
    std::vector<double> extent;

    bool in_dual_box(const double* x, double slack = 1e-12) const;
    // per_axis^n points spread over the closed dual box
    std::vector<double> dual_box_points(int per_axis) const;
};

KnappCap build_knapp(std::shared_ptr<const SurfaceChart> chart, double R, double c = 0.1,
                     const std::vector<double>& direction = {});

// Full chart, or a patch around the default Knapp center wide enough for a
// cap of constant c at scale R, whose node spacing is at most `spacing`.
std::shared_ptr<const SurfaceChart> resolved_chart(SurfaceKind kind, int n, double spacing);
std::shared_ptr<const SurfaceChart> knapp_chart(SurfaceKind kind, int n, double R, double c, double spacing);

// Unit vectors completing `v` to an orthonormal frame.
std::vector<std::vector<double>> orthonormal_complement(const std::vector<double>& v);

}  // namespace rlab
