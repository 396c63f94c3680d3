#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rlab/grid.hpp"

namespace rlab {

enum class WeightFamily {
    X_b,           // {x > 0, 0 <= y <= x^-b} in the plane
    Y_b,           // union over l >= 1 of R x [l^(1/b), 1 + l^(1/b)]
    Omega,         // |x_n| <= |x'|^(1 - n/2)
    Omega_b_R3,    // union of R^2 x [l^(1/b), 1 + l^(1/b)]
    Omega_b_Rn,    // R x S_b^(n-1), S_b the union of [l^(1/b), 1 + l^(1/b)]
    variety_nbhd,  // |P| <= rho max(1, |grad P|) inside a bounding region
    cube_set,
    constant_one,
    sampled,
};

std::string to_string(WeightFamily f);
WeightFamily parse_weight_family(const std::string& s);

struct Polynomial {
    struct Term {
        double coef = 0.0;
        std::vector<int> powers;
    };
    int n = 0;
    std::vector<Term> terms;

    double operator()(const double* x) const;
    void gradient(const double* x, double* g) const;
    int degree() const;

    // Sum of terms like "3*x0^2*x1", variables x0..x{n-1}; also accepts the
    // presets "circle" (x0^2+x1^2-1), "sphere" and "parabola" (x1 - x0^2).
    static Polynomial parse(const std::string& text, int n);
};

// Lattice unit cubes [k, k+1]^n with corners in [-floor(R/2), R - floor(R/2) - 1]^n.
struct CubeSet {
    int n = 2;
    long R = 0;
    std::vector<long> corners;  // n per cube

    std::size_t size() const { return n ? corners.size() / n : 0; }
    long lower() const { return -(R / 2); }
};

CubeSet make_cube_set(int n, long R, std::vector<long> corners);
CubeSet full_cube_set(int n, long R);
// 2^depth cubes in a side-2^depth square; even binary levels split rows and
// odd levels split columns, so dyadic windows of side r hold r cubes.
CubeSet cantor_rows(int depth);
void write_cubes_csv(std::ostream& os, const CubeSet& X);
CubeSet read_cubes_csv(std::istream& is, int n, long R = 0);

struct WeightParams {
    double b = 0.0;
    double rho = 0.0;
    Polynomial P;
    int degree = 0;  // D for variety_nbhd; 0 means P.degree()
    Box region;      // variety_nbhd: the piece of Z that is used
    std::shared_ptr<const CubeSet> cubes;
    std::shared_ptr<const RealGrid> samples;
    double alpha = 0.0;  // nominal dimension for cube_set, sampled and X_1
};

class Weight {
public:
    int n = 2;
    WeightFamily family = WeightFamily::constant_one;
    WeightParams params;
    double nominal_alpha = 2.0;

    double value(const double* x) const;
    // Mean of the weight over the cell centered at `center` with sides h.
    double cell_average(const double* center, const double* h) const;
    std::optional<Box> support() const;
    // Raster spacing used when no closed form is available.
    double feature_scale() const;
    bool has_closed_ball_mass() const;
    // True when the weight is a product of one-dimensional profiles; then
    // cell_average(c, h) = prod_a axis_average(a, c[a], h[a]).
    bool separable() const;
    double axis_average(int axis, double c, double h) const;

    std::shared_ptr<const std::vector<std::uint8_t>> occupancy;  // cube_set lookup
};

Weight make_weight(WeightFamily family, int n, const WeightParams& params);
// "X_b:b=0.25", "Y_b:b=0.5", "Omega", "variety_nbhd:P=circle,rho=0.05,box=-2:2", ...
Weight parse_weight(const std::string& spec, int n);
Weight weight_from_cubes(const CubeSet& X, double alpha = 0.0);
Weight sampled_weight(RealGrid values, double alpha);
RealGrid sample_weight(const Weight& H, const Grid& grid);

double ball_mass(const Weight& H, const double* x0, double R);

struct SweepOptions {
    int density = 1;             // center spacing R / (2 density)
    std::optional<Box> centers;  // default: support + R, or [-R_max, R_max]^n
    std::vector<double> extra_radii;
    int threads = 0;
};

struct BallSweepReport {
    double alpha = 0.0;
    std::vector<double> radii;
    std::vector<std::size_t> centers_per_radius;
    std::vector<double> level_max;       // best ratio at each radius
    std::vector<double> cumulative_max;  // best ratio over radii <= this one
    double max_ratio = 0.0;
    std::vector<double> argmax_center;
    double argmax_radius = 0.0;
    bool stabilized = false;  // last two cumulative levels within 10%
};

BallSweepReport estimate_A_alpha(const Weight& H, double alpha, double R_max,
                                 const SweepOptions& opt = {});

struct GammaReport {
    double gamma = 0.0;
    std::vector<long> radii;
    std::vector<double> level_max;
    std::vector<double> cumulative_max;
    std::vector<long> argmax_corner;
    long argmax_r = 0;
    bool stabilized = false;
};

GammaReport gamma_statistic(const CubeSet& X, double alpha);

}  // namespace rlab
