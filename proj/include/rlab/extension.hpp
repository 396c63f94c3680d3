#pragma once

#include <vector>

#include "rlab/grid.hpp"
#include "rlab/surface.hpp"
#include "rlab/weights.hpp"

namespace rlab {

constexpr double kResolution = 0.1;  // node spacing <= kResolution / (1 + |x|max)
constexpr std::size_t kDefaultPointBudget = 10'000'000;

// Throws if the chart cannot resolve e^{-2 pi i x.xi} for |x| <= xmax.
void check_resolution(const SurfaceChart& chart, double xmax);

// Points lying on lines parallel to the first axis: run r starts at
// start[r*n] and has len[r] points spaced `step` apart.
struct PointRuns {
    int n = 0;
    double step = 0.0;
    std::vector<double> start;
    std::vector<std::size_t> len;
    std::vector<std::size_t> offset;  // index of the first point of each run
    std::size_t total = 0;

    void add(const double* x0, std::size_t count);
    double max_norm() const;
};

// Ef at `points` (n per point) by direct quadrature.
std::vector<cplx> evaluate_extension(const SurfaceDensity& f, const std::vector<double>& points,
                                     int threads = 0);
// Several densities on one chart; the phases are shared. out[m][i].
std::vector<std::vector<cplx>> evaluate_extension(const std::vector<SurfaceDensity>& fs,
                                                  const PointRuns& runs, int threads = 0);

GridField evaluate_on_grid(const SurfaceDensity& f, const Box& box, double h,
                           std::size_t point_budget = kDefaultPointBudget, int threads = 0);

// (sum_i |Ef(x_i)|^q Hbar_i h^n)^{1/q}, Hbar_i the mean of H over cell i.
double weighted_lq_norm(const GridField& field, const Weight& H, double q);

// Cells of side h (centers on (k + 1/2) h) inside the closed ball B(0, R)
// where H does not vanish, with their mean weight.
struct WeightedCells {
    PointRuns runs;
    std::vector<double> weight;  // per point
    double h = 0.0;
    double cell_volume() const;
};

WeightedCells weighted_cells(const Weight& H, double R, double h,
                             std::size_t point_budget = kDefaultPointBudget);

// integral of |Ef|^q H over the cells, one value per density
std::vector<double> lq_integrals(const std::vector<SurfaceDensity>& fs, const WeightedCells& cells,
                                 double q, int threads = 0);

// Adjoint sums at the chart nodes: out_j = sum_i g_i e^{+2 pi i x_i . xi_j}.
std::vector<cplx> adjoint_extension(const SurfaceChart& chart, const PointRuns& runs, const std::vector<cplx>& g,
                                    int threads = 0);

// Largest value of (integral |Ef|^2 H) / ||f||_2^2 over densities on the chart,
// by power iteration from `start`. Each iterate is a valid density, so `value`
// is an attained lower bound that increases to the discrete supremum.
struct L2Sup {
    double value = 0.0;
    int iterations = 0;
    double last_change = 0.0;  // relative change of the final step
    SurfaceDensity maximizer;  // L2-normalized
};

L2Sup l2_sup(const SurfaceDensity& start, const WeightedCells& cells, int max_iter = 60, double tol = 1e-6,
             int threads = 0);

}  // namespace rlab
