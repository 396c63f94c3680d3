#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace rlab {

using cplx = std::complex<double>;

struct Box {
    std::vector<double> lo, hi;

    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const double* x, double slack = 0.0) const;
    Box expanded(double r) const;
    // Largest |x| over the box.
    double max_norm() const;
};

Box cube_box(int n, double lo, double hi);
bool intersects(const Box& a, const Box& b);
Box intersection(const Box& a, const Box& b);

// Regular lattice of sample points. Sample i sits at lo + i*h and owns the
// cell [x - h/2, x + h/2]. Axis 0 varies fastest.
struct Grid {
    std::vector<double> lo;
    std::vector<double> h;
    std::vector<std::size_t> count;

    int dim() const { return static_cast<int>(lo.size()); }
    std::size_t size() const;
    double cell_volume() const;
    void point(std::size_t idx, double* x) const;
    std::size_t flat(const std::size_t* ijk) const;
    Box extent() const;  // union of the cells
};

// Samples lo + i*h for i = 0..floor((hi-lo)/h) on each axis.
Grid make_grid(const Box& box, double h);
// Cells of side h tiling [lo, hi] (hi - lo rounded up to a multiple of h).
Grid make_cell_grid(const Box& box, double h);

struct GridField {
    Grid grid;
    std::vector<cplx> samples;
};

struct RealGrid {
    Grid grid;
    std::vector<double> values;
};

// GridField CSV: '#' header lines with box and spacing, then index,value rows.
void write_grid_csv(std::ostream& os, const RealGrid& g);
RealGrid read_grid_csv(std::istream& is);

// Integral of a piecewise-constant grid function over balls. Exact along axis 0,
// 3-point Gauss per cell across the others. Coefficients are nonnegative and a
// cell lying inside the ball gets its full volume.
class BallIntegrator {
public:
    explicit BallIntegrator(const RealGrid& g);
    double mass(const double* center, double r) const;
    double total() const { return total_; }
    const Grid& grid() const { return grid_; }

private:
    double row_integral(std::size_t row, double a, double b) const;

    Grid grid_;
    std::vector<double> values_;
    std::vector<double> prefix_;  // per row: count0 + 1 entries
    std::size_t rows_ = 0;
    double total_ = 0.0;
};

// Neumaier compensated sum; used where results must not depend on order.
class CompensatedSum {
public:
    void add(double v);
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0, comp_ = 0.0;
};

}  // namespace rlab
