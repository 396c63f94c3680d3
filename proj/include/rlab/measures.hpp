#pragma once

#include <vector>

#include "rlab/grid.hpp"
#include "rlab/surface.hpp"

namespace rlab {

// A positive measure with piecewise-constant density: the value at each
// sample holds on the sample's cell. Support lies in the closed unit ball.
struct FractalMeasure {
    RealGrid density;
    double total_mass = 0.0;

    int n() const { return density.grid.dim(); }
    // Radius of the smallest origin-centered ball holding the support.
    double support_radius() const;
};

FractalMeasure make_measure(RealGrid density);

// mu-hat(xi) = integral e^{-2 pi i x.xi} dmu(x), exact for the cell density.
cplx fourier_transform(const FractalMeasure& mu, const double* xi);
std::vector<cplx> fourier_transform(const FractalMeasure& mu, const std::vector<double>& xis,
                                    int threads = 0);

// I_alpha = double integral of |x - y|^-alpha. Cell pairs within three cells of
// each other use the exact pair average of the kernel, the rest use centers.
double energy_direct(const FractalMeasure& mu, double alpha, int threads = 0);

// integral over |xi| <= cutoff of |mu-hat|^2 |xi|^(alpha - n), without c_alpha.
double energy_fourier(const FractalMeasure& mu, double alpha, double cutoff, int threads = 0);

// pi^(alpha - n/2) Gamma((n - alpha)/2) / Gamma(alpha/2)
double riesz_constant(int n, double alpha);

struct ConcentrationReport {
    double C_alpha = 0.0;
    double C_alpha_R = 0.0;  // radii >= 1/R only
    std::vector<double> radii;
    std::vector<double> level_max;
    bool stabilized = false;
    bool stabilized_R = false;
};

ConcentrationReport concentration(const FractalMeasure& mu, double alpha, double R = 1.0, int threads = 0);

// (integral over the unit circle/sphere of |mu-hat(R theta)|^p')^{1/p'}
double spherical_means(const FractalMeasure& mu, double R, int p_prime, int threads = 0);

struct EnergyReport {
    double alpha = 0.0;
    double I_direct = 0.0;
    double I_fourier_over_c = 0.0;
    double C_alpha = 0.0;
    std::vector<double> R;
    std::vector<double> C_alpha_R;
};

EnergyReport energy_report(const FractalMeasure& mu, double alpha, double cutoff, const std::vector<double>& R,
                           int threads = 0);

constexpr int kBumpCells = 32;  // cells per axis across the bump support

// Psi = rho^(alpha/2 - n) psi(x / rho), psi a tensor bump on [-1/4, 1/4]^n
// sampled on kBumpCells^n cells and scaled so that psi-hat >= 1 on the unit sphere.
FractalMeasure bump_measure(double rho, double alpha, int n);

// Uniform probability density on [0,1] x {0}, one row of cells of side h.
FractalMeasure segment_measure(double h);
// Middle-thirds Cantor iterate of the given depth on [0,1] x {0}, cell side 3^-(depth+1).
FractalMeasure cantor_measure(int depth);
// Uniform probability density on the cells of side h inside the disk/ball of radius r.
FractalMeasure ball_measure(int n, double r, double h);

}  // namespace rlab
