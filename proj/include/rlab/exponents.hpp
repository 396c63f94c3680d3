#pragma once

#include <string>
#include <vector>

namespace rlab {

// A threshold on q. inclusive = false means the estimate needs q > value;
// inclusive = true means q >= value is forced.
struct Threshold {
    double value = 0.0;
    bool inclusive = false;
    std::string regime;
};

// Upper-bound thresholds. `extended` allows the last formula for n >= 3 on
// n/2 < alpha <= n instead of stopping at (n+1)/2.
Threshold main1_threshold(int n, double alpha, bool extended = false);
// Sphere lower bounds (local L^2 estimates).
Threshold main2_lower(int n, double alpha);
// Sphere lower bounds for local L^infinity estimates.
Threshold main3_lower(int n, double alpha);

struct BaseThresholds {
    double q_i = 2.0;
    double q_ii = 0.0;
    double A_coef = 0.0;  // A_alpha(H) exponent is A_coef / q
    double H_coef = 0.0;  // ||H||_2 exponent is H_coef / q
    double A_exponent(double q) const { return A_coef / q; }
    double H_exponent(double q) const { return H_coef / q; }
};
BaseThresholds base_thresholds(int n, double alpha);

struct SimbaseThreshold {
    double q = 0.0;
    double A_exponent = 0.0;
};
SimbaseThreshold simbase_threshold(int n, double alpha, double eps = 0.0);

// (n + 1)/2, checked against the radical form.
double crossover_alpha(int n);

struct DZExponents {
    double gamma_exponent = 0.0;     // alpha / (2n)
    double weight_exponent = 0.0;   // alpha / n
    double e = 0.0;            // defined for alpha <= n/2
    bool e_defined = false;
};
DZExponents dz_exponents(int n, double alpha);

struct Interpolation {
    double p = 0.0;
    double alpha_prime = 0.0;  // (1 - (n-1) p / (2n)) alpha
};
Interpolation interpolation_p(int n, double alpha);

struct TableRow {
    int n = 0;
    double alpha = 0.0;
    double main1 = 0.0, main2 = 0.0, main3 = 0.0, simbase = 0.0, q_ii = 0.0, e_alpha = 0.0, p_interp = 0.0;
    bool has_main1 = false, has_main2 = false, has_main3 = false, has_simbase = false, has_q_ii = false,
         has_e = false, has_p = false;
    double boundary_gap = 0.0;  // formula mismatch when alpha sits on a regime boundary
};

TableRow table_row(int n, double alpha, bool extended = false);
// Largest gap between adjacent formulas at every regime boundary for this n.
double boundary_gap(int n);

}  // namespace rlab
