#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rlab/grid.hpp"
#include "rlab/weights.hpp"

namespace rlab {

struct IterationState {
    double alpha = 0.0, beta = 0.0, p = 0.0;
    double N = 1.0, M = 1.0;
    int K = 0;
    std::vector<double> beta_rec, C_rec;        // recurrences, k = 0..K
    std::vector<double> beta_closed, C_closed;  // closed forms
    double beta_limit = 0.0;                    // alpha
    double C_limit = 0.0;                       // M^(alpha/beta)
    double closed_residual = 0.0;  // max relative gap between recurrence and closed form
    double beta_limit_residual = 0.0;
    double C_limit_residual = 0.0;  // relative
};

IterationState iterate(double alpha, double beta, double N, double M, int K = 60, int n = 0);

// F_N = F on cells lying in the closed ball B(0, N) where F <= N, zero elsewhere.
RealGrid truncate(const RealGrid& F, double N);

struct DerivedWeight {
    Weight weight;               // sampled on F's grid
    double bound = 0.0;          // N^(-b/p) C^(1/p) A_alpha(H), C = N^(b + alpha)
    double A_alpha_H = 0.0;      // sweep estimate for H sampled on F's grid
    double A_beta_measured = 0.0;
    bool certified = false;      // measured <= bound (1 + 1%)
};

// Hcal = N^(-b/p) F_N^(b/p) H with b = beta_prev (1 for the first step).
// The H sweep includes radius N so that the bound is certified on the same balls.
DerivedWeight derive_weight(const RealGrid& F, const Weight& H, double alpha, double beta, double N,
                            double beta_prev = 1.0, const SweepOptions& opt = {});

// Weights sampled on one grid with sweep estimates of A_alpha cached per alpha.
class DiscreteWeightFamily {
public:
    DiscreteWeightFamily(Grid grid, SweepOptions opt = {}, double R_max = 0.0);

    void add(const Weight& H);  // sampled on the family grid
    void add_sampled(RealGrid values, double alpha);
    std::size_t size() const { return members_.size(); }
    const Weight& member(std::size_t i) const { return members_[i]; }
    const Grid& grid() const { return grid_; }
    const SweepOptions& sweep() const { return opt_; }
    double R_max() const { return R_max_; }
    const std::vector<double>& A(double alpha);

private:
    Grid grid_;
    SweepOptions opt_;
    double R_max_;
    std::vector<Weight> members_;
    std::map<double, std::vector<double>> cache_;
};

struct DiscreteM {
    double value = 0.0;
    std::size_t argmax = 0;
    std::size_t excluded = 0;  // members with A = 0
};

// max over the family of (sum F^alpha H h^n / A_alpha(H))^(1/alpha)
DiscreteM discrete_M(const RealGrid& F, DiscreteWeightFamily& family, double alpha);

// (alpha / beta) Q_beta
double scale_exponent(double alpha, double beta, double Q_beta);

struct HoelderTrialConfig {
    int trials = 100;
    int grid = 32;        // cells per axis on [0, side]^2
    double side = 4.0;
    double alpha = 1.0, beta = 0.5;
    int family_size = 4;
    int chain = 40;       // derived weights per member
    double slack = 0.05;
    std::uint64_t seed = 1;
    int threads = 0;
};

struct HoelderTrialReport {
    int trials = 0, passes = 0;
    double worst_ratio = 0.0;  // max of M_alpha / M_beta over trials
    std::vector<double> ratios;
};

HoelderTrialReport hoelder_trial(const HoelderTrialConfig& cfg);

}  // namespace rlab
