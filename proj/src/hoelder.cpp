#include "rlab/hoelder.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace rlab {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("hoelder: " + msg); }

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

IterationState iterate(double alpha, double beta, double N, double M, int K, int n) {
    if (!(beta > 0.0 && beta < alpha)) fail("need 0 < beta < alpha");
    if (n > 0 && alpha > n) fail("need alpha <= n");
    if (!(N >= 1.0)) fail("need N >= 1");
    if (!(M > 0.0)) fail("need M > 0");
    if (K < 0) fail("need K >= 0");
    IterationState s;
    s.alpha = alpha;
    s.beta = beta;
    s.p = alpha / (alpha - beta);
    s.N = N;
    s.M = M;
    s.K = K;
    double b0 = 1.0, C0 = std::pow(N, 1.0 + alpha);
    s.beta_rec.push_back(b0);
    s.C_rec.push_back(C0);
    double ip = 1.0 / s.p;
    for (int k = 1; k <= K; ++k) {
        s.beta_rec.push_back(beta + s.beta_rec.back() * ip);
        s.C_rec.push_back(M * std::pow(s.C_rec.back(), ip));
    }
    for (int k = 0; k <= K; ++k) {
        double pk = std::pow(ip, k);
        double geo = (1.0 - pk) / (1.0 - ip);
        s.beta_closed.push_back(beta * geo + b0 * pk);
        s.C_closed.push_back(std::pow(M, geo) * std::pow(C0, pk));
        s.closed_residual = std::max({s.closed_residual, rel(s.beta_rec[k], s.beta_closed[k]),
                                      rel(s.C_rec[k], s.C_closed[k])});
    }
    s.beta_limit = beta / (1.0 - ip);
    s.C_limit = std::pow(M, alpha / beta);
    s.beta_limit_residual = std::abs(s.beta_rec.back() - s.beta_limit);
    s.C_limit_residual = rel(s.C_rec.back(), s.C_limit);
    return s;
}

RealGrid truncate(const RealGrid& F, double N) {
    if (!(N >= 1.0)) fail("truncation level must be >= 1");
    RealGrid out = F;
    const Grid& g = F.grid;
    std::vector<double> x(g.dim());
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.point(i, x.data());
        double far = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            double m = std::abs(x[a]) + g.h[a] / 2;
            far += m * m;
        }
        if (std::sqrt(far) > N || !(F.values[i] <= N)) out.values[i] = 0.0;
    }
    return out;
}

DerivedWeight derive_weight(const RealGrid& F, const Weight& H, double alpha, double beta, double N,
                            double beta_prev, const SweepOptions& opt) {
    if (!(beta > 0.0 && beta < alpha)) fail("need 0 < beta < alpha");
    if (!(beta_prev > 0.0)) fail("need beta_prev > 0");
    for (double v : F.values)
        if (!(v >= 0.0)) fail("F must be nonnegative");
    double p = alpha / (alpha - beta);
    double e = beta_prev / p;
    RealGrid FN = truncate(F, N);
    RealGrid Hs = H.family == WeightFamily::sampled && H.params.samples->grid.lo == F.grid.lo &&
                          H.params.samples->grid.h == F.grid.h && H.params.samples->grid.count == F.grid.count
                      ? *H.params.samples
                      : sample_weight(H, F.grid);
    RealGrid D{F.grid, std::vector<double>(F.grid.size(), 0.0)};
    double norm = std::pow(N, -e);
    for (std::size_t i = 0; i < D.values.size(); ++i)
        if (FN.values[i] > 0.0 && Hs.values[i] > 0.0)
            D.values[i] = std::min(1.0, norm * std::pow(FN.values[i], e) * Hs.values[i]);

    SweepOptions o = opt;
    o.extra_radii.push_back(N);
    double R_max = std::max(N, 2.0);
    DerivedWeight out;
    Weight Hw = sampled_weight(Hs, alpha);
    out.A_alpha_H = estimate_A_alpha(Hw, alpha, R_max, o).max_ratio;
    double C = std::pow(N, beta_prev + alpha);
    out.bound = norm * std::pow(C, 1.0 / p) * out.A_alpha_H;
    out.weight = sampled_weight(std::move(D), beta);
    out.A_beta_measured = estimate_A_alpha(out.weight, beta, R_max, o).max_ratio;
    out.certified = out.A_beta_measured <= out.bound * 1.01;
    return out;
}

DiscreteWeightFamily::DiscreteWeightFamily(Grid grid, SweepOptions opt, double R_max)
    : grid_(std::move(grid)), opt_(std::move(opt)), R_max_(R_max) {
    if (R_max_ <= 0.0) {
        Box e = grid_.extent();
        double span = 0.0;
        for (int a = 0; a < grid_.dim(); ++a) span = std::max(span, e.hi[a] - e.lo[a]);
        R_max_ = std::max(2.0, std::exp2(std::ceil(std::log2(span))));
    }
}

void DiscreteWeightFamily::add(const Weight& H) { add_sampled(sample_weight(H, grid_), H.nominal_alpha); }

void DiscreteWeightFamily::add_sampled(RealGrid values, double alpha) {
    if (values.grid.count != grid_.count || values.grid.lo != grid_.lo || values.grid.h != grid_.h)
        fail("family members must share one grid");
    members_.push_back(sampled_weight(std::move(values), std::min<double>(alpha, grid_.dim())));
    cache_.clear();
}

const std::vector<double>& DiscreteWeightFamily::A(double alpha) {
    auto it = cache_.find(alpha);
    if (it != cache_.end()) return it->second;
    std::vector<double> a;
    for (const auto& H : members_) a.push_back(estimate_A_alpha(H, alpha, R_max_, opt_).max_ratio);
    return cache_.emplace(alpha, std::move(a)).first->second;
}

DiscreteM discrete_M(const RealGrid& F, DiscreteWeightFamily& family, double alpha) {
    if (family.size() == 0) fail("empty weight family");
    if (F.grid.count != family.grid().count) fail("F and the family live on different grids");
    const auto& A = family.A(alpha);
    DiscreteM out;
    double vol = F.grid.cell_volume();
    for (std::size_t m = 0; m < family.size(); ++m) {
        if (!(A[m] > 0.0)) {
            ++out.excluded;
            continue;
        }
        const auto& H = family.member(m).params.samples->values;
        CompensatedSum s;
        for (std::size_t i = 0; i < H.size(); ++i)
            if (H[i] > 0.0 && F.values[i] > 0.0) s.add(std::pow(F.values[i], alpha) * H[i]);
        double v = std::pow(s.value() * vol / A[m], 1.0 / alpha);
        if (v > out.value) {
            out.value = v;
            out.argmax = m;
        }
    }
    return out;
}

double scale_exponent(double alpha, double beta, double Q_beta) {
    if (!(beta > 0.0 && beta <= alpha)) fail("scale_exponent needs 0 < beta <= alpha");
    if (!(Q_beta >= 0.0)) fail("scale_exponent needs Q_beta >= 0");
    return alpha / beta * Q_beta;
}

HoelderTrialReport hoelder_trial(const HoelderTrialConfig& cfg) {
    if (cfg.trials < 1 || cfg.grid < 2 || cfg.family_size < 1 || cfg.chain < 1) fail("bad trial configuration");
    if (!(cfg.beta > 0.0 && cfg.beta < cfg.alpha && cfg.alpha <= 2.0)) fail("trial needs 0 < beta < alpha <= 2");
    double h = cfg.side / cfg.grid;
    Grid g = make_cell_grid(cube_box(2, 0.0, cfg.side), h);
    double corner = cfg.side * std::sqrt(2.0);
    double p = cfg.alpha / (cfg.alpha - cfg.beta);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    SweepOptions opt;
    opt.threads = cfg.threads;
    HoelderTrialReport rep;
    rep.trials = cfg.trials;
    for (int t = 0; t < cfg.trials; ++t) {
        RealGrid F{g, std::vector<double>(g.size())};
        for (double& v : F.values) v = 4.0 * U(rng) * U(rng);
        // N large enough that F_N = F: the chain then consists of rescaled F^e H
        double N = std::ceil(std::max(corner, 4.0));
        DiscreteWeightFamily base(g, opt), aug(g, opt);
        for (int m = 0; m < cfg.family_size; ++m) {
            // random blocks of random heights
            RealGrid H{g, std::vector<double>(g.size(), 0.0)};
            int block = 1 << (m % 4);
            double density = 0.2 + 0.6 * U(rng);
            std::vector<double> level((g.size() / block) + cfg.grid + 1);
            for (double& v : level) v = U(rng) < density ? U(rng) : 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                std::size_t ix = i % g.count[0], iy = i / g.count[0];
                H.values[i] = level[(iy / block) * (cfg.grid / block + 1) + ix / block];
            }
            base.add_sampled(H, cfg.alpha);
            aug.add_sampled(H, cfg.alpha);
            Weight Hw = base.member(base.size() - 1);
            double b = 1.0;
            for (int k = 1; k <= cfg.chain; ++k) {
                DerivedWeight d = derive_weight(F, Hw, cfg.alpha, cfg.beta, N, b, opt);
                aug.add_sampled(*d.weight.params.samples, cfg.beta);
                b = cfg.beta + b / p;
            }
        }
        double lhs = discrete_M(F, base, cfg.alpha).value;
        double rhs = discrete_M(F, aug, cfg.beta).value;
        double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? INFINITY : 0.0);
        rep.ratios.push_back(ratio);
        rep.worst_ratio = std::max(rep.worst_ratio, ratio);
        if (lhs <= rhs * (1.0 + cfg.slack)) ++rep.passes;
    }
    return rep;
}

}  // namespace rlab
