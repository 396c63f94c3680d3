#include "rlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rlab/parallel.hpp"

namespace rlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kNear = 3;  // |d|_inf <= kNear uses exact cell-pair averages

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("measures: " + msg); }

// Gauss-Legendre nodes and weights on [-1, 1]
void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
    x.assign(m, 0.0);
    w.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (m + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= m; ++k) {
                double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (z * p1 - p0) / (z * z - 1.0);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

// integral over r > 0 of r^(n-1-alpha) prod_i tent(r theta_i - d_i), tent(t) = max(0, 1 - |t|)
double ray_integral(int n, double alpha, const double* theta, const int* d) {
    std::vector<double> bp{0.0};
    for (int i = 0; i < n; ++i) {
        if (theta[i] == 0.0) {
            if (std::abs(d[i]) >= 1) return 0.0;
            continue;
        }
        for (int e = -1; e <= 1; ++e) {
            double r = (d[i] + e) / theta[i];
            if (r > 0.0) bp.push_back(r);
        }
    }
    std::sort(bp.begin(), bp.end());
    double s = n - 1.0 - alpha;
    double total = 0.0;
    std::vector<double> poly, next;
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
        double r0 = bp[k], r1 = bp[k + 1];
        if (r1 - r0 <= 0.0) continue;
        double mid = 0.5 * (r0 + r1);
        poly.assign(1, 1.0);
        bool zero = false;
        for (int i = 0; i < n && !zero; ++i) {
            double t = mid * theta[i] - d[i];
            if (std::abs(t) >= 1.0) {
                zero = true;
                break;
            }
            double sg = t >= 0.0 ? 1.0 : -1.0;
            double c0 = 1.0 + sg * d[i], c1 = -sg * theta[i];
            next.assign(poly.size() + 1, 0.0);
            for (std::size_t j = 0; j < poly.size(); ++j) {
                next[j] += poly[j] * c0;
                next[j + 1] += poly[j] * c1;
            }
            poly.swap(next);
        }
        if (zero) continue;
        for (std::size_t j = 0; j < poly.size(); ++j) {
            double e = s + static_cast<double>(j) + 1.0;
            total += poly[j] * (std::pow(r1, e) - std::pow(r0, e)) / e;
        }
    }
    return total;
}

// Mean of |x - y|^-alpha for x, y uniform in unit cells whose corners differ by d.
double unit_pair_kernel(int n, double alpha, const int* d) {
    std::vector<double> gx, gw;
    const int m = 16;
    gauss_legendre(m, gx, gw);
    if (n == 2) {
        // the angular integrand is smooth between rays through lattice corners
        std::vector<double> cuts{0.0, 2.0 * kPi};
        for (int a = -1; a <= 1; ++a)
            for (int b = -1; b <= 1; ++b) {
                double px = d[0] + a, py = d[1] + b;
                if (px == 0.0 && py == 0.0) continue;
                double t = std::atan2(py, px);
                if (t < 0.0) t += 2.0 * kPi;
                cuts.push_back(t);
            }
        std::sort(cuts.begin(), cuts.end());
        double total = 0.0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            double t0 = cuts[k], t1 = cuts[k + 1];
            if (t1 - t0 < 1e-15) continue;
            for (int i = 0; i < m; ++i) {
                double t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * gx[i];
                double th[2] = {std::cos(t), std::sin(t)};
                total += 0.5 * (t1 - t0) * gw[i] * ray_integral(2, alpha, th, d);
            }
        }
        return total;
    }
    if (n == 3) {
        const int mu = 96, mphi = 192;
        std::vector<double> ux, uw;
        gauss_legendre(mu, ux, uw);
        double total = 0.0;
        for (int i = 0; i < mu; ++i) {
            double st = std::sqrt(1.0 - ux[i] * ux[i]);
            for (int j = 0; j < mphi; ++j) {
                double phi = 2.0 * kPi * (j + 0.5) / mphi;
                double th[3] = {st * std::cos(phi), st * std::sin(phi), ux[i]};
                total += uw[i] * (2.0 * kPi / mphi) * ray_integral(3, alpha, th, d);
            }
        }
        return total;
    }
    fail("cell-pair kernel implemented for n = 2, 3");
}

struct PairTable {
    int n;
    double alpha;
    std::vector<double> values;  // indexed by d + kNear per axis
};

const PairTable& pair_table(int n, double alpha) {
    static std::mutex mtx;
    static std::map<std::pair<int, double>, PairTable> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(n, alpha);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    PairTable t{n, alpha, {}};
    int side = 2 * kNear + 1;
    std::size_t total = 1;
    for (int a = 0; a < n; ++a) total *= side;
    t.values.resize(total);
    std::vector<int> d(n);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (int a = 0; a < n; ++a) {
            d[a] = static_cast<int>(rem % side) - kNear;
            rem /= side;
        }
        // symmetric under sign flips and permutations; compute on the canonical representative
        std::vector<int> c(d);
        for (int& v : c) v = std::abs(v);
        std::sort(c.begin(), c.end());
        std::size_t cidx = 0;
        for (int a = n - 1; a >= 0; --a) cidx = cidx * side + static_cast<std::size_t>(c[a] + kNear);
        if (cidx < idx)
            t.values[idx] = t.values[cidx];
        else
            t.values[idx] = unit_pair_kernel(n, alpha, c.data());
    }
    return cache.emplace(key, std::move(t)).first->second;
}

struct Cells {
    std::vector<long> k;       // n per cell
    std::vector<double> mass;  // per cell
};

Cells nonzero_cells(const FractalMeasure& mu) {
    const Grid& g = mu.density.grid;
    int n = g.dim();
    Cells c;
    double vol = g.cell_volume();
    for (std::size_t i = 0; i < g.size(); ++i) {
        double v = mu.density.values[i];
        if (v == 0.0) continue;
        std::size_t rem = i;
        for (int a = 0; a < n; ++a) {
            c.k.push_back(static_cast<long>(rem % g.count[a]));
            rem /= g.count[a];
        }
        c.mass.push_back(v * vol);
    }
    return c;
}

double sinc(double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; }

// Separable transform: per-axis phase vectors, then one pass over the grid.
class Transformer {
public:
    explicit Transformer(const FractalMeasure& mu) : g_(mu.density.grid), v_(mu.density.values) {
        std::size_t c0 = g_.count[0];
        for (std::size_t r = 0; r < g_.size() / c0; ++r) {
            bool any = false;
            for (std::size_t k = 0; k < c0; ++k) any = any || v_[r * c0 + k] != 0.0;
            if (any) rows_.push_back(r);
        }
    }

    cplx operator()(const double* xi) const {
        int n = g_.dim();
        std::vector<std::vector<cplx>> ph(n);
        double factor = g_.cell_volume();
        for (int a = 0; a < n; ++a) {
            ph[a].resize(g_.count[a]);
            for (std::size_t k = 0; k < g_.count[a]; ++k) {
                double x = g_.lo[a] + static_cast<double>(k) * g_.h[a];
                ph[a][k] = std::polar(1.0, -2.0 * kPi * x * xi[a]);
            }
            factor *= sinc(kPi * g_.h[a] * xi[a]);
        }
        std::size_t c0 = g_.count[0];
        cplx total = 0.0;
        for (std::size_t r : rows_) {
            cplx s = 0.0;
            const double* row = &v_[r * c0];
            for (std::size_t k = 0; k < c0; ++k)
                if (row[k] != 0.0) s += row[k] * ph[0][k];
            std::size_t rem = r;
            for (int a = 1; a < n; ++a) {
                s *= ph[a][rem % g_.count[a]];
                rem /= g_.count[a];
            }
            total += s;
        }
        return total * factor;
    }

private:
    const Grid& g_;
    const std::vector<double>& v_;
    std::vector<std::size_t> rows_;
};

void check_alpha(const FractalMeasure& mu, double alpha) {
    if (!(alpha > 0.0)) fail("alpha must be positive");
    if (!(alpha < mu.n())) fail("energy needs alpha < n");
}

// Diameter of the bounding box of the support.
double support_diameter(const FractalMeasure& mu) {
    const Grid& g = mu.density.grid;
    int n = g.dim();
    std::vector<double> lo(n, 1e300), hi(n, -1e300), x(n);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (mu.density.values[i] == 0.0) continue;
        g.point(i, x.data());
        for (int a = 0; a < n; ++a) {
            lo[a] = std::min(lo[a], x[a] - g.h[a] / 2);
            hi[a] = std::max(hi[a], x[a] + g.h[a] / 2);
        }
    }
    double s = 0.0;
    for (int a = 0; a < n; ++a) s += (hi[a] - lo[a]) * (hi[a] - lo[a]);
    return std::sqrt(s);
}

}  // namespace

double FractalMeasure::support_radius() const {
    const Grid& g = density.grid;
    std::vector<double> x(g.dim());
    double best = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (density.values[i] == 0.0) continue;
        g.point(i, x.data());
        double s = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            double m = std::abs(x[a]) + g.h[a] / 2;
            s += m * m;
        }
        best = std::max(best, std::sqrt(s));
    }
    return best;
}

FractalMeasure make_measure(RealGrid density) {
    const Grid& g = density.grid;
    if (g.dim() < 1) fail("empty grid");
    if (density.values.size() != g.size()) fail("value count does not match the grid");
    std::vector<double> x(g.dim());
    CompensatedSum s;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double v = density.values[i];
        if (!(v >= 0.0) || !std::isfinite(v)) fail("density must be finite and nonnegative");
        if (v == 0.0) continue;
        g.point(i, x.data());
        double r2 = 0.0;
        for (double c : x) r2 += c * c;
        if (std::sqrt(r2) > 1.0 + 1e-12) fail("support must lie in the closed unit ball");
        s.add(v);
    }
    FractalMeasure mu;
    mu.total_mass = s.value() * g.cell_volume();
    if (!(mu.total_mass > 0.0)) fail("total mass must be positive");
    mu.density = std::move(density);
    return mu;
}

cplx fourier_transform(const FractalMeasure& mu, const double* xi) { return Transformer(mu)(xi); }

std::vector<cplx> fourier_transform(const FractalMeasure& mu, const std::vector<double>& xis, int threads) {
    int n = mu.n();
    if (xis.size() % n) fail("frequency list length not a multiple of n");
    Transformer T(mu);
    std::vector<cplx> out(xis.size() / n);
    parallel_blocks(
        out.size(), 16,
        [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) out[i] = T(&xis[i * n]);
        },
        threads);
    return out;
}

double riesz_constant(int n, double alpha) {
    return std::pow(kPi, alpha - n / 2.0) * std::tgamma((n - alpha) / 2.0) / std::tgamma(alpha / 2.0);
}

double energy_direct(const FractalMeasure& mu, double alpha, int threads) {
    check_alpha(mu, alpha);
    const Grid& g = mu.density.grid;
    int n = g.dim();
    double h = g.h[0];
    for (double v : g.h)
        if (std::abs(v - h) > 1e-12 * h) fail("energy_direct needs square cells");
    const PairTable& T = pair_table(n, alpha);
    Cells c = nonzero_cells(mu);
    std::size_t N = c.mass.size();
    const int side = 2 * kNear + 1;
    double scale = std::pow(h, -alpha);
    const std::size_t block = 64;
    std::size_t nblocks = (N + block - 1) / block;
    std::vector<double> partial(nblocks, 0.0);
    parallel_blocks(
        nblocks, 1,
        [&](std::size_t b0, std::size_t b1) {
            for (std::size_t b = b0; b < b1; ++b) {
                CompensatedSum s;
                for (std::size_t i = b * block; i < std::min(N, (b + 1) * block); ++i) {
                    const long* ki = &c.k[i * n];
                    double row = 0.0;
                    for (std::size_t j = 0; j < N; ++j) {
                        const long* kj = &c.k[j * n];
                        bool near = true;
                        double d2 = 0.0;
                        std::size_t idx = 0;
                        for (int a = n - 1; a >= 0; --a) {
                            long d = kj[a] - ki[a];
                            near = near && std::abs(d) <= kNear;
                            d2 += static_cast<double>(d * d);
                            idx = idx * side + static_cast<std::size_t>(std::clamp<long>(d + kNear, 0, side - 1));
                        }
                        double k = near ? T.values[idx] : std::pow(d2, -alpha / 2.0);
                        row += c.mass[j] * k;
                    }
                    s.add(c.mass[i] * row);
                }
                partial[b] = s.value();
            }
        },
        threads);
    CompensatedSum total;
    for (double p : partial) total.add(p);
    return total.value() * scale;
}

double energy_fourier(const FractalMeasure& mu, double alpha, double cutoff, int threads) {
    check_alpha(mu, alpha);
    if (!(cutoff > 0.0)) fail("cutoff must be positive");
    int n = mu.n();
    if (n != 2 && n != 3) fail("energy_fourier implemented for n = 2, 3");
    double L = std::max(support_diameter(mu), 1e-3);
    double dr = 0.5 / L;
    auto panels = static_cast<std::size_t>(std::ceil(cutoff / dr));
    dr = cutoff / static_cast<double>(panels);
    std::vector<double> gx, gw;
    gauss_legendre(8, gx, gw);
    // frequencies and weights; |mu-hat|^2 is even so half the directions suffice
    std::vector<double> xis, wts;
    for (std::size_t p = 0; p < panels; ++p) {
        double r0 = p * dr, r1 = (p + 1) * dr;
        double t0 = std::pow(r0, alpha), t1 = std::pow(r1, alpha);
        auto Na = static_cast<std::size_t>(std::ceil(4.0 * kPi * r1 * L)) + 32;
        for (int i = 0; i < 8; ++i) {
            double t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * gx[i];
            double r = std::pow(t, 1.0 / alpha);
            // r^(alpha - n) r^(n-1) dr = dt / alpha
            double wr = 0.5 * (t1 - t0) * gw[i] / alpha;
            if (n == 2) {
                for (std::size_t j = 0; j < Na; ++j) {
                    double th = kPi * static_cast<double>(j) / static_cast<double>(Na);
                    xis.push_back(r * std::cos(th));
                    xis.push_back(r * std::sin(th));
                    wts.push_back(wr * 2.0 * kPi / static_cast<double>(Na));
                }
            } else {
                std::size_t Nu = Na / 2 + 8;
                std::vector<double> ux, uw;
                gauss_legendre(static_cast<int>(Nu), ux, uw);
                for (std::size_t a = 0; a < Nu; ++a) {
                    double st = std::sqrt(1.0 - ux[a] * ux[a]);
                    for (std::size_t j = 0; j < Na; ++j) {
                        double ph = kPi * static_cast<double>(j) / static_cast<double>(Na);
                        xis.push_back(r * st * std::cos(ph));
                        xis.push_back(r * st * std::sin(ph));
                        xis.push_back(r * ux[a]);
                        wts.push_back(wr * uw[a] * 2.0 * kPi / static_cast<double>(Na));
                    }
                }
            }
        }
    }
    auto F = fourier_transform(mu, xis, threads);
    CompensatedSum s;
    for (std::size_t i = 0; i < F.size(); ++i) s.add(std::norm(F[i]) * wts[i]);
    return s.value();
}

ConcentrationReport concentration(const FractalMeasure& mu, double alpha, double R, int threads) {
    int n = mu.n();
    if (!(alpha > 0.0 && alpha <= n)) fail("concentration needs 0 < alpha <= n");
    if (!(R > 0.0)) fail("R must be positive");
    const Grid& g = mu.density.grid;
    double h = *std::min_element(g.h.begin(), g.h.end());
    BallIntegrator B(mu.density);
    std::vector<double> centers;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (mu.density.values[i] == 0.0) continue;
        g.point(i, x.data());
        centers.insert(centers.end(), x.begin(), x.end());
    }
    std::size_t M = centers.size() / n;
    ConcentrationReport rep;
    // radii from 2 down to the cell size, so the cumulative max tracks small scales
    for (double r = 2.0; r >= h * (1 - 1e-12); r /= 2.0) rep.radii.push_back(r);
    std::vector<double> cum, cumR;
    double best = 0.0, bestR = 0.0;
    for (double r : rep.radii) {
        std::vector<double> val(M);
        parallel_blocks(
            M, 64,
            [&](std::size_t b, std::size_t e) {
                for (std::size_t i = b; i < e; ++i) val[i] = B.mass(&centers[i * n], r);
            },
            threads);
        double lvl = *std::max_element(val.begin(), val.end()) / std::pow(r, alpha);
        rep.level_max.push_back(lvl);
        best = std::max(best, lvl);
        cum.push_back(best);
        if (r >= 1.0 / R * (1 - 1e-12)) {
            bestR = std::max(bestR, lvl);
            cumR.push_back(bestR);
        }
    }
    rep.C_alpha = best;
    rep.C_alpha_R = bestR;
    auto stable = [](const std::vector<double>& c) {
        return c.size() < 2 || c[c.size() - 1] <= 1.1 * c[c.size() - 2];
    };
    rep.stabilized = stable(cum);
    rep.stabilized_R = stable(cumR);
    return rep;
}

double spherical_means(const FractalMeasure& mu, double R, int p_prime, int threads) {
    int n = mu.n();
    if (!(R >= 1.0)) fail("spherical_means needs R >= 1");
    if (p_prime != 1 && p_prime != 2) fail("spherical_means needs p' in {1, 2}");
    const Grid& g = mu.density.grid;
    double h = *std::max_element(g.h.begin(), g.h.end());
    if (R * h > 0.5)
        fail("density grid too coarse for frequency R = " + std::to_string(R) + " (R h = " + std::to_string(R * h) +
             " > 0.5)");
    double hs = 0.1 / (1.0 + R * mu.support_radius());
    SurfaceChart S;
    if (n == 2)
        S = build_chart(SurfaceKind::circle, 2, hs);
    else if (n == 3)
        S = build_chart(SurfaceKind::sphere, 3, hs);
    else
        fail("spherical_means implemented for n = 2, 3");
    std::vector<double> xis(S.points.size());
    for (std::size_t i = 0; i < xis.size(); ++i) xis[i] = R * S.points[i];
    auto F = fourier_transform(mu, xis, threads);
    CompensatedSum s;
    for (std::size_t i = 0; i < F.size(); ++i) s.add(S.weights[i] * std::pow(std::abs(F[i]), p_prime));
    return std::pow(s.value(), 1.0 / p_prime);
}

EnergyReport energy_report(const FractalMeasure& mu, double alpha, double cutoff, const std::vector<double>& R,
                           int threads) {
    EnergyReport rep;
    rep.alpha = alpha;
    rep.I_direct = energy_direct(mu, alpha, threads);
    rep.I_fourier_over_c = energy_fourier(mu, alpha, cutoff, threads);
    rep.C_alpha = concentration(mu, std::min<double>(alpha, mu.n()), 1.0, threads).C_alpha;
    for (double r : R) {
        rep.R.push_back(r);
        rep.C_alpha_R.push_back(concentration(mu, alpha, r, threads).C_alpha_R);
    }
    return rep;
}

namespace {

double bump1(double t) { return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

RealGrid bump_grid(double rho, int n, double amplitude) {
    double side = rho / 2.0;
    double hc = side / kBumpCells;
    Grid g;
    g.lo.assign(n, -rho / 4.0 + hc / 2.0);
    g.h.assign(n, hc);
    g.count.assign(n, kBumpCells);
    RealGrid out{g, std::vector<double>(g.size())};
    std::vector<double> x(n);
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.point(i, x.data());
        double v = amplitude;
        for (double c : x) v *= bump1(4.0 * c / rho);
        out.values[i] = v;
    }
    return out;
}

double bump_scale(int n) {
    static std::mutex mtx;
    static std::map<int, double> cache;
    std::lock_guard<std::mutex> lock(mtx);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
    FractalMeasure base = make_measure(bump_grid(1.0, n, 1.0));
    std::vector<double> xis;
    if (n == 2) {
        for (int j = 0; j < 720; ++j) {
            double t = 2.0 * kPi * j / 720.0;
            xis.push_back(std::cos(t));
            xis.push_back(std::sin(t));
        }
    } else {
        SurfaceChart S = build_chart(n == 3 ? SurfaceKind::sphere : SurfaceKind::circle, n, 0.05);
        xis = S.points;
    }
    auto F = fourier_transform(base, xis, 1);
    double lo = 1e300;
    for (auto v : F) lo = std::min(lo, v.real());
    if (!(lo > 0.0)) fail("bump profile transform is not positive on the unit sphere");
    return cache.emplace(n, 1.0 / lo).first->second;
}

}  // namespace

FractalMeasure bump_measure(double rho, double alpha, int n) {
    if (!(rho > 0.0 && rho <= 1.0)) fail("bump_measure needs 0 < rho <= 1");
    if (n != 2 && n != 3) fail("bump_measure implemented for n = 2, 3");
    if (!(alpha > 0.0 && alpha <= n)) fail("bump_measure needs 0 < alpha <= n");
    double s = bump_scale(n);
    return make_measure(bump_grid(rho, n, s * std::pow(rho, alpha / 2.0 - n)));
}

FractalMeasure segment_measure(double h) {
    if (!(h > 0.0 && h <= 0.5)) fail("segment_measure needs 0 < h <= 1/2");
    auto N = static_cast<std::size_t>(std::llround(1.0 / h));
    h = 1.0 / static_cast<double>(N);
    Grid g{{h / 2, 0.0}, {h, h}, {N, 1}};
    return make_measure(RealGrid{g, std::vector<double>(N, 1.0 / h)});
}

FractalMeasure cantor_measure(int depth) {
    if (depth < 0 || depth > 12) fail("cantor_measure depth out of range");
    std::size_t N = 1;
    for (int i = 0; i <= depth; ++i) N *= 3;
    double h = 1.0 / static_cast<double>(N);
    Grid g{{h / 2, 0.0}, {h, h}, {N, 1}};
    std::vector<double> v(N, 0.0);
    std::size_t kept = 0;
    for (std::size_t k = 0; k < N; ++k) {
        std::size_t q = k / 3;  // the top `depth` ternary digits
        bool ok = true;
        for (int i = 0; i < depth; ++i, q /= 3) ok = ok && q % 3 != 1;
        if (ok) {
            v[k] = 1.0;
            ++kept;
        }
    }
    for (double& x : v) x /= static_cast<double>(kept) * h * h;
    return make_measure(RealGrid{g, std::move(v)});
}

FractalMeasure ball_measure(int n, double r, double h) {
    if (!(r > 0.0 && r <= 1.0)) fail("ball_measure needs 0 < r <= 1");
    if (!(h > 0.0 && h < r)) fail("ball_measure needs 0 < h < r");
    Grid g = make_cell_grid(cube_box(n, -r, r), h);
    RealGrid out{g, std::vector<double>(g.size(), 0.0)};
    std::vector<double> x(n);
    std::size_t kept = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.point(i, x.data());
        double s = 0.0;
        for (int a = 0; a < n; ++a) {
            double m = std::abs(x[a]) + g.h[a] / 2;
            s += m * m;
        }
        if (std::sqrt(s) <= r * (1 + 1e-12)) {
            out.values[i] = 1.0;
            ++kept;
        }
    }
    if (!kept) fail("ball_measure: no cell fits inside the ball");
    for (double& v : out.values) v /= static_cast<double>(kept) * g.cell_volume();
    return make_measure(std::move(out));
}

}  // namespace rlab
