#include "rlab/extension.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rlab/parallel.hpp"

namespace rlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kReseed = 32;  // steps between direct phase evaluations

struct ActiveNodes {
    int n = 0;
    std::size_t m = 0;
    std::vector<double> xi;      // n per node
    std::vector<double> re, im;  // m per node: w_j f_j
};

ActiveNodes gather(const std::vector<SurfaceDensity>& fs) {
    if (fs.empty()) throw std::invalid_argument("extension: no densities");
    const SurfaceChart& c = *fs.front().chart;
    for (const auto& f : fs) {
        if (f.chart.get() != &c) throw std::invalid_argument("extension: densities on different charts");
        if (f.values.size() != c.size()) throw std::invalid_argument("extension: density size mismatch");
    }
    ActiveNodes a;
    a.n = c.n;
    a.m = fs.size();
    for (std::size_t j = 0; j < c.size(); ++j) {
        bool any = false;
        for (const auto& f : fs) any = any || f.values[j] != cplx(0.0);
        if (!any) continue;  // zero nodes contribute nothing
        a.xi.insert(a.xi.end(), c.point(j), c.point(j) + c.n);
        for (const auto& f : fs) {
            cplx v = c.weights[j] * f.values[j];
            a.re.push_back(v.real());
            a.im.push_back(v.imag());
        }
    }
    return a;
}

void eval_run(const ActiveNodes& a, const double* x0, std::size_t len, double step, double* out_re,
              double* out_im, std::size_t stride) {
    int n = a.n;
    std::size_t J = a.re.size() / std::max<std::size_t>(a.m, 1);
    for (std::size_t j = 0; j < J; ++j) {
        const double* xi = &a.xi[j * n];
        const double* cr = &a.re[j * a.m];
        const double* ci = &a.im[j * a.m];
        double base = 0.0;
        for (int d = 0; d < n; ++d) base += x0[d] * xi[d];
        double sr = std::cos(-kTwoPi * step * xi[0]), si = std::sin(-kTwoPi * step * xi[0]);
        double pr = 0.0, pi = 0.0;
        for (std::size_t k = 0; k < len; ++k) {
            if (k % kReseed == 0) {
                double ph = -kTwoPi * (base + static_cast<double>(k) * step * xi[0]);
                pr = std::cos(ph);
                pi = std::sin(ph);
            }
            for (std::size_t mm = 0; mm < a.m; ++mm) {
                out_re[mm * stride + k] += cr[mm] * pr - ci[mm] * pi;
                out_im[mm * stride + k] += cr[mm] * pi + ci[mm] * pr;
            }
            double t = pr * sr - pi * si;
            pi = pr * si + pi * sr;
            pr = t;
        }
    }
}

}  // namespace

void check_resolution(const SurfaceChart& chart, double xmax) {
    double need = kResolution / (1.0 + xmax);
    if (chart.node_spacing > need * (1.0 + 1e-12))
        throw std::invalid_argument("extension: node spacing " + std::to_string(chart.node_spacing) +
                                    " does not resolve |x| <= " + std::to_string(xmax) + " (need <= " +
                                    std::to_string(need) + ")");
}

void PointRuns::add(const double* x0, std::size_t count) {
    start.insert(start.end(), x0, x0 + n);
    len.push_back(count);
    offset.push_back(total);
    total += count;
}

double PointRuns::max_norm() const {
    double best = 0.0;
    for (std::size_t r = 0; r < len.size(); ++r) {
        if (!len[r]) continue;
        for (double t : {0.0, static_cast<double>(len[r] - 1)}) {
            double s = 0.0;
            for (int d = 0; d < n; ++d) {
                double x = start[r * n + d] + (d == 0 ? t * step : 0.0);
                s += x * x;
            }
            best = std::max(best, std::sqrt(s));
        }
    }
    return best;
}

std::vector<std::vector<cplx>> evaluate_extension(const std::vector<SurfaceDensity>& fs, const PointRuns& runs,
                                                  int threads) {
    ActiveNodes a = gather(fs);
    if (runs.n != a.n) throw std::invalid_argument("extension: point dimension mismatch");
    check_resolution(*fs.front().chart, runs.max_norm());
    std::vector<std::vector<cplx>> out(a.m, std::vector<cplx>(runs.total));
    parallel_blocks(
        runs.len.size(), 8,
        [&](std::size_t b, std::size_t e) {
            std::vector<double> re, im;
            for (std::size_t r = b; r < e; ++r) {
                std::size_t L = runs.len[r];
                re.assign(a.m * L, 0.0);
                im.assign(a.m * L, 0.0);
                eval_run(a, &runs.start[r * runs.n], L, runs.step, re.data(), im.data(), L);
                for (std::size_t mm = 0; mm < a.m; ++mm)
                    for (std::size_t k = 0; k < L; ++k)
                        out[mm][runs.offset[r] + k] = cplx(re[mm * L + k], im[mm * L + k]);
            }
        },
        threads);
    return out;
}

std::vector<cplx> evaluate_extension(const SurfaceDensity& f, const std::vector<double>& points, int threads) {
    int n = f.chart->n;
    if (points.size() % n) throw std::invalid_argument("extension: point list length not a multiple of n");
    PointRuns runs;
    runs.n = n;
    runs.step = 0.0;
    for (std::size_t i = 0; i < points.size(); i += n) runs.add(&points[i], 1);
    return std::move(evaluate_extension(std::vector<SurfaceDensity>{f}, runs, threads).front());
}

GridField evaluate_on_grid(const SurfaceDensity& f, const Box& box, double h, std::size_t point_budget,
                           int threads) {
    Grid g = make_grid(box, h);
    if (g.size() > point_budget)
        throw std::invalid_argument("extension: grid of " + std::to_string(g.size()) + " points exceeds budget " +
                                    std::to_string(point_budget));
    PointRuns runs;
    runs.n = g.dim();
    runs.step = g.h[0];
    std::size_t rows = g.size() / g.count[0];
    std::vector<double> x(g.dim());
    for (std::size_t r = 0; r < rows; ++r) {
        g.point(r * g.count[0], x.data());
        runs.add(x.data(), g.count[0]);
    }
    GridField out;
    out.grid = g;
    out.samples = std::move(evaluate_extension(std::vector<SurfaceDensity>{f}, runs, threads).front());
    return out;
}

double weighted_lq_norm(const GridField& field, const Weight& H, double q) {
    if (!(q > 0.0)) throw std::invalid_argument("weighted_lq_norm: q must be positive");
    if (H.n != field.grid.dim()) throw std::invalid_argument("weighted_lq_norm: dimension mismatch");
    CompensatedSum s;
    std::vector<double> x(H.n);
    for (std::size_t i = 0; i < field.samples.size(); ++i) {
        field.grid.point(i, x.data());
        double w = H.cell_average(x.data(), field.grid.h.data());
        if (w > 0.0) s.add(std::pow(std::abs(field.samples[i]), q) * w);
    }
    return std::pow(s.value() * field.grid.cell_volume(), 1.0 / q);
}

double WeightedCells::cell_volume() const { return std::pow(h, runs.n); }

WeightedCells weighted_cells(const Weight& H, double R, double h, std::size_t point_budget) {
    if (!(R > 0.0 && h > 0.0)) throw std::invalid_argument("weighted_cells: R and h must be positive");
    int n = H.n;
    WeightedCells out;
    out.h = h;
    out.runs.n = n;
    out.runs.step = h;
    auto K = static_cast<long>(std::ceil(R / h));  // centers (k + 1/2) h, k in [-K, K)
    auto center = [h](long k) { return (static_cast<double>(k) + 0.5) * h; };
    std::size_t side = static_cast<std::size_t>(2 * K);

    // transverse factors (all ones when H has no product structure)
    bool sep = H.separable();
    std::vector<std::vector<double>> fac(n, std::vector<double>(side, 1.0));
    if (sep)
        for (int a = 0; a < n; ++a)
            for (std::size_t i = 0; i < side; ++i) fac[a][i] = H.axis_average(a, center(static_cast<long>(i) - K), h);
    std::vector<std::vector<std::size_t>> nz(n);
    for (int a = 1; a < n; ++a)
        for (std::size_t i = 0; i < side; ++i)
            if (fac[a][i] > 0.0) nz[a].push_back(i);

    std::vector<std::size_t> pick(n, 0);
    std::vector<double> x(n), hv(n, h);
    auto flush = [&](long k0, long k1, const std::vector<double>& w) {
        if (k1 <= k0) return;
        x[0] = center(k0);
        out.runs.add(x.data(), static_cast<std::size_t>(k1 - k0));
        out.weight.insert(out.weight.end(), w.begin(), w.end());
        if (out.runs.total > point_budget)
            throw std::invalid_argument("weighted_cells: more than " + std::to_string(point_budget) + " cells");
    };
    for (;;) {
        bool empty = false;
        double t2 = 0.0, tw = 1.0;
        for (int a = 1; a < n; ++a) {
            if (nz[a].empty()) {
                empty = true;
                break;
            }
            x[a] = center(static_cast<long>(nz[a][pick[a]]) - K);
            t2 += x[a] * x[a];
            tw *= fac[a][nz[a][pick[a]]];
        }
        if (empty) break;
        if (t2 <= R * R) {
            double chord = std::sqrt(R * R - t2);
            long k0 = static_cast<long>(std::ceil(-chord / h - 0.5));
            long k1 = static_cast<long>(std::floor(chord / h - 0.5));
            long run0 = 0;
            std::vector<double> w;
            for (long k = k0; k <= k1; ++k) {
                x[0] = center(k);
                double v;
                if (sep)
                    v = tw * H.axis_average(0, x[0], h);
                else
                    v = H.cell_average(x.data(), hv.data());
                if (v > 0.0) {
                    if (w.empty()) run0 = k;
                    w.push_back(v);
                } else if (!w.empty()) {
                    flush(run0, k, w);
                    w.clear();
                }
            }
            flush(run0, run0 + static_cast<long>(w.size()), w);
        }
        int a = 1;
        while (a < n) {
            if (++pick[a] < nz[a].size()) break;
            pick[a] = 0;
            ++a;
        }
        if (a >= n) break;
    }
    return out;
}

std::vector<double> lq_integrals(const std::vector<SurfaceDensity>& fs, const WeightedCells& cells, double q,
                                 int threads) {
    if (!(q > 0.0)) throw std::invalid_argument("lq_integrals: q must be positive");
    auto E = evaluate_extension(fs, cells.runs, threads);
    std::vector<double> out;
    for (const auto& e : E) {
        CompensatedSum s;
        for (std::size_t i = 0; i < e.size(); ++i) s.add(std::pow(std::abs(e[i]), q) * cells.weight[i]);
        out.push_back(s.value() * cells.cell_volume());
    }
    return out;
}

std::vector<cplx> adjoint_extension(const SurfaceChart& chart, const PointRuns& runs, const std::vector<cplx>& g,
                                    int threads) {
    if (runs.n != chart.n) throw std::invalid_argument("adjoint_extension: point dimension mismatch");
    if (g.size() != runs.total) throw std::invalid_argument("adjoint_extension: value count mismatch");
    check_resolution(chart, runs.max_norm());
    int n = chart.n;
    std::vector<cplx> out(chart.size());
    parallel_blocks(
        chart.size(), 64,
        [&](std::size_t b, std::size_t e) {
            for (std::size_t j = b; j < e; ++j) {
                const double* xi = chart.point(j);
                double sr = std::cos(kTwoPi * runs.step * xi[0]), si = std::sin(kTwoPi * runs.step * xi[0]);
                double ar = 0.0, ai = 0.0;
                for (std::size_t r = 0; r < runs.len.size(); ++r) {
                    const double* x0 = &runs.start[r * n];
                    double base = 0.0;
                    for (int d = 0; d < n; ++d) base += x0[d] * xi[d];
                    const cplx* gv = &g[runs.offset[r]];
                    double pr = 0.0, pi = 0.0;
                    for (std::size_t k = 0; k < runs.len[r]; ++k) {
                        if (k % kReseed == 0) {
                            double ph = kTwoPi * (base + static_cast<double>(k) * runs.step * xi[0]);
                            pr = std::cos(ph);
                            pi = std::sin(ph);
                        }
                        ar += gv[k].real() * pr - gv[k].imag() * pi;
                        ai += gv[k].real() * pi + gv[k].imag() * pr;
                        double t = pr * sr - pi * si;
                        pi = pr * si + pi * sr;
                        pr = t;
                    }
                }
                out[j] = cplx(ar, ai);
            }
        },
        threads);
    return out;
}

L2Sup l2_sup(const SurfaceDensity& start, const WeightedCells& cells, int max_iter, double tol, int threads) {
    L2Sup res;
    SurfaceDensity f = start;
    double prev = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        double nrm = lp_norm(f, 2.0);
        if (!(nrm > 0.0)) throw std::invalid_argument("l2_sup: zero density");
        for (auto& v : f.values) v /= nrm;
        auto E = evaluate_extension({f}, cells.runs, threads).front();
        CompensatedSum s;
        for (std::size_t i = 0; i < E.size(); ++i) {
            s.add(std::norm(E[i]) * cells.weight[i]);
            E[i] *= cells.weight[i] * cells.cell_volume();
        }
        double val = s.value() * cells.cell_volume();
        res.iterations = it + 1;
        res.last_change = prev > 0.0 ? (val - prev) / val : 1.0;
        if (val >= res.value) {
            res.value = val;
            res.maximizer = f;
        }
        if (prev > 0.0 && std::abs(val - prev) <= tol * val) break;
        prev = val;
        f.values = adjoint_extension(*f.chart, cells.runs, E, threads);
    }
    return res;
}

}  // namespace rlab
