#include "rlab/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rlab {

FitResult fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit: size mismatch");
    if (x.size() < 2) throw std::invalid_argument("fit: need at least two points");
    std::size_t m = x.size();
    std::vector<double> lx(m), ly(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(x[i] > 0.0 && y[i] > 0.0)) throw std::invalid_argument("fit: values must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit: x values must differ");
    FitResult f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double r = ly[i] - (f.intercept + f.slope * lx[i]);
        f.residuals.push_back(r);
        ss_res += r * r;
    }
    f.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    f.stabilized = f.r_squared >= kMinRSquared;
    return f;
}

}  // namespace rlab
