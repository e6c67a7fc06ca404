#pragma once

#include "geomgate/types.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

namespace geomgate {

struct MinimizeResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Nelder-Mead simplex search. `step` sets the initial simplex edge.
inline MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                  std::vector<double> x0, double step = 0.1, int max_iter = 400,
                                  double ftol = 1e-10) {
    std::size_t n = x0.size();
    if (n == 0) return {x0, f(x0), 0, true};
    std::vector<std::vector<double>> pts(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);
    std::vector<std::size_t> idx(n + 1);
    MinimizeResult r;
    for (r.iterations = 0; r.iterations < max_iter; ++r.iterations) {
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
        double best = vals[idx[0]], worst = vals[idx[n]];
        if (std::abs(worst - best) <= ftol * (std::abs(best) + ftol)) {
            r.converged = true;
            break;
        }
        std::vector<double> c(n, 0.0);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) c[i] += pts[idx[k]][i] / static_cast<double>(n);
        auto along = [&](double a) {
            std::vector<double> p(n);
            for (std::size_t i = 0; i < n; ++i) p[i] = c[i] + a * (pts[idx[n]][i] - c[i]);
            return p;
        };
        auto xr = along(-1.0);
        double fr = f(xr);
        if (fr < best) {
            auto xe = along(-2.0);
            double fe = f(xe);
            if (fe < fr) {
                pts[idx[n]] = xe;
                vals[idx[n]] = fe;
            } else {
                pts[idx[n]] = xr;
                vals[idx[n]] = fr;
            }
        } else if (fr < vals[idx[n - 1]]) {
            pts[idx[n]] = xr;
            vals[idx[n]] = fr;
        } else {
            auto xc = along(fr < worst ? -0.5 : 0.5);
            double fc = f(xc);
            if (fc < std::min(fr, worst)) {
                pts[idx[n]] = xc;
                vals[idx[n]] = fc;
            } else {
                for (std::size_t k = 1; k <= n; ++k) {
                    for (std::size_t i = 0; i < n; ++i)
                        pts[idx[k]][i] = pts[idx[0]][i] + 0.5 * (pts[idx[k]][i] - pts[idx[0]][i]);
                    vals[idx[k]] = f(pts[idx[k]]);
                }
            }
        }
    }
    auto it = std::min_element(vals.begin(), vals.end());
    r.x = pts[static_cast<std::size_t>(it - vals.begin())];
    r.value = *it;
    return r;
}

// Root of f on [a, b] by bisection; f(a) and f(b) must bracket a sign change.
template <class F>
double bisect(F&& f, double a, double b, double tol = 1e-12) {
    double fa = f(a), fb = f(b);
    if (fa == 0) return a;
    if (fb == 0) return b;
    if ((fa > 0) == (fb > 0)) throw ConvergenceError("bisection interval does not bracket a root");
    for (int k = 0; k < 200 && b - a > tol; ++k) {
        double m = 0.5 * (a + b), fm = f(m);
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace geomgate
