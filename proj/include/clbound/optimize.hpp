#pragma once

// One-dimensional minimization: dense grid scan to localize, golden-section
// to polish. Unimodality is not assumed; the grid guards against secondary
// local minima.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace clbound {

struct MinResult {
    double x = 0.0;
    double value = 0.0;
    long evals = 0;
};

template <typename F>
MinResult golden_section_min(F&& f, double a, double b, double xtol, long* evals = nullptr) {
    if (!(a <= b)) throw std::invalid_argument("golden_section_min: need a <= b");
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    long n = 2;
    while (b - a > xtol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
        ++n;
    }
    if (evals) *evals += n;
    MinResult r;
    r.x = f1 <= f2 ? x1 : x2;
    r.value = f1 <= f2 ? f1 : f2;
    r.evals = n;
    return r;
}

enum class GridSpacing { Linear, Log };

// Scan `grid_n` points over [lo, hi], then refine around the best point with
// golden section restricted to its neighboring cells.
template <typename F>
MinResult grid_then_golden(F&& f, double lo, double hi, int grid_n, double xtol,
                           GridSpacing spacing = GridSpacing::Linear) {
    if (grid_n < 2) throw std::invalid_argument("grid_then_golden: grid_n >= 2");
    if (spacing == GridSpacing::Log && !(lo > 0.0))
        throw std::invalid_argument("grid_then_golden: log spacing needs lo > 0");
    std::vector<double> xs(grid_n);
    if (spacing == GridSpacing::Linear) {
        const double h = (hi - lo) / (grid_n - 1);
        for (int i = 0; i < grid_n; ++i) xs[i] = lo + h * i;
    } else {
        const double la = std::log(lo), lb = std::log(hi);
        const double h = (lb - la) / (grid_n - 1);
        for (int i = 0; i < grid_n; ++i) xs[i] = std::exp(la + h * i);
    }
    xs.back() = hi;

    int best = 0;
    double fbest = f(xs[0]);
    long evals = 1;
    for (int i = 1; i < grid_n; ++i) {
        const double v = f(xs[i]);
        ++evals;
        if (v < fbest) {
            fbest = v;
            best = i;
        }
    }
    const double a = xs[best > 0 ? best - 1 : 0];
    const double b = xs[best < grid_n - 1 ? best + 1 : grid_n - 1];
    MinResult r = golden_section_min(f, a, b, xtol);
    r.evals += evals;
    if (fbest < r.value) {
        r.x = xs[best];
        r.value = fbest;
    }
    return r;
}

}  // namespace clbound
