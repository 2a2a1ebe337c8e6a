#pragma once

// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) for scalar initial
// value problems. The driver lands exactly on a caller-supplied sample grid
// (so downstream finite differences see solver-accurate values, not
// interpolants) and stops at a terminal downward zero crossing.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dioph {

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    std::size_t max_steps = 5'000'000;
};

struct OdeSampledRun {
    std::vector<double> x;  // grid nodes reached, starting with grid.front()
    std::vector<double> y;  // solution at those nodes
    bool event = false;     // y crossed zero on the way down; run stops there
    double x_event = 0.0;
    bool step_limit = false;
};

template <typename Rhs>
OdeSampledRun integrate_on_grid(Rhs&& rhs, const std::vector<double>& grid,
                                double y0, const OdeOptions& opts = {}) {
    if (grid.size() < 2)
        throw std::invalid_argument("Sample grid needs at least two nodes.");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("Sample grid must be increasing.");

    OdeSampledRun run;
    run.x.push_back(grid.front());
    run.y.push_back(y0);

    double x = grid.front();
    double y = y0;
    double k1 = rhs(x, y);  // FSAL: reused across accepted steps
    double h_want = (grid[1] - grid[0]) / 50.0;
    std::size_t steps = 0;

    for (std::size_t node = 1; node < grid.size(); ++node) {
        const double x_stop = grid[node];
        while (x < x_stop) {
            if (++steps > opts.max_steps) {
                run.step_limit = true;
                return run;
            }
            const bool clipped = x + h_want >= x_stop;
            const double h = clipped ? x_stop - x : h_want;

            const double k2 = rhs(x + h / 5, y + h * (k1 / 5));
            const double k3 =
                rhs(x + 3 * h / 10, y + h * (3 * k1 / 40 + 9 * k2 / 40));
            const double k4 = rhs(
                x + 4 * h / 5,
                y + h * (44 * k1 / 45 - 56 * k2 / 15 + 32 * k3 / 9));
            const double k5 =
                rhs(x + 8 * h / 9,
                    y + h * (19372 * k1 / 6561 - 25360 * k2 / 2187 +
                             64448 * k3 / 6561 - 212 * k4 / 729));
            const double k6 =
                rhs(x + h, y + h * (9017 * k1 / 3168 - 355 * k2 / 33 +
                                    46732 * k3 / 5247 + 49 * k4 / 176 -
                                    5103 * k5 / 18656));
            const double y5 =
                y + h * (35 * k1 / 384 + 500 * k3 / 1113 + 125 * k4 / 192 -
                         2187 * k5 / 6784 + 11 * k6 / 84);
            const double k7 = rhs(x + h, y5);
            const double y4 =
                y + h * (5179 * k1 / 57600 + 7571 * k3 / 16695 +
                         393 * k4 / 640 - 92097 * k5 / 339200 +
                         187 * k6 / 2100 + k7 / 40);

            const double err = std::abs(y5 - y4);
            const double tol =
                opts.abs_tol +
                opts.rel_tol * std::max(std::abs(y), std::abs(y5));
            const bool accept = err <= tol;
            if (accept) {
                if (y5 <= 0.0 && y > 0.0) {
                    // Downward crossing inside this step; locate linearly.
                    run.event = true;
                    run.x_event =
                        y5 < 0.0 ? x + h * (y / (y - y5)) : x + h;
                    return run;
                }
                x += h;
                y = y5;
                k1 = k7;
            }
            const double factor = std::min(
                5.0, std::max(0.2, err > 0 ? 0.9 * std::pow(tol / err, 0.2)
                                           : 5.0));
            if (clipped && accept)
                // A node-clipped step says nothing about the natural step
                // size; keep the baseline instead of collapsing it.
                h_want = std::max(h_want, h * factor);
            else
                h_want = h * factor;
        }
        run.x.push_back(x_stop);
        run.y.push_back(y);
    }
    return run;
}

// Port of the usual array-gradient convention: second-order centered
// differences on a possibly nonuniform grid in the interior, one-sided at
// the ends.
inline std::vector<double> gradient(const std::vector<double>& y,
                                    const std::vector<double>& x) {
    const std::size_t n = y.size();
    if (x.size() != n || n < 2)
        throw std::invalid_argument("gradient needs two same-length arrays.");
    std::vector<double> g(n);
    g[0] = (y[1] - y[0]) / (x[1] - x[0]);
    g[n - 1] = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hs = x[i] - x[i - 1];
        const double hd = x[i + 1] - x[i];
        g[i] = (hs * hs * y[i + 1] + (hd * hd - hs * hs) * y[i] -
                hd * hd * y[i - 1]) /
               (hs * hd * (hs + hd));
    }
    return g;
}

inline double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of empty range.");
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace dioph
