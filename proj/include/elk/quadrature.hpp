#pragma once

#include <cmath>
#include <functional>
#include <queue>
#include <vector>

#include "elk/errors.hpp"

namespace elk {

struct QuadratureResult {
    double value = 0.0;
    double error_bound = 0.0;
    int intervals = 0;
};

namespace detail {

// Gauss 7 / Kronrod 15 pair on [-1,1]; nodes[0..3] Gauss points (0 first),
// nodes[4..7] Kronrod-only points.
struct Gk15 {
    double node, gauss_w, kronrod_w;
};

inline constexpr Gk15 gk15_table[8] = {
    {0.000000000000000000, 0.417959183673469388, 0.209482141084727828},
    {0.405845151377397167, 0.381830050505118945, 0.190350578064785410},
    {0.741531185599394440, 0.279705391489276668, 0.140653259715525919},
    {0.949107912342758525, 0.129484966168869693, 0.063092092629978553},
    {0.207784955007898468, 0.0, 0.204432940075298892},
    {0.586087235467691130, 0.0, 0.169004726639267903},
    {0.864864423359769073, 0.0, 0.104790010322250184},
    {0.991455371120812639, 0.0, 0.022935322010529225},
};

template <class F>
inline void gk15(const F& f, double a, double b, double& kronrod, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f0 = f(mid);
    double g = gk15_table[0].gauss_w * f0;
    double k = gk15_table[0].kronrod_w * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * gk15_table[i].node;
        const double fi = f(mid + dx) + f(mid - dx);
        g += gk15_table[i].gauss_w * fi;
        k += gk15_table[i].kronrod_w * fi;
    }
    g *= half;
    k *= half;
    kronrod = k;
    err = std::abs(k - g);
}

}  // namespace detail

// Adaptive Gauss-Kronrod on a finite interval (a may exceed b; the result is
// signed accordingly). Splits the worst interval until the summed error bound
// meets max(abs_tol, rel_tol*|value|); throws numeric_error with the achieved
// estimate if the interval budget is exhausted first.
template <class F>
inline QuadratureResult integrate(const F& f, double a, double b, double abs_tol = 1e-10,
                                  double rel_tol = 1e-8, int max_intervals = 4000) {
    double sgn = 1.0;
    if (a == b) return {0.0, 0.0, 0};
    if (a > b) {
        std::swap(a, b);
        sgn = -1.0;
    }
    struct Piece {
        double a, b, value, err;
        bool operator<(const Piece& o) const { return err < o.err; }
    };
    std::priority_queue<Piece> queue;
    double value, err;
    detail::gk15(f, a, b, value, err);
    queue.push({a, b, value, err});
    double total = value, total_err = err;
    int n = 1;
    while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (n >= max_intervals) {
            throw numeric_error("adaptive quadrature did not converge", sgn * total, total_err);
        }
        const Piece worst = queue.top();
        queue.pop();
        total -= worst.value;
        total_err -= worst.err;
        const double mid = 0.5 * (worst.a + worst.b);
        double v1, e1, v2, e2;
        detail::gk15(f, worst.a, mid, v1, e1);
        detail::gk15(f, mid, worst.b, v2, e2);
        queue.push({worst.a, mid, v1, e1});
        queue.push({mid, worst.b, v2, e2});
        total += v1 + v2;
        total_err += e1 + e2;
        ++n;
    }
    return {sgn * total, total_err, n};
}

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<std::size_t>(i)] = -x;
        nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[static_cast<std::size_t>(i)] = w;
        weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
}

// Fixed 64-node Gauss-Legendre integral over [lo, hi].
template <class F>
inline double gauss_legendre_64(const F& f, double lo, double hi) {
    static const auto table = [] {
        std::pair<std::vector<double>, std::vector<double>> t;
        gauss_legendre(64, t.first, t.second);
        return t;
    }();
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < 64; ++i) {
        sum += table.second[i] * f(mid + half * table.first[i]);
    }
    return sum * half;
}

}  // namespace elk
