#pragma once

// Reference computations for the tests. They share no code with the library
// beyond plain norms: distances come from grids over the forbidden set, Hill
// values from closed-form sums.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace brute {

enum class N { L1, L2, Linf };

inline double norm(const std::vector<double>& v, N n) {
    double s = 0.0;
    for (double c : v) {
        if (n == N::L1) s += std::abs(c);
        if (n == N::L2) s += c * c;
        if (n == N::Linf) s = std::max(s, std::abs(c));
    }
    return n == N::L2 ? std::sqrt(s) : s;
}

inline double dist(const std::vector<double>& x, const std::vector<double>& f, N n) {
    std::vector<double> d(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) d[j] = x[j] - f[j];
    return norm(d, n);
}

// ||x - f|| without temporaries; f given coordinate-wise by `fj(j)`.
template <class Fj>
double dist_to(const std::vector<double>& x, Fj fj, N n) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double c = std::abs(x[j] - fj(j));
        if (n == N::L1) s += c;
        if (n == N::L2) s += c * c;
        if (n == N::Linf) s = std::max(s, c);
    }
    return n == N::L2 ? std::sqrt(s) : s;
}

// min over t on a uniform grid of [0, tmax] of ||x - t a||.
inline double ray_grid(const std::vector<double>& x, const std::vector<double>& a, N n, double tmax, int steps) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= steps; ++i) {
        const double t = tmax * i / steps;
        best = std::min(best, dist_to(x, [&](std::size_t j) { return t * a[j]; }, n));
    }
    return best;
}

// min over a uniform grid of the kept coordinates in [0, hi]^|kept|; the other
// coordinates of f are 0.
inline double subspace_grid(const std::vector<double>& x, const std::vector<std::size_t>& kept, N n, double hi,
                            int steps) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> idx(kept.size(), 0);
    std::vector<double> f(x.size(), 0.0);
    for (;;) {
        for (std::size_t q = 0; q < kept.size(); ++q) f[kept[q]] = hi * idx[q] / steps;
        best = std::min(best, dist_to(x, [&](std::size_t j) { return f[j]; }, n));
        std::size_t q = 0;
        while (q < kept.size() && ++idx[q] > steps) idx[q++] = 0;
        if (q == kept.size()) break;
    }
    return best;
}

// Closed-form Hill estimate on the exact quantiles d_i = (n/i)^(1/beta):
// (1/k) sum_{i<=k} ln(d_i / d_{k+1}) = (1/beta) [ln(k+1) - ln(k!)/k].
inline double hill_on_exact_quantiles(std::size_t k, double beta) {
    const double kk = static_cast<double>(k);
    const double mean_log = (std::log(kk + 1.0) - std::lgamma(kk + 1.0) / kk) / beta;
    return 1.0 / mean_log;
}

// Composite Simpson rule with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace brute
