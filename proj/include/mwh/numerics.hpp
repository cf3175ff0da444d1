#pragma once

// Shared numeric kernels: Gauss-Legendre rules, panel and adaptive
// quadrature for complex-valued integrands, small helpers.

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mwh {

using cd = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;

struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_finite(cd z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// ---------------------------------------------------------------------------
// Gauss-Legendre rules on [-1,1], cached per order.
// ---------------------------------------------------------------------------

struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

inline GaussRule make_gauss_rule(int n) {
    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton from the Chebyshev estimate.
        double t = std::cos(pi * (i + 0.75) / (n + 0.5));
        double p0 = 0.0, p1 = 0.0;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
            }
            double dp = n * (t * p0 - p1) / (t * t - 1.0);
            double dt = -p0 / dp;
            t += dt;
            if (std::abs(dt) < 1e-15) break;
        }
        p0 = 1.0;
        p1 = 0.0;
        for (int j = 0; j < n; ++j) {
            double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
        }
        double dp = n * (t * p0 - p1) / (t * t - 1.0);
        rule.x[i] = -t;
        rule.x[n - 1 - i] = t;
        rule.w[i] = rule.w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    return rule;
}

inline const GaussRule& gauss_rule(int n) {
    static std::map<int, GaussRule> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_rule(n)).first;
    return it->second;
}

template <typename F>
auto integrate_gl(const F& f, double a, double b, int order = 16) -> decltype(f(0.0)) {
    const GaussRule& r = gauss_rule(order);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    decltype(f(0.0)) acc{};
    for (std::size_t i = 0; i < r.x.size(); ++i) acc += r.w[i] * f(mid + half * r.x[i]);
    return acc * half;
}

// Composite rule over explicit panel breakpoints.
template <typename F>
auto integrate_panels(const F& f, const std::vector<double>& breaks, int order = 16)
    -> decltype(f(0.0)) {
    decltype(f(0.0)) acc{};
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        acc += integrate_gl(f, breaks[i], breaks[i + 1], order);
    return acc;
}

inline std::vector<double> linspace_breaks(double a, double b, int panels) {
    std::vector<double> v(panels + 1);
    for (int i = 0; i <= panels; ++i) v[i] = a + (b - a) * i / panels;
    return v;
}

// Adaptive GL with interval bisection; complex or real integrands.
template <typename F>
auto integrate_adaptive(const F& f, double a, double b, double tol, int depth = 0,
                        int max_depth = 40) -> decltype(f(0.0)) {
    auto coarse = integrate_gl(f, a, b, 8);
    auto fine = integrate_gl(f, a, 0.5 * (a + b), 8) + integrate_gl(f, 0.5 * (a + b), b, 8);
    double err = std::abs(fine - coarse);
    if (err < tol || depth >= max_depth) return fine;
    return integrate_adaptive(f, a, 0.5 * (a + b), 0.5 * tol, depth + 1, max_depth) +
           integrate_adaptive(f, 0.5 * (a + b), b, 0.5 * tol, depth + 1, max_depth);
}

// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw domain_error("fit_slope: need >= 2 samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace mwh
