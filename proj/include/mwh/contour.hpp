#pragma once

// Cauchy-type integrals on straight contours, Sokhotski-Plemelj boundary
// splitting with principal-value excision, and fixed-Talbot inversion of
// Laplace transforms.

#include <functional>
#include <vector>

#include "mwh/numerics.hpp"

namespace mwh {

// A straight contour t -> z0 + t*dir, t in [-R, R], traversed with
// increasing t.  dir is a unit complex direction (usually 1 for the
// real axis).
struct LineContour {
    cd z0{0.0, 0.0};
    cd dir{1.0, 0.0};
    double R = 40.0;
    cd point(double t) const { return z0 + t * dir; }
};

// Density on a LineContour for Cauchy integrals
//   C(z) = 1/(2 pi i) \int rho(sigma) / (sigma - z) dsigma.
// If the density tends to a nonzero constant c at both ends the truncated
// integral loses a logarithmically divergent piece that cancels between the
// two ends; we integrate rho - c and the constant contributes exactly
// c * 1/(2 pi i) * log((R-t)/(-R-t)) -> handled in closed form.
struct CauchyDensity {
    std::function<cd(double)> rho;  // density as a function of the line parameter t
    cd c_inf{0.0, 0.0};             // common limit of rho at t -> +-infinity
};

// Evaluate the Cauchy integral at z strictly off the contour line.
// Panel count is doubled until two successive evaluations agree to tol.
inline cd cauchy_eval(const CauchyDensity& d, const LineContour& L, cd z,
                      double tol = 1e-12, int order = 16, int max_doublings = 8) {
    auto integrand = [&](double t) {
        cd sigma = L.point(t);
        return (d.rho(t) - d.c_inf) / (sigma - z) * L.dir;
    };
    const cd itwopi = cd(0.0, 1.0) * (2.0 * pi);
    cd tail{0.0, 0.0};
    if (d.c_inf != cd(0.0, 0.0)) {
        // \int_{-R}^{R} c dt / (z0 + t dir - z) = c * log((sig_R - z)/(sig_-R - z))
        tail = d.c_inf * std::log((L.point(L.R) - z) / (L.point(-L.R) - z));
    }
    int panels = 8;
    cd prev{0.0, 0.0};
    for (int it = 0; it <= max_doublings; ++it) {
        cd val = integrate_panels(integrand, linspace_breaks(-L.R, L.R, panels), order);
        val = (val + tail) / itwopi;
        if (it > 0 && std::abs(val - prev) <= tol * (std::abs(val) + 1.0)) return val;
        prev = val;
        panels *= 2;
    }
    return prev;
}

// Plemelj splitting at a point s = L.point(ts) ON the contour:
// returns {C^+(s), C^-(s)} where C^+ is the limit from the left of the
// direction of travel (i.e. from above for the real axis) and
//   C^{+-}(s) = +-1/2 rho(s) + PV C(s).
// The PV integral is computed by symmetric excision around ts: on
// [ts-eps, ts+eps] the odd part of the density cancels the singularity
// analytically, leaving (rho(ts+u) - 2 rho(ts) + rho(ts-u)) / u integrable.
struct PlemeljPair { cd plus, minus, pv; };

inline PlemeljPair plemelj_split(const CauchyDensity& d, const LineContour& L, double ts,
                                 double tol = 1e-12, int order = 16, int max_doublings = 8) {
    const cd rho_s = d.rho(ts);
    const cd itwopi = cd(0.0, 1.0) * (2.0 * pi);
    double eps = std::min(1.0, 0.25 * (L.R - std::abs(ts)));
    if (eps <= 0.0) throw domain_error("plemelj_split: point too close to contour end");

    // near part: \int_0^eps [rho(ts+u) - rho(ts-u)] / u du  (symmetric excision)
    auto near = [&](double u) {
        if (u == 0.0) return cd(0.0, 0.0);
        return (d.rho(ts + u) - d.rho(ts - u)) / u;
    };
    // far parts with singularity-free integrand
    auto far = [&](double t) { return (d.rho(t) - d.c_inf) / (t - ts); };

    cd tail{0.0, 0.0};
    if (d.c_inf != cd(0.0, 0.0))
        tail = d.c_inf * std::log((L.R - ts) / (L.R + ts));

    int panels = 8;
    cd prev{0.0, 0.0};
    for (int it = 0; it <= max_doublings; ++it) {
        cd v = integrate_panels(near, linspace_breaks(0.0, eps, panels), order);
        v += integrate_panels(far, linspace_breaks(-L.R, ts - eps, panels), order);
        v += integrate_panels(far, linspace_breaks(ts + eps, L.R, panels), order);
        // subtract the c_inf part skipped inside the excision: it is even, cancels
        v += d.c_inf * 0.0;
        cd pv = (v + tail) / itwopi;
        if (it > 0 && std::abs(pv - prev) <= tol * (std::abs(pv) + 1.0)) {
            return {pv + 0.5 * rho_s, pv - 0.5 * rho_s, pv};
        }
        prev = pv;
        panels *= 2;
    }
    return {prev + 0.5 * rho_s, prev - 0.5 * rho_s, prev};
}

// Fixed-Talbot inversion of a Laplace transform F(p) at time t > 0:
//   f(t) ~ (r / M) * [ F(r)/2 e^{r t} + sum_{j=1}^{M-1} Re-free complex sum ],
// with r = 2M/(5t) and s(theta) = r theta (cot theta + i).
inline cd talbot_invert(const std::function<cd(cd)>& F, double t, int M = 32) {
    if (t <= 0.0) throw domain_error("talbot_invert: t must be positive");
    const double r = 2.0 * M / (5.0 * t);
    double sum = 0.5 * (F(cd(r, 0.0)) * std::exp(r * t)).real();
    for (int j = 1; j < M; ++j) {
        double th = j * pi / M;
        double cot = std::cos(th) / std::sin(th);
        cd s = r * th * cd(cot, 1.0);
        double sigma = th + (th * cot - 1.0) * cot;
        sum += (std::exp(s * t) * F(s) * cd(1.0, sigma)).real();
    }
    return cd(sum * 2.0 / (5.0 * t), 0.0);
}

// Convergence-checked variant.  Roundoff grows like e^{2M/5} in double
// precision, so M is stepped up gently rather than doubled; if no pair of
// successive answers reaches tol, the best-agreeing pair wins.
inline cd talbot_invert_checked(const std::function<cd(cd)>& F, double t,
                                double tol = 1e-10, int M0 = 28, int steps = 3) {
    cd prev = talbot_invert(F, t, M0);
    cd best = prev;
    double best_diff = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= steps; ++i) {
        cd cur = talbot_invert(F, t, M0 + 4 * i);
        double diff = std::abs(cur - prev) / (std::abs(cur) + 1.0);
        if (diff <= tol) return cur;
        if (diff < best_diff) { best_diff = diff; best = cur; }
        prev = cur;
    }
    return best;
}

}  // namespace mwh
