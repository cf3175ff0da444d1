#ifndef MWH_SELFTEST_HPP
#define MWH_SELFTEST_HPP

// End-to-end verification suite: one check per headline property of the
// library, runnable from the acceptance binary or the CLI.  Each check
// reports the worst residual it observed together with the pinned tolerance.

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mwh/conv_system.hpp"
#include "mwh/heat_rod.hpp"
#include "mwh/oracle_fd.hpp"
#include "mwh/strip.hpp"
#include "mwh/wedge.hpp"

namespace mwh {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace selftest_detail {

inline std::string fmt(double worst, double tol) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << "worst residual " << worst << " (tol " << tol << ")";
    return os.str();
}

struct Tally {
    double worst = 0.0;
    bool ok = true;
    void add(double r, double tol) {
        worst = std::max(worst, r);
        if (!(r <= tol)) ok = false;
    }
};

template <typename F>
cd circle_residue(const F& f, cd c, double r, int n = 32) {
    cd acc = 0.0;
    for (int q = 0; q < n; ++q) {
        double th = 2.0 * pi * q / n;
        cd z = c + r * std::exp(cd(0, th));
        acc += f(z) * (z - c);
    }
    return acc / static_cast<double>(n);
}

inline RodSpec rod_benchmark() {
    RodSpec s;
    s.b = {0.0};
    s.a = {1.0, 2.0};
    s.k = {1.0, 3.0};
    s.gamma_minus = 0.0;
    s.gamma_plus = 1.0;
    return s;
}

// 1. On a homogeneous rod the solver must collapse to the classical
//    Gaussian-kernel convolution.
inline CheckResult check_poisson_reduction() {
    const double tol = 1e-8;
    RodSpec s;
    s.b = {0.0};
    s.a = {1.0, 1.0};
    s.k = {1.0, 1.0};
    s.f = Profile{[](double x) { return std::exp(-2.0 * x * x); }, -8.0, 8.0};
    TwoPartRod rod(s);
    Tally t;
    for (double tm : {0.2, 0.4, 0.7, 1.1}) {
        for (double x : {-1.3, -0.2, 0.0, 0.7, 2.1}) {
            double want = integrate_adaptive(
                              [&](double xi) {
                                  return cd(std::exp(-(x - xi) * (x - xi) / (4.0 * tm)) *
                                                std::exp(-2.0 * xi * xi),
                                            0.0);
                              },
                              -8.0, 8.0, 1e-13)
                              .real() /
                          std::sqrt(4.0 * pi * tm);
            t.add(std::abs(rod.u(x, tm) - want), tol);
        }
    }
    return {"poisson-reduction", t.ok, fmt(t.worst, tol)};
}

// 2. Level-driven benchmark: at large time the profile must match the
//    closed-form complementary-error-function solution on |x| <= 2.
inline CheckResult check_steady_limit() {
    const double tol = 1e-3;
    RodSpec s = rod_benchmark();  // levels 0 and 1, f absent
    TwoPartRod rod(s);
    double lam0 = s.k[0] / s.a[0] + s.k[1] / s.a[1];
    double g = s.gamma_plus - s.gamma_minus;
    double tm = 1e4;
    auto closed = [&](double x) {
        if (x < 0.0)
            return s.gamma_minus +
                   s.k[1] * g / (lam0 * s.a[1]) * std::erfc(-x / (2.0 * s.a[0] * std::sqrt(tm)));
        return s.gamma_plus -
               s.k[0] * g / (lam0 * s.a[0]) * std::erfc(x / (2.0 * s.a[1] * std::sqrt(tm)));
    };
    Tally t;
    for (int i = 0; i <= 20; ++i) {
        double x = -2.0 + 0.2 * i;
        if (x == 0.0) x = 0.01;
        t.add(std::abs(rod.u_total(x, tm) - closed(x)), tol);
    }
    // the closed form itself must limit to the weighted steady value
    t.add(std::abs(steady_limit(s) - 0.6), 1e-12);
    return {"steady-limit", t.ok, fmt(t.worst, tol)};
}

// 3. Interface fidelity: value jump and flux continuity at every breakpoint
//    for both the two-part and the three-segment solver, plus agreement
//    with the Crank-Nicolson oracle.
inline CheckResult check_interface_fidelity() {
    const double tol_if = 1e-6, tol_fd = 1e-3;
    Tally t;
    double eps = 1e-8, tm = 0.5;

    RodSpec s2 = rod_benchmark();
    s2.f = Profile{[](double x) { return (x > -1.0 && x < 1.0) ? 1.0 : 0.0; }, -1.0, 1.0};
    TwoPartRod rod(s2);
    t.add(std::abs((rod.u(-eps, tm) - rod.u(eps, tm)) - 1.0), tol_if);
    t.add(std::abs(s2.k[0] * rod.ux(-eps, tm) - s2.k[1] * rod.ux(eps, tm)), tol_if);

    RodSpec s3;
    s3.b = {0.0, 1.0};
    s3.a = {1.0, 2.0, 1.0};
    s3.k = {1.0, 3.0, 1.0};
    s3.gamma_minus = 0.0;
    s3.gamma_plus = 1.0;
    s3.f = s2.f;
    GeneralRod gen(s3);
    t.add(std::abs((gen.u(-eps, tm) - gen.u(eps, tm)) - 1.0), tol_if);
    t.add(std::abs(1.0 * gen.ux(-eps, tm) - 3.0 * gen.ux(eps, tm)), tol_if);
    t.add(std::abs(gen.u(1.0 - eps, tm) - gen.u(1.0 + eps, tm)), tol_if);
    t.add(std::abs(3.0 * gen.ux(1.0 - eps, tm) - 1.0 * gen.ux(1.0 + eps, tm)), tol_if);

    double err2 = 0.0, err3 = 0.0;
    GridSolution fd2 = heat_cn_refined(s2, 12.0, 2400, 500, tm, &err2);
    GridSolution fd3 = heat_cn_refined(s3, 12.0, 2400, 500, tm, &err3);
    for (double x : {-2.0, -0.25, 0.25, 1.0, 2.5}) {
        t.add(std::abs(rod.u_total(x, tm) - fd2.interp(x)), tol_fd);
        t.add(std::abs(gen.u_total(x, tm) - fd3.interp(x)), tol_fd);
    }
    return {"interface-fidelity", t.ok, fmt(t.worst, tol_fd)};
}

// 4. Convolution system: the reconstructed pair satisfies the original
//    integral equations, the removed poles are really removable, and the
//    transform-domain boundary relation holds on the real axis.
inline CheckResult check_conv_system() {
    AWSpec s;
    s.lambda = cd(0.1, 0.0);
    s.a = 1.0;
    s.f1 = {{1.0, 1.0}};  // f1(x) = e^{-x}
    s.f2 = {};
    AWSolver sol(s);
    const cd i(0.0, 1.0);
    Tally t;

    // original system at 20 points
    double X = 45.0;
    for (int q = 0; q < 20; ++q) {
        double x = 0.25 + 0.5 * q;
        std::vector<double> brk{0.0};
        for (double kk : {x - s.a, x, x + s.a})
            if (kk > 0.0 && kk < X) brk.push_back(kk);
        brk.push_back(X);
        std::sort(brk.begin(), brk.end());
        cd c1 = 0.0, c2 = 0.0;
        for (size_t j = 0; j + 1 < brk.size(); ++j) {
            c1 += integrate_adaptive(
                [&](double u) {
                    return std::exp(-std::abs(x - u)) * sol.u1(u) +
                           std::exp(-std::abs(x - u - s.a)) * sol.u2(u);
                },
                brk[j], brk[j + 1], 1e-10);
            c2 += integrate_adaptive(
                [&](double u) {
                    return std::exp(-std::abs(x - u + s.a)) * sol.u1(u) +
                           std::exp(-std::abs(x - u)) * sol.u2(u);
                },
                brk[j], brk[j + 1], 1e-10);
        }
        t.add(std::abs(sol.u1(x) - s.lambda * c1 - std::exp(-x)), 1e-6);
        t.add(std::abs(sol.u2(x) - s.lambda * c2), 1e-6);
    }

    // removable poles
    cd l0 = sol.constants().lambda0;
    t.add(std::abs(circle_residue([&](cd al) { return sol.U1p(al); }, i * l0, 0.05, 64)),
          1e-10);
    t.add(std::abs(circle_residue([&](cd al) { return sol.U2m(al); }, -i * l0, 0.05, 64)),
          1e-10);

    // transform-domain boundary relation at 50 real points
    for (int q = 0; q < 50; ++q) {
        cd al(-12.0 + 0.49 * q, 0.0);
        cd det = al * al + 1.0;
        cd g11 = (al * al + 1.0 - 2.0 * s.lambda) / det;
        cd g12 = -2.0 * s.lambda * std::exp(i * al * s.a) / det;
        cd g21 = -2.0 * s.lambda * std::exp(-i * al * s.a) / det;
        t.add(std::abs(g11 * sol.U1p(al) + g12 * sol.U2p(al) - sol.U1m(al) - sol.F1p(al)),
              1e-8);
        t.add(std::abs(g21 * sol.U1p(al) + g11 * sol.U2p(al) - sol.U2m(al) - sol.F2p(al)),
              1e-8);
    }
    return {"conv-system", t.ok, fmt(t.worst, 1e-6)};
}

inline Mat2 st_mat_mul(const Mat2& a, const Mat2& b) {
    Mat2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
}

// 5. Wedge factorization: closed-form values at the origin, determinant,
//    and the multiplicative identity on the inversion contour.
inline CheckResult check_wedge_constants() {
    Tally t;
    for (double lam : {1.0, 1.5, 2.0, 4.0}) {
        for (double alpha : {pi / 3, pi / 2, 2.0}) {
            WedgeFactor fac(alpha, lam);
            double w = std::pow(lam, -pi / (2.0 * alpha));
            t.add(std::abs(fac.chi21p(cd(0.0)) - 2.0 * std::atan(w)), 1e-10);
            t.add(std::abs(fac.chi1jp(cd(0.0), 1) - (-pi + fac.chi21p(cd(0.0)))), 1e-10);
            t.add(std::abs(fac.chi1jp(cd(0.0), 2) - (-pi + fac.chi22p(cd(0.0)))), 1e-10);
            Mat2 X0 = fac.Xplus0();
            cd det = X0[0][0] * X0[1][1] - X0[0][1] * X0[1][0];
            t.add(std::abs(det - cd(-2.0 * pi / w)) / (1.0 + std::abs(det)), 1e-10);
        }
    }
    for (double lam : {1.0, 2.0, 3.5}) {
        double alpha = 2.0;
        WedgeFactor fac(alpha, lam);
        double sigma = 0.25 * pi / alpha;
        for (int q = 0; q < 30; ++q) {
            cd sp(sigma, -21.0 + 42.0 * q / 29.0 + 0.013);
            Mat2 lhs = fac.Xplus(sp);
            Mat2 rhs = st_mat_mul(fac.G(sp), fac.Xminus(sp));
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) t.add(std::abs(lhs[i][j] - rhs[i][j]), 1e-8);
        }
    }
    return {"wedge-constants", t.ok, fmt(t.worst, 1e-8)};
}

// 6. Wedge physics: temperature at infinity, the small-r limit, the
//    far-field decay exponent, and agreement with the polar-grid oracle.
inline CheckResult check_wedge_physics() {
    Tally t;
    WedgeSpec sp;
    sp.alpha = pi / 2;
    sp.a1 = 1.0;
    sp.a2 = 2.0;
    sp.T1 = 0.0;
    sp.T2 = 1.0;
    for (double lam : {1.0, 1.7, 2.0, 5.0}) {
        WedgeSpec s = sp;
        s.a2 = lam * s.a1;
        WedgeSolver sol(s);
        double w = std::pow(lam, -pi / (2.0 * s.alpha));
        t.add(std::abs(sol.T_inf() - (1.0 - 2.0 / pi * std::atan(w)) * s.T2), 1e-12);
    }
    {
        WedgeSpec sym = sp;
        sym.a2 = sym.a1;
        t.add(std::abs(WedgeSolver(sym).T_inf() - 0.5 * sym.T2), 1e-12);
    }
    WedgeSolver sol(sp);
    for (double theta : {sp.alpha / 3.0, 0.7 * sp.alpha}) {
        double expect =
            (1.0 - theta / sp.alpha) * sp.T1 + theta / sp.alpha * sp.T2 - sol.T_inf();
        t.add(std::abs(sol.u(1e-3 * sp.a1, theta) - expect), 1e-3);
    }
    {
        std::vector<double> lr, lu;
        for (double r : {8.0, 16.0, 32.0}) {
            lr.push_back(std::log(r));
            lu.push_back(std::log(std::abs(sol.u(r, sp.alpha / 4.0))));
        }
        double pa = pi / sp.alpha;
        t.add(std::abs(fit_slope(lr, lu) + pa) / pa, 0.05);
    }
    WedgeGridSolution fd = laplace_wedge_fd(sp, -6.0, 8.0, 560, 64);
    t.add(std::abs(fd.T_inf - sol.T_inf()), 1e-2);
    double r = 1.5 * sp.a1, th = sp.alpha / 4.0;
    t.add(std::abs(fd.at(r, th) - sol.u_total(r, th)), 1e-2);
    return {"wedge-physics", t.ok, fmt(t.worst, 1e-2)};
}

// 7. Strip with a slit: truncation stability, coefficient decay, removable
//    lattice poles, the two boundary relations, the oracle, and the flux.
inline CheckResult check_strip() {
    Tally t;
    StripSpec sp;
    sp.b_plus = 1.0;
    sp.b_minus = 1.0;
    sp.k = cd(1.0, 2.0);
    sp.f = [](double) { return cd(1.0, 0.0); };
    sp.N = 32;
    StripSolver coarse(sp);
    StripSpec sp2 = sp;
    sp2.N = 64;
    StripSolver fine(sp2);

    // doubling the truncation moves no retained coefficient above 1e-8
    size_t M = coarse.A_plus().size();
    for (size_t n = 0; n < M; ++n) {
        t.add(std::abs(fine.A_plus()[n] - coarse.A_plus()[n]), 1e-8);
        t.add(std::abs(fine.A_minus()[n] - coarse.A_minus()[n]), 1e-8);
    }

    // exponential decay of the coefficients: positive fitted rate
    {
        std::vector<double> im, la;
        for (size_t n = 0; n < M; ++n) {
            double mag = std::abs(coarse.A_plus()[n]);
            if (mag > 1e-280) {
                im.push_back(coarse.zeros()[n].z.imag());
                la.push_back(std::log(mag));
            }
        }
        double rate = -fit_slope(im, la);
        t.add(rate > 0.0 ? 0.0 : 1.0, 0.5);
    }

    // removable singularities at every retained lattice point
    for (size_t n = 0; n < M; ++n) {
        cd zn = coarse.zeros()[n].z;
        double scale = std::abs(coarse.Phi1_plus(zn + cd(0.0, 1.0))) + 1.0;
        cd r1 = circle_residue([&](cd a) { return coarse.Phi1_plus(a); }, zn, 0.15);
        cd r2 = circle_residue([&](cd a) { return coarse.Phi2_plus(a); }, zn, 0.15);
        t.add(std::abs(r1) / scale, 1e-8);
        t.add(std::abs(r2) / scale, 1e-8);
    }

    std::mt19937 rng(9001);
    std::uniform_real_distribution<double> U(-12.0, 12.0);
    for (int q = 0; q < 10; ++q) {
        cd a(U(rng), 0.0);
        cd lhs = coarse.Phi1_plus(a);
        cd rhs = std::exp(cd(0, 1) * a) * coarse.Phi1_minus(a);
        t.add(std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1e-3), 1e-8);
    }
    for (int q = 0; q < 50; ++q) {
        cd a(U(rng), 0.0);
        cd g = strip_g(a, coarse.spec());
        cd resid = coarse.Phi2_plus(a) + g * coarse.Phi1_minus(a) +
                   std::exp(-cd(0, 1) * a) * coarse.Phi2_minus(a) + coarse.Fhat_minus(a);
        t.add(std::abs(resid), 1e-6);
    }

    StripGridSolution fd = helmholtz_strip_fd(sp, 7.0, 40);
    struct Pt {
        double x, y;
    };
    for (Pt p : {Pt{0.5, 0.5}, Pt{0.5, -0.5}, Pt{-0.5, 0.25}, Pt{1.75, -0.25}}) {
        cd ua = coarse.u(p.x, p.y);
        t.add(std::abs(ua - fd.at(p.x, p.y)) / std::max(1.0, std::abs(ua)), 1e-2);
    }
    for (double x : {0.3, 0.5, 0.7})
        t.add(std::abs(coarse.flux_slit(x) - coarse.spec().f(x)), 1e-3);
    return {"strip", t.ok, fmt(t.worst, 1e-2)};
}

// 8. Special functions: Gamma recurrence/reflection, a Gauss contiguous
//    relation, the erfc reflection, and the square-root branch conditions.
inline CheckResult check_special_functions() {
    Tally t;
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> re(-4.0, 4.0), im(-4.0, 4.0);
    for (int q = 0; q < 40; ++q) {
        cd z(re(rng), im(rng) + 0.07);
        cd lhs = cgamma(z + 1.0), rhs = z * cgamma(z);
        t.add(std::abs(lhs - rhs) / (std::abs(lhs) + 1.0), 1e-10);
        if (std::abs(std::sin(pi * z)) > 1e-3) {
            cd ref = cgamma(z) * cgamma(1.0 - z) - pi / std::sin(pi * z);
            t.add(std::abs(ref) / (std::abs(pi / std::sin(pi * z)) + 1.0), 1e-10);
        }
    }
    std::uniform_real_distribution<double> zr(-0.6, 0.6);
    for (int q = 0; q < 20; ++q) {
        cd a(re(rng) * 0.5 + 1.0, 0.3 * im(rng));
        cd b(re(rng) * 0.5 + 1.2, 0.2 * im(rng));
        cd c(re(rng) * 0.3 + 3.0, 0.1 * im(rng));
        cd z(zr(rng), zr(rng) * 0.5);
        cd r = (c - a) * gauss2f1(a - 1.0, b, c, z) +
               (2.0 * a - c + (b - a) * z) * gauss2f1(a, b, c, z) +
               a * (z - 1.0) * gauss2f1(a + 1.0, b, c, z);
        t.add(std::abs(r) / (std::abs(gauss2f1(a, b, c, z)) + 1.0), 1e-10);
    }
    for (double x : {-2.5, -0.7, 0.0, 0.4, 1.9})
        t.add(std::abs(erfc(-x) - (2.0 - erfc(x))), 1e-14);
    cd k(1.1, 1.7);
    t.add(std::abs(gamma_branch(cd(0.0), k) - cd(0.0, -1.0) * k), 1e-13);
    std::uniform_real_distribution<double> ar(-30.0, 30.0);
    for (int q = 0; q < 50; ++q) {
        cd al(ar(rng), 0.0);
        cd g = gamma_branch(al, k);
        t.add(g.real() >= 0.0 ? 0.0 : 1.0, 0.5);
        t.add(std::abs(g * g - (al * al - k * k)) / (std::abs(al * al) + 1.0), 1e-12);
    }
    return {"special-functions", t.ok, fmt(t.worst, 1e-10)};
}

}  // namespace selftest_detail

inline std::vector<CheckResult> run_selftest() {
    using namespace selftest_detail;
    std::vector<CheckResult (*)()> checks = {
        &check_poisson_reduction, &check_steady_limit,    &check_interface_fidelity,
        &check_conv_system,       &check_wedge_constants, &check_wedge_physics,
        &check_strip,             &check_special_functions};
    std::vector<CheckResult> out;
    for (auto* fn : checks) {
        try {
            out.push_back(fn());
        } catch (const std::exception& e) {
            out.push_back({"(check threw)", false, std::string("exception: ") + e.what()});
        }
    }
    return out;
}

}  // namespace mwh

#endif  // MWH_SELFTEST_HPP
