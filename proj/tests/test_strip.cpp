// Helmholtz strip-with-slit solver: scalar factorization identities, zero
// lattice, residue system, field reconstruction, and agreement with an
// independent complex finite-difference oracle.

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "mwh/oracle_fd.hpp"
#include "mwh/strip.hpp"

using namespace mwh;
using Catch::Approx;

namespace {

StripSpec bench_spec() {  // symmetric benchmark with a unit load
    StripSpec sp;
    sp.b_plus = 1.0;
    sp.b_minus = 1.0;
    sp.k = cd(1.0, 2.0);
    sp.f = [](double) { return cd(1.0, 0.0); };
    sp.N = 32;
    return sp;
}

StripSpec asym_spec() {
    StripSpec sp;
    sp.b_plus = 1.3;
    sp.b_minus = 0.7;
    sp.k = cd(0.6, 1.1);
    sp.f = [](double x) { return cd(std::sin(pi * x), 0.25 * x); };
    sp.N = 32;
    return sp;
}

// residue of f at c by a trapezoid rule on a small circle
template <typename F>
cd circle_residue(const F& f, cd c, double r, int n = 64) {
    cd acc = 0.0;
    for (int q = 0; q < n; ++q) {
        double th = 2.0 * pi * q / n;
        cd z = c + r * std::exp(cd(0, th));
        acc += f(z) * (z - c);
    }
    return acc / (double)n;
}

const StripSolver& bench_solver() {
    static StripSolver s(bench_spec());
    return s;
}
const StripSolver& asym_solver() {
    static StripSolver s(asym_spec());
    return s;
}

}  // namespace

TEST_CASE("factorization ratio K+/K- reproduces g on the real axis") {
    StripFactor fac(asym_spec());
    const StripSpec sp = asym_spec();
    std::mt19937 rng(7001);
    std::uniform_real_distribution<double> U(-20.0, 20.0);
    for (int q = 0; q < 30; ++q) {
        double a = U(rng);
        cd g = strip_g(cd(a, 0.0), sp);
        cd ratio = fac.Kp(cd(a, 0.0)) / fac.Km(cd(a, 0.0));
        REQUIRE(std::abs(ratio - g) <= 1e-8 * std::abs(g));
    }
}

TEST_CASE("symmetric strip collapses g to half gamma tanh gamma b") {
    StripSpec sp = bench_spec();
    for (int q = 0; q < 10; ++q) {
        cd a(-4.0 + q, 0.3 * q - 1.0);
        cd g0 = gamma_branch(a, sp.k);
        REQUIRE(std::abs(strip_g(a, sp) - 0.5 * g0 * std::tanh(g0 * sp.b_plus)) <= 1e-12);
    }
}

TEST_CASE("K0 has the multiplicative parity of an odd Cauchy exponent") {
    StripFactor fac(asym_spec());
    for (int q = 0; q < 6; ++q) {
        cd a(1.0 + 2.0 * q, (q % 2 ? -1.5 : 2.5));
        REQUIRE(std::abs(fac.K0(-a) * fac.K0(a) - 1.0) <= 1e-10);
    }
    for (double a : {0.7, 3.3, 9.1}) {
        cd p1, m1, p2, m2;
        fac.K0_axis(a, p1, m1);
        fac.K0_axis(-a, p2, m2);
        REQUIRE(std::abs(p2 * m1 - 1.0) <= 1e-10);  // K0+(-a) = 1/K0-(a)
        REQUIRE(std::abs(m2 * p1 - 1.0) <= 1e-10);
    }
}

TEST_CASE("zero lattice: symmetric closed form, g vanishing, linear growth") {
    StripSpec sp;
    sp.b_plus = sp.b_minus = 1.0;
    sp.k = cd(0.0, 2.0);
    sp.f = {};
    auto zs = zero_lattice(sp, 16);
    REQUIRE(zs.size() == 17);  // coincident lattices merge
    REQUIRE(std::abs(zs[0].z - sp.k) <= 1e-14);
    std::vector<double> ns, ims;
    for (size_t m = 1; m < zs.size(); ++m) {
        cd expect = cd(0.0, std::sqrt(4.0 + pi * pi * m * m));
        REQUIRE(std::abs(zs[m].z - expect) <= 1e-10 * std::abs(expect));
        REQUIRE(std::abs(std::sinh(gamma_branch(zs[m].z, sp.k) * sp.b_plus)) <= 1e-10);
        ns.push_back((double)m);
        ims.push_back(zs[m].z.imag());
    }
    double slope = fit_slope(ns, ims);
    REQUIRE(slope == Approx(pi / sp.b_plus).epsilon(0.02));
}

TEST_CASE("closed-form g' matches a numerical derivative at every zero") {
    for (const StripSpec& sp : {bench_spec(), asym_spec()}) {
        for (const auto& z : zero_lattice(sp, 10)) {
            double h = 1e-5 * (1.0 + std::abs(z.z));
            cd num = (strip_g(z.z + h, sp) - strip_g(z.z - h, sp)) / (2.0 * h);
            REQUIRE(std::abs(num - z.gprime) <= 1e-5 * std::abs(z.gprime));
            REQUIRE(std::abs(strip_g(z.z, sp)) <= 1e-9 * std::abs(z.gprime));
        }
    }
}

TEST_CASE("symmetric residue weights reduce to the closed forms") {
    StripSpec sp = bench_spec();
    StripFactor fac(sp);
    auto zs = zero_lattice(sp, 8);
    double b = sp.b_plus;
    // delta_0 = (1/b+ + 1/b-) K0+(k)^2 and delta_n = 2 K+(z_n)^2 / (b z_n)
    cd k0 = fac.Kp(sp.k) / root_plus(sp.k, sp.k);
    cd delta0 = fac.Kp(sp.k) * fac.Kp(sp.k) / zs[0].gprime;
    REQUIRE(std::abs(delta0 - (2.0 / b) * k0 * k0) <= 1e-8 * std::abs(delta0));
    for (size_t n = 1; n < 4; ++n) {
        cd Kp = fac.Kp(zs[n].z);
        cd dn = Kp * Kp / zs[n].gprime;
        REQUIRE(std::abs(dn - 2.0 * Kp * Kp / (b * zs[n].z)) <= 1e-10 * std::abs(dn));
    }
}

TEST_CASE("zero load produces identically zero coefficients and field") {
    StripSpec sp = bench_spec();
    sp.f = {};
    StripSolver sol(sp, 60.0, 120);
    for (cd a : sol.A_plus()) REQUIRE(std::abs(a) <= 1e-13);
    for (cd a : sol.A_minus()) REQUIRE(std::abs(a) <= 1e-13);
    REQUIRE(std::abs(sol.u(0.4, 0.5)) <= 1e-12);
}

TEST_CASE("truncated system is diagonally dominant with decaying coupling") {
    const StripSolver& sol = bench_solver();
    const auto& zs = sol.zeros();
    const auto& de = sol.delta();
    // off-diagonal scale |delta_n e^{i z_n}/(z_n + z_m)| decays in n
    std::vector<double> ns, lg;
    for (size_t n = 1; n + 1 < zs.size(); ++n) {
        double off = std::abs(de[n] * std::exp(cd(0, 1) * zs[n].z) / (zs[n].z + zs[1].z));
        if (off > 0.0) {
            ns.push_back(zs[n].z.imag());
            lg.push_back(std::log(off));
        }
    }
    REQUIRE(fit_slope(ns, lg) < -0.8);  // ~ e^{-Im z_n}
}

TEST_CASE("residue coefficients decay at the lattice rate") {
    const StripSolver& sol = bench_solver();
    const auto& zs = sol.zeros();
    std::vector<double> ns, lgp, lgm;
    for (size_t n = 1; n < 12; ++n) {
        ns.push_back((double)n);
        lgp.push_back(std::log(std::abs(sol.A_plus()[n])));
        lgm.push_back(std::log(std::abs(sol.A_minus()[n])));
    }
    double rate = pi / std::max(sol.spec().b_plus, sol.spec().b_minus);
    REQUIRE(-fit_slope(ns, lgp) >= 0.8 * rate);
    REQUIRE(-fit_slope(ns, lgm) >= 0.8 * rate);
}

TEST_CASE("transform halves are pole-free at the lattice points") {
    for (const StripSolver* sol : {&bench_solver(), &asym_solver()}) {
        const auto& zs = sol->zeros();
        for (size_t n : {size_t(0), size_t(1), size_t(2)}) {
            double r = 0.2;
            cd res1 = circle_residue([&](cd a) { return sol->Phi1_plus(a); }, zs[n].z, r);
            cd res2 = circle_residue([&](cd a) { return sol->Phi2_plus(a); }, zs[n].z, r);
            double scale = std::abs(sol->Phi1_plus(zs[n].z + cd(0.0, 1.0))) + 1.0;
            REQUIRE(std::abs(res1) <= 1e-8 * scale);
            REQUIRE(std::abs(res2) <= 1e-8 * scale);
        }
    }
}

TEST_CASE("boundary relation between the two analytic halves holds on the axis") {
    const StripSolver& sol = asym_solver();
    std::mt19937 rng(7002);
    std::uniform_real_distribution<double> U(-12.0, 12.0);
    for (int q = 0; q < 10; ++q) {
        cd a(U(rng), 0.0);
        cd lhs = sol.Phi1_plus(a);
        cd rhs = std::exp(cd(0, 1) * a) * sol.Phi1_minus(a);
        double scale = std::abs(lhs) + std::abs(rhs) + 1e-3;
        REQUIRE(std::abs(lhs - rhs) <= 1e-8 * scale);
    }
}

TEST_CASE("full functional equation residual vanishes on the axis") {
    for (const StripSolver* sp : {&bench_solver(), &asym_solver()}) {
        const StripSolver& sol = *sp;
        std::mt19937 rng(7003);
        std::uniform_real_distribution<double> U(-15.0, 15.0);
        for (int q = 0; q < 50; ++q) {
            cd a(U(rng), 0.0);
            cd g = strip_g(a, sol.spec());
            cd resid = sol.Phi2_plus(a) + g * sol.Phi1_minus(a) +
                       std::exp(-cd(0, 1) * a) * sol.Phi2_minus(a) + sol.Fhat_minus(a);
            REQUIRE(std::abs(resid) <= 1e-6);
        }
    }
}

TEST_CASE("doubling the truncation leaves the solution unchanged") {
    StripSpec sp = bench_spec();
    sp.N = 64;
    StripSolver fine(sp);
    const StripSolver& coarse = bench_solver();
    for (size_t n = 0; n < 8; ++n) {
        REQUIRE(std::abs(fine.A_plus()[n] - coarse.A_plus()[n]) <= 1e-8);
        REQUIRE(std::abs(fine.A_minus()[n] - coarse.A_minus()[n]) <= 1e-8);
    }
    for (double a : {-9.0, -2.5, 0.3, 4.4, 11.0}) {
        REQUIRE(std::abs(fine.Phi1_plus(cd(a, 0.0)) - coarse.Phi1_plus(cd(a, 0.0))) <= 1e-8);
    }
}

TEST_CASE("normal derivative vanishes on the strip walls") {
    const StripSolver& sol = asym_solver();
    for (double x : {-0.8, 0.3, 1.6}) {
        REQUIRE(std::abs(sol.u_y(x, sol.spec().b_plus)) <= 1e-6);
        REQUIRE(std::abs(sol.u_y(x, -sol.spec().b_minus)) <= 1e-6);
    }
}

TEST_CASE("the prescribed flux is recovered on the slit") {
    for (const StripSolver* sp : {&bench_solver(), &asym_solver()}) {
        const StripSolver& sol = *sp;
        for (double x : {0.3, 0.5, 0.7}) {
            REQUIRE(std::abs(sol.flux_slit(x) - sol.spec().f(x)) <= 1e-3);
        }
        // the field derivative approaches the same values from both sides
        for (double x : {0.4, 0.6}) {
            cd fx = sol.spec().f(x);
            REQUIRE(std::abs(sol.u_y(x, +0.025) - fx) <= 0.1);
            REQUIRE(std::abs(sol.u_y(x, -0.025) - fx) <= 0.1);
        }
    }
}

TEST_CASE("the field jump vanishes off the slit") {
    const StripSolver& sol = bench_solver();
    for (double x : {-0.5, -2.0, 1.5, 3.0}) {
        REQUIRE(std::abs(sol.jump_outside(x)) <= 1e-6);
    }
}

TEST_CASE("semi-analytic field matches the finite-difference oracle") {
    const StripSolver& sol = bench_solver();
    StripGridSolution fd = helmholtz_strip_fd(sol.spec(), 7.0, 40);
    struct Pt { double x, y; };
    for (Pt p : {Pt{0.5, 0.5}, Pt{0.5, -0.5}, Pt{-0.5, 0.25}, Pt{1.75, -0.25}}) {
        cd ua = sol.u(p.x, p.y);
        cd uf = fd.at(p.x, p.y);
        REQUIRE(std::abs(ua - uf) <= 1e-2 * std::max(1.0, std::abs(ua)));
    }
    // face values, including the discontinuity across the slit
    cd up = sol.u(0.5, 0.0, +1), um = sol.u(0.5, 0.0, -1);
    REQUIRE(std::abs(up - fd.at(0.5, 0.0, +1)) <= 2e-2 * std::max(1.0, std::abs(up)));
    REQUIRE(std::abs(um - fd.at(0.5, 0.0, -1)) <= 2e-2 * std::max(1.0, std::abs(um)));
    REQUIRE(std::abs(up - um) > 1e-2);  // the slit really does open a jump
}
