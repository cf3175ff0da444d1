#include <catch2/catch_amalgamated.hpp>

#include "mwh/heat_rod.hpp"
#include "mwh/oracle_fd.hpp"

using namespace mwh;
using Catch::Approx;

static RodSpec two_part_spec() {
    RodSpec s;
    s.b = {0.0};
    s.a = {1.0, 2.0};
    s.k = {1.0, 3.0};
    s.gamma_minus = 0.0;
    s.gamma_plus = 1.0;
    s.f = Profile{[](double x) { return (x > -1.0 && x < 1.0) ? 1.0 : 0.0; }, -1.0, 1.0};
    return s;
}

TEST_CASE("rational factor pair: identity, zero and ratio checks", "[heat_rod]") {
    RodSpec s = two_part_spec();
    cd p(0.9, 0.4);
    // identical neighbours -> identity factorization
    RodSpec same = s;
    same.a = {1.5, 1.5};
    auto fp_same = rational_factor_pair(same, 0, p);
    REQUIRE(std::abs(fp_same.Kp(cd(0.3, 2.0)) - 1.0) < 1e-14);
    REQUIRE(std::abs(fp_same.Km(cd(0.3, 2.0)) - 1.0) < 1e-14);
    // constructed zero of K+ * m_j at s = sqrt(p)/a_{j+1}
    auto fp = rational_factor_pair(s, 0, p);
    cd rp = sqrt_p(p);
    cd s0 = rp / s.a[1];
    cd mj = s.a[0] * s.a[0] * s0 * s0 - p;
    REQUIRE(std::abs(fp.Kp(s0) * mj) < 1e-12);
    // ratio identity on the imaginary axis
    for (int i = 1; i <= 20; ++i) {
        cd si(0.0, -5.0 + 0.5 * i + 0.01);
        cd m0 = s.a[0] * s.a[0] * si * si - p;
        cd m1 = s.a[1] * s.a[1] * si * si - p;
        REQUIRE(std::abs(fp.Kp(si) / fp.Km(si) - m1 / m0) < 1e-12);
    }
}

TEST_CASE("two-part solver reduces to the classical Poisson formula", "[heat_rod]") {
    RodSpec s;
    s.b = {0.0};
    s.a = {1.0, 1.0};
    s.k = {1.0, 1.0};
    s.f = Profile{[](double x) { return std::exp(-2.0 * x * x); }, -8.0, 8.0};
    TwoPartRod rod(s);
    REQUIRE(rod.lam1() == Approx(0.0).margin(1e-15));
    double t = 0.4;
    for (double x : {-1.3, -0.2, 0.0, 0.7, 2.1}) {
        // classical convolution oracle
        double want = integrate_adaptive(
            [&](double xi) {
                return cd(std::exp(-(x - xi) * (x - xi) / (4.0 * t)) *
                          std::exp(-2.0 * xi * xi), 0.0);
            }, -8.0, 8.0, 1e-13).real() / std::sqrt(4.0 * pi * t);
        REQUIRE(rod.u(x, t) == Approx(want).epsilon(1e-8).margin(1e-8));
    }
}

TEST_CASE("level-only data yields pure erfc profiles", "[heat_rod]") {
    RodSpec s = two_part_spec();
    s.f = Profile{};
    TwoPartRod rod(s);
    double t = 0.3, g = 1.0, lam0 = 3.0 / 2.0 + 1.0;
    double um = 3.0 * g / (lam0 * 2.0) * std::erfc(0.4 / (2.0 * std::sqrt(t)));
    REQUIRE(rod.u(-0.4, t) == Approx(um).epsilon(1e-13));
    double up = -1.0 * g / (lam0 * 1.0) * std::erfc(0.4 / (2.0 * std::sqrt(t) * 2.0));
    REQUIRE(rod.u(0.4, t) == Approx(up).epsilon(1e-13));
}

TEST_CASE("steady limit closed form and long-time evaluation", "[heat_rod]") {
    RodSpec s = two_part_spec();
    REQUIRE(steady_limit(s) == Approx(0.6).epsilon(1e-15));
    RodSpec eq = s;
    eq.gamma_minus = eq.gamma_plus = 0.7;
    REQUIRE(steady_limit(eq) == Approx(0.7).epsilon(1e-14));
    RodSpec sym = s;
    sym.a = {1.5, 1.5};
    sym.k = {2.0, 2.0};
    REQUIRE(steady_limit(sym) == Approx(0.5).epsilon(1e-14));
    // long-time evaluation approaches the limit (integrable part decays
    // like t^{-1/2}, so use the level-only profile at t = 1e4)
    RodSpec lvl = s;
    lvl.f = Profile{};
    TwoPartRod rod(lvl);
    REQUIRE(std::abs(rod.u_total(0.5, 1e4) - 0.6) < 1e-3);
    REQUIRE(std::abs(rod.u_total(-2.0, 1e4) - 0.6) < 1e-2);
    REQUIRE(std::abs(rod.u_total(-2.0, 1e6) - 0.6) < 1e-3);
    // with the integrable part included, convergence continues at larger t
    TwoPartRod rodf(s);
    REQUIRE(std::abs(rodf.u_total(0.5, 1e4) - 0.6) < 1e-2);
    REQUIRE(std::abs(rodf.u_total(0.5, 1e6) - 0.6) < 1e-3);
}

TEST_CASE("interface conditions hold for the closed form", "[heat_rod]") {
    TwoPartRod rod(two_part_spec());
    double eps = 1e-9;
    for (double t : {0.1, 0.5, 2.0}) {
        double jump = rod.u(-eps, t) - rod.u(eps, t);
        REQUIRE(std::abs(jump - 1.0) < 1e-6);  // value jump = gamma_+ - gamma_-
        double flux = 1.0 * rod.ux(-eps, t) - 3.0 * rod.ux(eps, t);
        REQUIRE(std::abs(flux) < 1e-6);
    }
}

TEST_CASE("two-part solver matches the Crank-Nicolson oracle", "[heat_rod]") {
    RodSpec s = two_part_spec();
    TwoPartRod rod(s);
    double t = 0.5, err = 0.0;
    GridSolution fd = heat_cn_refined(s, 12.0, 2400, 500, t, &err);
    INFO("oracle two-grid error estimate " << err);
    REQUIRE(err < 5e-4);
    for (double x : {-2.0, -0.25, 0.25, 1.0, 2.5}) {
        REQUIRE(std::abs(rod.u_total(x, t) - fd.interp(x)) < 1e-3);
    }
}

TEST_CASE("removable singularities of the half-line transforms", "[heat_rod]") {
    TwoPartRod rod(two_part_spec());
    cd p(1.3, 0.0);
    cd rp = sqrt_p(p);
    // U^+ is analytic in Re s < 0: approach the inner pole s = -sqrt(p)/a_-
    cd sp = -rp / 1.0;
    cd base = rod.U_plus(sp + cd(0.1, 0.0), p);
    for (double d : {1e-3, 1e-5, 1e-6}) {
        cd v = rod.U_plus(sp + cd(d, d), p);
        REQUIRE(is_finite(v));
        REQUIRE(std::abs(v) < 50.0 * (std::abs(base) + 1.0));
    }
    // U^- analytic in Re s > 0: approach s = +sqrt(p)/a_+
    cd sm = rp / 2.0;
    cd base2 = rod.U_minus(sm + cd(0.1, 0.0), p);
    for (double d : {1e-3, 1e-5, 1e-6}) {
        cd v = rod.U_minus(sm + cd(d, d), p);
        REQUIRE(is_finite(v));
        REQUIRE(std::abs(v) < 50.0 * (std::abs(base2) + 1.0));
    }
}

TEST_CASE("Laplace-domain solution satisfies the transformed ODE and interface", "[heat_rod]") {
    TwoPartRod rod(two_part_spec());
    cd p(0.8, 0.3);
    // interface conditions in the p-domain
    double eps = 1e-7;
    cd jump = rod.u_hat(-eps, p) - rod.u_hat(eps, p);
    REQUIRE(std::abs(jump - 1.0 / p) < 1e-5);
    // ODE residual away from the interface and data support edges, via
    // second differences: a^2 u'' - p u = -f
    for (double x : {-0.5, 0.6, 1.5}) {
        double a = x < 0 ? 1.0 : 2.0;
        double hh = 1e-4;
        cd upp = (rod.u_hat(x + hh, p) - 2.0 * rod.u_hat(x, p) + rod.u_hat(x - hh, p)) / (hh * hh);
        double fx = (x > -1.0 && x < 1.0) ? 1.0 : 0.0;
        cd res = a * a * upp - p * rod.u_hat(x, p) + fx;
        REQUIRE(std::abs(res) < 1e-4);
    }
}

TEST_CASE("heat-kernel positivity", "[heat_rod]") {
    RodSpec s = two_part_spec();
    s.gamma_plus = 0.0;  // gamma = 0, f >= 0
    TwoPartRod rod(s);
    for (double x : {-3.0, -1.0, -0.1, 0.1, 0.5, 2.0, 4.0})
        for (double t : {0.05, 0.5, 3.0})
            REQUIRE(rod.u(x, t) >= -1e-10);
}

TEST_CASE("general solver degenerates to the two-part closed form", "[heat_rod]") {
    RodSpec s2 = two_part_spec();
    TwoPartRod rod(s2);
    // three segments with the first two identical == two-part rod
    RodSpec s3 = s2;
    s3.b = {-0.5, 0.0};
    s3.a = {1.0, 1.0, 2.0};
    s3.k = {1.0, 1.0, 3.0};
    // the level jump is attached to b0; move levels so the physical jump sits
    // at x=0 instead: use gamma via a genuinely merged case with jump at b0
    s3.gamma_minus = s3.gamma_plus = 0.0;
    RodSpec s2z = s2;
    s2z.gamma_minus = s2z.gamma_plus = 0.0;
    TwoPartRod rodz(s2z);
    GeneralRod gen(s3);
    for (double x : {-1.5, -0.25, 0.3, 1.2})
        REQUIRE(std::abs(gen.u(x, 0.5) - rodz.u(x, 0.5)) < 1e-6);
}

TEST_CASE("general solver on a homogeneous rod reproduces Poisson", "[heat_rod]") {
    RodSpec s;
    s.b = {-0.7, 0.4};
    s.a = {1.0, 1.0, 1.0};
    s.k = {1.0, 1.0, 1.0};
    s.f = Profile{[](double x) { return std::exp(-3.0 * x * x); }, -7.0, 7.0};
    GeneralRod gen(s);
    double t = 0.3;
    for (double x : {-1.0, 0.0, 0.9}) {
        double want = integrate_adaptive(
            [&](double xi) {
                return cd(std::exp(-(x - xi) * (x - xi) / (4.0 * t)) *
                          std::exp(-3.0 * xi * xi), 0.0);
            }, -7.0, 7.0, 1e-13).real() / std::sqrt(4.0 * pi * t);
        REQUIRE(std::abs(gen.u(x, t) - want) < 1e-6);
    }
}

TEST_CASE("three-segment solver matches the Crank-Nicolson oracle", "[heat_rod]") {
    RodSpec s;
    s.b = {0.0, 1.0};
    s.a = {1.0, 2.0, 1.0};
    s.k = {1.0, 3.0, 1.0};
    s.gamma_minus = 0.0;
    s.gamma_plus = 1.0;
    s.f = Profile{[](double x) { return (x > -1.0 && x < 1.0) ? 1.0 : 0.0; }, -1.0, 1.0};
    GeneralRod gen(s);
    double t = 0.5, err = 0.0;
    GridSolution fd = heat_cn_refined(s, 12.0, 2400, 500, t, &err);
    INFO("oracle two-grid error estimate " << err);
    REQUIRE(err < 5e-4);
    for (int i = 0; i <= 10; ++i) {
        double x = -2.0 + 0.45 * i;
        REQUIRE(std::abs(gen.u_total(x, t) - fd.interp(x)) < 1e-3);
    }
    // interface conditions at both breakpoints
    double eps = 1e-8;
    REQUIRE(std::abs((gen.u(-eps, t) - gen.u(eps, t)) - 1.0) < 1e-6);
    REQUIRE(std::abs(1.0 * gen.ux(-eps, t) - 3.0 * gen.ux(eps, t)) < 1e-6);
    REQUIRE(std::abs(gen.u(1.0 - eps, t) - gen.u(1.0 + eps, t)) < 1e-6);
    REQUIRE(std::abs(3.0 * gen.ux(1.0 - eps, t) - 1.0 * gen.ux(1.0 + eps, t)) < 1e-6);
}
