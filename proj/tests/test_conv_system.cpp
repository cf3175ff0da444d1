#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "mwh/conv_system.hpp"
#include "mwh/oracle_fd.hpp"

using namespace mwh;
using Catch::Approx;

static AWSpec base_spec() {
    AWSpec s;
    s.lambda = cd(0.1, 0.0);
    s.a = 1.0;
    s.f1 = {{1.0, 1.0}};  // f1(x) = e^{-x}
    s.f2 = {};
    return s;
}

TEST_CASE("factor pairs: identity, ratio and zero locations", "[conv]") {
    auto id = aw_factor_pairs(cd(0.0));
    REQUIRE(std::abs(id.K0p(cd(0.7, 2.0)) - 1.0) < 1e-14);
    REQUIRE(std::abs(id.K1m(cd(0.7, 2.0)) - 1.0) < 1e-14);

    cd lam(0.1, 0.05);
    auto fp = aw_factor_pairs(lam);
    for (int i = 1; i <= 20; ++i) {
        cd al(-5.0 + 0.5 * i + 0.03, 0.0);
        cd r0 = (al * al + 1.0 - 2.0 * lam) / (al * al + 1.0);
        cd r1 = (al * al + 1.0 - 2.0 * lam) / (al * al + 1.0 - 4.0 * lam);
        REQUIRE(std::abs(fp.K0p(al) / fp.K0m(al) - r0) < 1e-13);
        REQUIRE(std::abs(fp.K1p(al) / fp.K1m(al) - r1) < 1e-13);
    }
    REQUIRE(std::abs(fp.K0p(-cd(0, 1) * fp.lambda0)) < 1e-14);
    REQUIRE_THROWS_AS(aw_factor_pairs(cd(0.3, 0.0)), domain_error);
}

TEST_CASE("branch choice keeps Re lambda_0, lambda_1 positive", "[conv]") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> ur(-2.0, 2.0);
    int done = 0;
    while (done < 20) {
        cd lam(ur(rng), ur(rng));
        if (lam.imag() == 0.0 && lam.real() >= 0.25) continue;
        auto fp = aw_factor_pairs(lam);
        REQUIRE(fp.lambda0.real() > 0.0);
        REQUIRE(fp.lambda1.real() > 0.0);
        ++done;
    }
}

TEST_CASE("zero forcing gives identically zero splitting and solution", "[conv]") {
    AWSpec s = base_spec();
    s.f1.clear();
    AWSolver sol(s);
    REQUIRE(std::abs(sol.psi1_plus(cd(0.3, 0.8))) < 1e-14);
    REQUIRE(std::abs(sol.psi2_plus(cd(0.3, 0.8))) < 1e-14);
    REQUIRE(std::abs(sol.constants().C1) < 1e-14);
    REQUIRE(std::abs(sol.constants().C2) < 1e-14);
    REQUIRE(std::abs(sol.u1(0.7)) < 1e-14);
    REQUIRE(std::abs(sol.u2(0.7)) < 1e-14);
}

TEST_CASE("splitting jumps match the prescribed densities", "[conv]") {
    AWSpec s = base_spec();
    s.f1 = {{1.0, 2.0}};  // e^{-2x}
    s.f2 = {{0.5, 1.5}};
    AWSolver sol(s);
    for (int i = 0; i < 10; ++i) {
        cd al(-4.5 + i, 0.0);
        // approach the axis from both sides (rational continuations are exact
        // on the axis itself)
        cd j1 = sol.psi1_plus(al) - sol.psi1_minus(al);
        REQUIRE(std::abs(j1 - sol.rho1(al)) < 1e-8);
        cd j2 = sol.psi2_plus(al) - sol.psi2_minus(al);
        REQUIRE(std::abs(j2 - sol.rho2(al)) < 1e-8);
    }
}

TEST_CASE("residue-computed splitting agrees with the quadrature oracle", "[conv]") {
    AWSpec s = base_spec();
    s.f1 = {{1.0, 2.0}};
    s.f2 = {};
    AWSolver sol(s);
    for (cd z : {cd(0.4, 0.9), cd(-1.2, 1.5), cd(0.0, 2.5)}) {
        cd oracle = aw_psi_quadrature([&](cd b) { return sol.rho1(b); }, z, 256);
        REQUIRE(std::abs(sol.psi1_plus(z) - oracle) < 1e-8);
    }
    for (cd z : {cd(0.4, -0.2), cd(-0.8, -0.35)}) {
        cd oracle = aw_psi_quadrature([&](cd b) { return sol.rho1(b); }, z, 256);
        REQUIRE(std::abs(sol.psi1_minus(z) - oracle) < 1e-8);
    }
}

TEST_CASE("inadmissible poles are removed by the constants", "[conv]") {
    AWSolver sol(base_spec());
    const cd i(0.0, 1.0);
    cd l0 = sol.constants().lambda0;
    cd res_up = circle_residue([&](cd al) { return sol.U1p(al); }, i * l0, 0.05);
    REQUIRE(std::abs(res_up) < 1e-10);
    cd res_dn = circle_residue([&](cd al) { return sol.U2m(al); }, -i * l0, 0.05);
    REQUIRE(std::abs(res_dn) < 1e-10);
}

TEST_CASE("transform-domain solution satisfies the matrix RHP", "[conv]") {
    AWSpec s = base_spec();
    s.f2 = {{0.3, 2.5}};
    AWSolver sol(s);
    const cd i(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        cd al(-12.0 + 0.49 * k, 0.0);
        cd det = al * al + 1.0;
        cd g11 = (al * al + 1.0 - 2.0 * sol.spec().lambda) / det;
        cd g12 = -2.0 * sol.spec().lambda * std::exp(i * al * sol.spec().a) / det;
        cd g21 = -2.0 * sol.spec().lambda * std::exp(-i * al * sol.spec().a) / det;
        cd r1 = g11 * sol.U1p(al) + g12 * sol.U2p(al) - sol.U1m(al) - sol.F1p(al);
        cd r2 = g21 * sol.U1p(al) + g11 * sol.U2p(al) - sol.U2m(al) - sol.F2p(al);
        REQUIRE(std::abs(r1) < 1e-8);
        REQUIRE(std::abs(r2) < 1e-8);
    }
}

TEST_CASE("e^{i a alpha} U2+ decays along the positive imaginary ray", "[conv]") {
    AWSolver sol(base_spec());
    const cd i(0.0, 1.0);
    double prev = 1e300;
    for (double h : {2.0, 4.0, 8.0, 16.0, 32.0}) {
        double v = std::abs(std::exp(i * sol.spec().a * (i * h)) * sol.U2p(i * h));
        REQUIRE(v < prev);
        prev = v;
    }
    REQUIRE(prev < 1e-14);
}

TEST_CASE("recovered u satisfies the original convolution system", "[conv]") {
    AWSpec s = base_spec();
    AWSolver sol(s);
    double X = 45.0;
    for (int k = 0; k < 20; ++k) {
        double x = 0.25 + 0.5 * k;
        // convolution with kinks split at t = x, x - a, x + a
        std::vector<double> brk{0.0};
        for (double kk : {x - s.a, x, x + s.a})
            if (kk > 0.0 && kk < X) brk.push_back(kk);
        brk.push_back(X);
        std::sort(brk.begin(), brk.end());
        cd c1 = 0.0, c2 = 0.0;
        for (size_t j = 0; j + 1 < brk.size(); ++j) {
            c1 += integrate_adaptive(
                [&](double t) {
                    return std::exp(-std::abs(x - t)) * sol.u1(t) +
                           std::exp(-std::abs(x - t - s.a)) * sol.u2(t);
                },
                brk[j], brk[j + 1], 1e-10);
            c2 += integrate_adaptive(
                [&](double t) {
                    return std::exp(-std::abs(x - t + s.a)) * sol.u1(t) +
                           std::exp(-std::abs(x - t)) * sol.u2(t);
                },
                brk[j], brk[j + 1], 1e-10);
        }
        cd f1 = std::exp(-x);
        cd r1 = sol.u1(x) - s.lambda * c1 - f1;
        cd r2 = sol.u2(x) - s.lambda * c2;
        REQUIRE(std::abs(r1) < 1e-6);
        REQUIRE(std::abs(r2) < 1e-6);
    }
}

TEST_CASE("solution matches the Nystrom oracle", "[conv]") {
    AWSpec s = base_spec();
    AWSolver sol(s);
    double err = 0.0;
    AWGridSolution ny = aw_nystrom_refined(s, 40.0, 800, &err);
    INFO("Nystrom two-grid error estimate " << err);
    REQUIRE(err < 1e-3);
    for (double x : {0.5, 1.5, 3.0}) {
        REQUIRE(std::abs(sol.u1(x) - ny.interp1(x)) < 1e-4);
        REQUIRE(std::abs(sol.u2(x) - ny.interp2(x)) < 1e-4);
    }
}

TEST_CASE("inverse-transform round trip for a rational transform", "[conv]") {
    // U+(al) = 1/(mu - i al)  <->  u(x) = e^{-mu x}: residue closure downward
    const cd i(0.0, 1.0);
    double mu = 1.7, x = 0.8;
    cd v = -i * circle_residue(
                    [&](cd al) { return 1.0 / (mu - i * al) * std::exp(-i * al * x); },
                    -i * mu, 0.3);
    REQUIRE(std::abs(v - std::exp(-mu * x)) < 1e-12);
    // forward transform of the recovered residue solution returns U+ (oracle)
    AWSolver sol(base_spec());
    cd al0(0.6, 0.4);
    cd fwd = integrate_adaptive(
        [&](double t) { return sol.u1(t) * std::exp(i * al0 * t); }, 0.0, 60.0, 1e-11);
    REQUIRE(std::abs(fwd - sol.U1p(al0)) < 1e-8);
}
