#include <catch2/catch_amalgamated.hpp>

#include "mwh/contour.hpp"
#include "mwh/special.hpp"

using namespace mwh;
using Catch::Approx;

TEST_CASE("Cauchy integral of a rational density reproduces residues", "[contour]") {
    // rho(sigma) = 1/(sigma - w) with w = 1 - 2i below the real axis:
    // C(z) = 1/(z - w) for Im z > 0, and 0 for Im z < 0 (plus truncation error).
    LineContour L{cd(0.0), cd(1.0), 600.0};
    cd w(1.0, -2.0);
    CauchyDensity d{[&](double t) { return 1.0 / (cd(t, 0.0) - w); }, cd(0.0)};
    cd zu(0.5, 1.5), zl(-0.3, -1.0);
    // brute truncated oracle: dense paneled quadrature of the same integral
    auto brute = [&](cd z) {
        auto f = [&](double t) { return 1.0 / ((cd(t) - w) * (cd(t) - z)); };
        return integrate_panels(f, linspace_breaks(-L.R, L.R, 6000), 12) / (cd(0.0, 2.0) * pi);
    };
    REQUIRE(std::abs(cauchy_eval(d, L, zu) - brute(zu)) < 1e-11);
    REQUIRE(std::abs(cauchy_eval(d, L, zl) - brute(zl)) < 1e-11);
    // and the infinite-line limits (residue values) hold to truncation order 1/R
    REQUIRE(std::abs(cauchy_eval(d, L, zu) - 1.0 / (zu - w)) < 1e-3);
    REQUIRE(std::abs(cauchy_eval(d, L, zl)) < 1e-3);
}

TEST_CASE("Cauchy integral handles a density with nonzero limit at infinity", "[contour]") {
    // rho = c + 1/(sigma - w); the constant contributes c * 0 in the principal
    // sense as R -> inf on a symmetric line (log ratio -> i pi sign(Im z) ... )
    LineContour L{cd(0.0), cd(1.0), 800.0};
    cd w(0.0, -1.0), c(0.7, -0.2);
    CauchyDensity d{[&](double t) { return c + 1.0 / (cd(t, 0.0) - w); }, c};
    cd zu(0.2, 0.8);
    // analytic: 1/(2 pi i)[ c log((R-z)/(-R-z)) ] -> c * (i pi)/(2 pi i) = c/2
    cd want = 1.0 / (zu - w) + 0.5 * c;
    REQUIRE(std::abs(cauchy_eval(d, L, zu) - want) < 2e-3);
    // brute truncated oracle, full density including the constant part
    auto f = [&](double t) { return (c + 1.0 / (cd(t) - w)) / (cd(t) - zu); };
    cd want_brute = integrate_panels(f, linspace_breaks(-L.R, L.R, 8000), 12) / (cd(0.0, 2.0) * pi);
    REQUIRE(std::abs(cauchy_eval(d, L, zu) - want_brute) < 1e-10);
}

TEST_CASE("Plemelj split satisfies the jump and matches a PV oracle", "[contour]") {
    LineContour L{cd(0.0), cd(1.0), 400.0};
    CauchyDensity d{[](double t) { return 1.0 / cd(t * t + 4.0, 0.0); }, cd(0.0)};
    double s = 1.0;
    auto pr = plemelj_split(d, L, s);
    // jump relation
    REQUIRE(std::abs((pr.plus - pr.minus) - d.rho(s)) < 1e-12);
    // analytic PV oracle via half-residue calculus: for rho = 1/(t^2+4),
    //   PV int rho/(t - 1) dt = 2 pi i Res_{2i} + pi i Res_{1} = -pi/10,
    // so the Cauchy PV value is (-pi/10)/(2 pi i) = i/20.
    cd want(0.0, 1.0 / 20.0);
    REQUIRE(std::abs(pr.pv - want) < 1e-4);  // truncation at R = 400 is O(1/R^2)
    // Plemelj limits agree with off-axis Cauchy values approached vertically
    cd above = cauchy_eval(d, L, cd(s, 1e-3), 1e-13, 16, 12);
    REQUIRE(std::abs(above - pr.plus) < 5e-3);
}

TEST_CASE("fixed-Talbot inversion reproduces known transform pairs", "[contour]") {
    double t = 1.0;
    // F(p) = exp(-sqrt p)/sqrt p  <->  f(t) = exp(-1/(4t)) / sqrt(pi t)
    {
        auto F = [](cd p) { cd r = std::sqrt(p); return std::exp(-r) / r; };
        double want = std::exp(-1.0 / (4.0 * t)) / std::sqrt(pi * t);
        REQUIRE(talbot_invert(F, t).real() == Approx(want).epsilon(1e-10));
    }
    // F(p) = exp(-sqrt p)/p  <->  f(t) = erfc(1/(2 sqrt t))
    {
        auto F = [](cd p) { return std::exp(-std::sqrt(p)) / p; };
        double want = std::erfc(1.0 / (2.0 * std::sqrt(t)));
        REQUIRE(talbot_invert(F, t).real() == Approx(want).epsilon(1e-10));
    }
    // F(p) = 1/(p + a)  <->  f(t) = exp(-a t)
    {
        double a = 2.5;
        auto F = [a](cd p) { return 1.0 / (p + a); };
        for (double tt : {0.2, 1.0, 4.0})
            REQUIRE(talbot_invert(F, tt).real() ==
                    Approx(std::exp(-a * tt)).epsilon(1e-9).margin(1e-9));
    }
    // checked variant agrees
    {
        auto F = [](cd p) { return std::exp(-std::sqrt(p)) / p; };
        cd v = talbot_invert_checked(F, 0.7, 1e-12);
        REQUIRE(v.real() == Approx(std::erfc(0.5 / std::sqrt(0.7))).epsilon(1e-11));
    }
}
