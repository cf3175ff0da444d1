#pragma once

// Exact solution of a 2x2 convolution system on the half-line with the
// exponential matrix kernel
//   k(x) = [ e^{-|x|}  e^{-|x-a|} ; e^{-|x+a|}  e^{-|x|} ],
//   u(x) = lambda int_0^inf k(x-t) u(t) dt + f(x),
// via scalar rational factorizations, Cauchy splittings computed by residue
// calculus, and residue-based inverse Fourier transforms.

#include <map>
#include <vector>

#include "mwh/contour.hpp"
#include "mwh/numerics.hpp"
#include "mwh/special.hpp"

namespace mwh {

struct AWSpec {
    cd lambda{0.0, 0.0};
    double a = 1.0;
    // forcing components as exponential sums f_j(x) = sum c e^{-mu x}, mu > 0
    std::vector<std::pair<double, double>> f1, f2;  // (coefficient, rate)

    void validate() const {
        if (lambda.imag() == 0.0 && lambda.real() >= 0.25)
            throw domain_error("AWSpec: lambda in [1/4, inf) is outside the normal case");
        if (!(a > 0.0)) throw domain_error("AWSpec: offset a must be positive");
        for (auto* f : {&f1, &f2})
            for (auto& [c, mu] : *f)
                if (!(mu > 0.0)) throw domain_error("AWSpec: forcing rates must be positive");
    }
};

struct AWConstants {
    cd lambda0, lambda1, b, d1, d2, C1, C2;
};

struct AWFactorPairs {
    std::function<cd(cd)> K0p, K0m, K1p, K1m;
    cd lambda0, lambda1;
};

inline AWFactorPairs aw_factor_pairs(cd lambda) {
    if (lambda.imag() == 0.0 && lambda.real() >= 0.25)
        throw domain_error("aw_factor_pairs: lambda in [1/4, inf) is outside the normal case");
    cd l0 = std::sqrt(1.0 - 2.0 * lambda);  // principal: Re > 0 off the cut
    cd l1 = std::sqrt(1.0 - 4.0 * lambda);
    const cd i(0.0, 1.0);
    return {[=](cd al) { return (al + i * l0) / (al + i); },
            [=](cd al) { return (al - i) / (al - i * l0); },
            [=](cd al) { return (al + i * l0) / (al + i * l1); },
            [=](cd al) { return (al - i * l1) / (al - i * l0); },
            l0, l1};
}

// residue of F at a pole enclosed by a circle of radius r (trapezoid rule on
// the circle; exact for meromorphic F once the circle isolates the pole)
template <typename F>
cd circle_residue(F&& f, cd pole, double r, int n = 64) {
    cd sum = 0.0;
    for (int k = 0; k < n; ++k) {
        double th = 2.0 * pi * k / n;
        cd e = std::polar(1.0, th);
        sum += f(pole + r * e) * e;
    }
    return sum * (r / n);
}

// full-line Cauchy integral by the tangent substitution (quadrature oracle
// for densities with 1/beta tails; z strictly off the real axis)
template <typename Rho>
cd aw_psi_quadrature(Rho&& rho, cd z, int panels = 64, int order = 16) {
    auto f = [&](double th) {
        double tb = std::tan(th);
        double sec2 = 1.0 + tb * tb;
        return rho(cd(tb, 0.0)) * sec2 / (cd(tb, 0.0) - z);
    };
    cd v = integrate_panels(f, linspace_breaks(-pi / 2 + 1e-9, pi / 2 - 1e-9, panels), order);
    return v / (cd(0.0, 2.0) * pi);
}

class AWSolver {
  public:
    explicit AWSolver(AWSpec s) : spec_(std::move(s)), fac_(aw_factor_pairs(spec_.lambda)) {
        spec_.validate();
        l0_ = fac_.lambda0;
        l1_ = fac_.lambda1;
        build_psi();
        build_constants();
    }

    const AWSpec& spec() const { return spec_; }
    const AWFactorPairs& factors() const { return fac_; }
    const AWConstants& constants() const { return consts_; }

    // Fourier transforms of the forcing
    cd F1p(cd al) const { return exp_transform(spec_.f1, al); }
    cd F2p(cd al) const { return exp_transform(spec_.f2, al); }

    // Cauchy densities of the two splittings
    cd rho1(cd b) const { return F1p(b) * fac_.K0m(b); }
    cd rho2(cd b) const {
        const cd i(0.0, 1.0);
        return F2p(b) / fac_.K1m(b) +
               2.0 * spec_.lambda * std::exp(-i * b * spec_.a) * F1p(b) /
                   ((b + i * l0_) * (b - i * l1_));
    }

    // split parts: psiN_plus is the rational continuation valid in C+ (and
    // by analytic continuation everywhere off the lower poles);
    // psiN_minus(z) = psiN_plus(z) - rhoN(z) for z in C-.
    cd psi1_plus(cd z) const { return rational_sum(res1_, z); }
    cd psi2_plus(cd z) const { return rational_sum(res2_, z); }
    cd psi1_minus(cd z) const { return psi1_plus(z) - rho1(z); }
    cd psi2_minus(cd z) const { return psi2_plus(z) - rho2(z); }

    // transform-domain solution
    cd U1m(cd al) const {
        return (psi1_minus(al) + consts_.C1 / (al - cd(0, 1) * l0_)) / fac_.K0m(al);
    }
    cd U2p(cd al) const {
        return fac_.K1p(al) * (psi2_plus(al) + consts_.C2 / (al + cd(0, 1) * l0_));
    }
    cd U2m(cd al) const {
        const cd i(0.0, 1.0);
        return fac_.K1m(al) *
               (psi2_minus(al) + consts_.C2 / (al + i * l0_) -
                2.0 * spec_.lambda * std::exp(-i * spec_.a * al) /
                    ((al + i * l0_) * (al - i * l1_) * fac_.K0m(al)) *
                    (psi1_minus(al) + consts_.C1 / (al - i * l0_)));
    }
    cd U1p(cd al) const { return rat1(al) + std::exp(cd(0, 1) * spec_.a * al) * rat2(al); }

    // the two rational pieces of U1+ (the second carries e^{i a alpha})
    cd rat1(cd al) const {
        return (psi1_plus(al) + consts_.C1 / (al - cd(0, 1) * l0_)) / fac_.K0p(al);
    }
    cd rat2(cd al) const {
        const cd i(0.0, 1.0);
        return 2.0 * spec_.lambda * fac_.K1p(al) *
               (psi2_plus(al) + consts_.C2 / (al + i * l0_)) /
               ((al + i) * (al - i * l0_) * fac_.K0p(al));
    }

    // time-domain solution on x > 0 (inverse transform via residues)
    cd u1(double x) const {
        const cd i(0.0, 1.0);
        cd v = 0.0;
        // rat1 part always closes downward for x > 0
        for (cd p : lower_poles_)
            v += -i * circle_residue(
                          [&](cd al) { return rat1(al) * std::exp(-i * al * x); }, p,
                          pole_radius(p));
        // rat2 part carries e^{i alpha (a - x)}
        if (x < spec_.a) {
            cd p = i * l0_;
            v += i * circle_residue(
                         [&](cd al) { return rat2(al) * std::exp(i * al * (spec_.a - x)); },
                         p, pole_radius(p));
        } else {
            for (cd p : lower_poles_)
                v += -i * circle_residue(
                              [&](cd al) {
                                  return rat2(al) * std::exp(i * al * (spec_.a - x));
                              },
                              p, pole_radius(p));
        }
        return v;
    }
    cd u2(double x) const {
        const cd i(0.0, 1.0);
        cd v = 0.0;
        for (cd p : lower_poles_)
            v += -i * circle_residue(
                          [&](cd al) { return U2p(al) * std::exp(-i * al * x); }, p,
                          pole_radius(p));
        return v;
    }

  private:
    static cd exp_transform(const std::vector<std::pair<double, double>>& f, cd al) {
        // int_0^inf e^{-mu x} e^{i al x} dx = 1/(mu - i al)
        cd v = 0.0;
        for (auto& [c, mu] : f) v += c / (cd(mu, 0.0) - cd(0, 1) * al);
        return v;
    }

    static cd rational_sum(const std::map<std::pair<double, double>, cd>& res, cd z) {
        cd v = 0.0;
        for (auto& [pk, r] : res) v += r / (z - cd(pk.first, pk.second));
        return v;
    }

    void add_candidate(std::vector<cd>& v, cd p) const {
        for (cd q : v)
            if (std::abs(q - p) < 1e-12) return;
        v.push_back(p);
    }

    double pole_radius(cd p) const {
        double d = 1.0;
        for (cd q : all_poles_)
            if (std::abs(q - p) > 1e-12) d = std::min(d, std::abs(q - p));
        return 0.35 * d;
    }

    void build_psi() {
        const cd i(0.0, 1.0);
        // candidate lower-half-plane poles of the densities and of the
        // transform-domain solution
        for (auto& [c, mu] : spec_.f1) add_candidate(lower_poles_, -i * mu);
        for (auto& [c, mu] : spec_.f2) add_candidate(lower_poles_, -i * mu);
        add_candidate(lower_poles_, -i * l0_);
        add_candidate(lower_poles_, -i * l1_);
        add_candidate(lower_poles_, -i);
        all_poles_ = lower_poles_;
        add_candidate(all_poles_, i * l0_);
        // Psi+ as rational sums: Psi+(z) = sum res_p(rho) / (z - p) over the
        // lower poles of the density (simple-pole calculus)
        for (cd p : lower_poles_) {
            double r = pole_radius(p);
            cd r1 = circle_residue([&](cd b) { return rho1(b); }, p, r);
            cd r2 = circle_residue([&](cd b) { return rho2(b); }, p, r);
            auto key = std::make_pair(p.real(), p.imag());
            if (std::abs(r1) > 1e-14) res1_[key] = r1;
            if (std::abs(r2) > 1e-14) res2_[key] = r2;
        }
    }

    void build_constants() {
        const cd i(0.0, 1.0);
        consts_.lambda0 = l0_;
        consts_.lambda1 = l1_;
        cd b = 2.0 * spec_.lambda * std::exp(-spec_.a * l0_) / ((l0_ + 1.0) * (l0_ + l1_));
        if (std::abs(b * b + 1.0) < 1e-14)
            throw numeric_error("AWSolver: degenerate constants, b^2 + 1 = 0");
        cd d1 = 2.0 * i * b * l0_ * psi2_plus(i * l0_);
        cd d2 = 2.0 * i * b * l0_ * psi1_minus(-i * l0_);
        consts_.b = b;
        consts_.d1 = d1;
        consts_.d2 = d2;
        consts_.C1 = (d1 + b * d2) / (b * b + 1.0);
        consts_.C2 = (d2 - b * d1) / (b * b + 1.0);
    }

    AWSpec spec_;
    AWFactorPairs fac_;
    cd l0_, l1_;
    std::vector<cd> lower_poles_, all_poles_;
    std::map<std::pair<double, double>, cd> res1_, res2_;
    AWConstants consts_;
};

}  // namespace mwh
