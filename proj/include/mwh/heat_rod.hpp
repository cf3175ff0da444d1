#pragma once

// Heat conduction in an infinite piecewise-homogeneous rod.
//
// Two-part rods (one material interface) are solved in closed form:
// Gaussian/erfc convolution formulas in the time domain plus the full
// Laplace-domain apparatus (half-line transforms U^+/U^-, interface
// constants).  Rods with m >= 2 interfaces are solved per Laplace node by
// assembling exponential fundamental solutions segment-by-segment, solving
// the 2m x 2m interface system and inverting with the fixed-Talbot rule.

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "mwh/contour.hpp"
#include "mwh/numerics.hpp"
#include "mwh/special.hpp"

namespace mwh {

// A compactly supported sampled or analytic profile.
struct Profile {
    std::function<double(double)> f;  // null means identically zero
    double lo = 0.0, hi = 0.0;        // support interval
    bool empty() const { return !f || hi <= lo; }
};

struct RodSpec {
    std::vector<double> b;       // interface positions, strictly increasing
    std::vector<double> a;       // per-segment diffusivity sqrt, size b.size()+1
    std::vector<double> k;       // per-segment conductivity, same size as a
    double gamma_minus = 0.0;    // initial level as x -> -inf
    double gamma_plus = 0.0;     // initial level as x -> +inf
    Profile f;                   // integrable part of the initial data
    std::function<double(double, double)> g;  // source g(x,t); null = none
    double g_lo = 0.0, g_hi = 0.0;            // x-support of g

    void validate() const {
        if (a.size() != b.size() + 1 || k.size() != a.size())
            throw domain_error("RodSpec: need one a_j, k_j per segment");
        for (size_t j = 0; j + 1 < b.size(); ++j)
            if (!(b[j] < b[j + 1])) throw domain_error("RodSpec: breakpoints must increase");
        for (double v : a)
            if (!(v > 0.0)) throw domain_error("RodSpec: a_j must be positive");
        for (double v : k)
            if (!(v > 0.0)) throw domain_error("RodSpec: k_j must be positive");
    }
    int segment_of(double x) const {
        int j = 0;
        while (j < (int)b.size() && x >= b[j]) ++j;
        return j;
    }
};

// Factorization of the ratio m_{j+1}/m_j, m_j(s) = a_j^2 s^2 - p, into a
// part analytic and nonzero for Re s < 0 (plus) and Re s > 0 (minus).
struct FactorPair {
    std::function<cd(cd)> Kp, Km;
};

inline FactorPair rational_factor_pair(const RodSpec& spec, int j, cd p) {
    if (j < 0 || j + 1 >= (int)spec.a.size())
        throw domain_error("rational_factor_pair: segment index out of range");
    double aj = spec.a[j], aj1 = spec.a[j + 1];
    cd rp = sqrt_p(p);
    return {[=](cd s) { return (aj1 * s - rp) / (aj * s - rp); },
            [=](cd s) { return (aj * s + rp) / (aj1 * s + rp); }};
}

inline double steady_limit(const RodSpec& spec) {
    spec.validate();
    if (spec.b.size() != 1) throw domain_error("steady_limit: needs exactly one interface");
    double am = spec.a[0], ap = spec.a[1], km = spec.k[0], kp = spec.k[1];
    double lam0 = kp / ap + km / am;
    return (spec.gamma_minus * ap * km + spec.gamma_plus * am * kp) / (lam0 * ap * am);
}

// Closed-form solver for a rod with a single interface at x = 0.
class TwoPartRod {
  public:
    explicit TwoPartRod(RodSpec s) : spec_(std::move(s)) {
        spec_.validate();
        if (spec_.b.size() != 1 || spec_.b[0] != 0.0)
            throw domain_error("TwoPartRod: needs exactly one interface at x = 0");
        am_ = spec_.a[0]; ap_ = spec_.a[1];
        km_ = spec_.k[0]; kp_ = spec_.k[1];
        lam0_ = kp_ / ap_ + km_ / am_;
        lam1_ = (kp_ / ap_ - km_ / am_) / lam0_;
        lamp_ = kp_ / (ap_ * lam0_);
        lamm_ = km_ / (am_ * lam0_);
        gamma_ = spec_.gamma_plus - spec_.gamma_minus;
    }

    const RodSpec& spec() const { return spec_; }
    double lam0() const { return lam0_; }
    double lam1() const { return lam1_; }
    double lam_plus() const { return lamp_; }
    double lam_minus() const { return lamm_; }

    // deviation from the two asymptotic levels
    double u(double x, double t) const {
        double v = homogeneous_part(x, t, spec_.f);
        if (spec_.g) v += source_part(x, t, false);
        return v;
    }
    double ux(double x, double t) const {
        double v = homogeneous_part_dx(x, t, spec_.f);
        if (spec_.g) v += source_part(x, t, true);
        return v;
    }
    // total temperature including the levels
    double u_total(double x, double t) const {
        return u(x, t) + (x < 0.0 ? spec_.gamma_minus : spec_.gamma_plus);
    }

    // --- Laplace-domain pieces (sources ignored; used for verification) ---

    cd H_plus(cd s, cd) const {  // int_{-inf}^0 e^{-sx} f dx
        if (spec_.f.empty()) return 0.0;
        double lo = spec_.f.lo, hi = std::min(0.0, spec_.f.hi);
        if (hi <= lo) return 0.0;
        return integrate_adaptive([&](double x) { return std::exp(-s * x) * spec_.f.f(x); },
                                  lo, hi, 1e-12);
    }
    cd H_minus(cd s, cd) const {  // int_0^inf e^{-sx} f dx
        if (spec_.f.empty()) return 0.0;
        double lo = std::max(0.0, spec_.f.lo), hi = spec_.f.hi;
        if (hi <= lo) return 0.0;
        return integrate_adaptive([&](double x) { return std::exp(-s * x) * spec_.f.f(x); },
                                  lo, hi, 1e-12);
    }
    cd h_plus(cd p) const { return H_plus(-sqrt_p(p) / am_, p); }
    cd h_minus(cd p) const { return H_minus(sqrt_p(p) / ap_, p); }

    // interface constants
    void betas(cd p, cd& beta0, cd& beta1) const {
        cd rp = sqrt_p(p), hp = h_plus(p), hm = h_minus(p);
        double den = ap_ * km_ + am_ * kp_;
        beta0 = ((am_ * am_ - ap_ * ap_) * (ap_ * ap_ * km_ * hp + am_ * am_ * kp_ * hm) /
                     (ap_ * am_ * rp) +
                 gamma_ * (ap_ * ap_ * ap_ * km_ + am_ * am_ * am_ * kp_) / p) / den;
        beta1 = (am_ * am_ * kp_ - ap_ * ap_ * km_) / den *
                ((am_ * hm - ap_ * hp) / (ap_ * am_) + gamma_ / rp);
    }

    // half-line transforms of the Laplace-domain solution
    cd U_plus(cd s, cd p) const {
        cd rp = sqrt_p(p), hp = h_plus(p), hm = h_minus(p), b0, b1;
        betas(p, b0, b1);
        cd A0 = (b0 * rp + ap_ * b1) / (rp * (ap_ + am_));
        cd inner = H_plus(s, p) + am_ * hp * (s * ap_ - rp) / (rp * (ap_ + am_));
        return (-ap_ * hm / (rp * (ap_ + am_)) - A0 - inner / (s * am_ + rp)) / (s * am_ - rp);
    }
    cd U_minus(cd s, cd p) const {
        cd rp = sqrt_p(p), hp = h_plus(p), hm = h_minus(p), b0, b1;
        betas(p, b0, b1);
        cd A1 = (b0 * rp - am_ * b1) / (rp * (ap_ + am_));
        cd inner = H_minus(s, p) - ap_ * hm * (s * am_ + rp) / (rp * (ap_ + am_));
        return (am_ * hp / (rp * (ap_ + am_)) - A1 - inner / (s * ap_ - rp)) / (s * ap_ + rp);
    }

    // Laplace-domain solution on either side of the interface
    cd u_hat(double x, cd p) const {
        cd rp = sqrt_p(p), hp = h_plus(p), hm = h_minus(p);
        auto conv = [&](double aa, double lo, double hi) {
            if (spec_.f.empty()) return cd(0.0);
            lo = std::max(lo, spec_.f.lo); hi = std::min(hi, spec_.f.hi);
            if (hi <= lo) return cd(0.0);
            auto piece = [&](double l, double h) {
                if (h <= l) return cd(0.0);
                return integrate_adaptive(
                    [&](double xi) { return std::exp(-rp * std::abs(x - xi) / aa) * spec_.f.f(xi); },
                    l, h, 1e-12);
            };
            return (piece(lo, std::min(hi, std::max(lo, x))) +
                    piece(std::max(lo, std::min(hi, x)), hi)) / (2.0 * aa * rp);
        };
        if (x >= 0.0) {
            cd Cp = lam1_ * hm / (2.0 * ap_ * rp) + lamm_ * hp / (am_ * rp) -
                    km_ * gamma_ / (lam0_ * am_ * p);
            return Cp * std::exp(-rp * x / ap_) + conv(ap_, 0.0, 1e300);
        }
        cd Cm = -lam1_ * hp / (2.0 * am_ * rp) + lamp_ * hm / (ap_ * rp) +
                kp_ * gamma_ / (lam0_ * ap_ * p);
        return Cm * std::exp(rp * x / am_) + conv(am_, -1e300, 0.0);
    }

    // homogeneous evolution applied to an arbitrary initial profile
    double propagate(double x, double t, const Profile& h) const {
        return homogeneous_part_levels_off(x, t, h);
    }

  private:
    static double gauss_w(double z, double four_t) { return std::exp(-z * z / four_t); }

    // erfc terms + initial-profile convolution; levels' erfc included
    double homogeneous_part(double x, double t, const Profile& f) const {
        double v;
        if (x < 0.0)
            v = kp_ * gamma_ / (lam0_ * ap_) * std::erfc(-x / (2.0 * std::sqrt(t) * am_));
        else
            v = -km_ * gamma_ / (lam0_ * am_) * std::erfc(x / (2.0 * std::sqrt(t) * ap_));
        return v + homogeneous_part_levels_off(x, t, f);
    }

    double homogeneous_part_levels_off(double x, double t, const Profile& f) const {
        if (f.empty()) return 0.0;
        const double ft = 4.0 * t, spt = std::sqrt(pi * t);
        auto I = [&](double lo, double hi, auto&& fn) {
            lo = std::max(lo, f.lo); hi = std::min(hi, f.hi);
            if (hi <= lo) return 0.0;
            return integrate_adaptive([&](double xi) { return cd(fn(xi) * f.f(xi), 0.0); },
                                      lo, hi, 1e-11).real();
        };
        if (x < 0.0) {
            double cross = lamp_ / (ap_ * spt) *
                I(0.0, 1e300, [&](double xi) { return gauss_w(x / am_ - xi / ap_, ft); });
            double same = 1.0 / (2.0 * am_ * spt) *
                I(-1e300, 0.0, [&](double xi) {
                    return -lam1_ * gauss_w(x + xi, ft * am_ * am_) +
                           gauss_w(x - xi, ft * am_ * am_);
                });
            return cross + same;
        }
        double cross = lamm_ / (am_ * spt) *
            I(-1e300, 0.0, [&](double xi) { return gauss_w(x / ap_ - xi / am_, ft); });
        double same = 1.0 / (2.0 * ap_ * spt) *
            I(0.0, 1e300, [&](double xi) {
                return lam1_ * gauss_w(x + xi, ft * ap_ * ap_) +
                       gauss_w(x - xi, ft * ap_ * ap_);
            });
        return cross + same;
    }

    double homogeneous_part_dx(double x, double t, const Profile& f) const {
        double v;
        const double spt = std::sqrt(pi * t), ft = 4.0 * t;
        if (x < 0.0)
            v = kp_ * gamma_ / (lam0_ * ap_) / (am_ * spt) * gauss_w(x, ft * am_ * am_);
        else
            v = km_ * gamma_ / (lam0_ * am_) / (ap_ * spt) * gauss_w(x, ft * ap_ * ap_);
        if (f.empty()) return v;
        auto I = [&](double lo, double hi, auto&& fn) {
            lo = std::max(lo, f.lo); hi = std::min(hi, f.hi);
            if (hi <= lo) return 0.0;
            return integrate_adaptive([&](double xi) { return cd(fn(xi) * f.f(xi), 0.0); },
                                      lo, hi, 1e-11).real();
        };
        if (x < 0.0) {
            v += lamp_ / (ap_ * spt) *
                 I(0.0, 1e300, [&](double xi) {
                     double z = x / am_ - xi / ap_;
                     return -z / (2.0 * t * am_) * gauss_w(z, ft);
                 });
            v += 1.0 / (2.0 * am_ * spt) *
                 I(-1e300, 0.0, [&](double xi) {
                     double c = 2.0 * am_ * am_ * t;
                     return lam1_ * (x + xi) / c * gauss_w(x + xi, ft * am_ * am_) -
                            (x - xi) / c * gauss_w(x - xi, ft * am_ * am_);
                 });
            return v;
        }
        v += lamm_ / (am_ * spt) *
             I(-1e300, 0.0, [&](double xi) {
                 double z = x / ap_ - xi / am_;
                 return -z / (2.0 * t * ap_) * gauss_w(z, ft);
             });
        v += 1.0 / (2.0 * ap_ * spt) *
             I(0.0, 1e300, [&](double xi) {
                 double c = 2.0 * ap_ * ap_ * t;
                 return -lam1_ * (x + xi) / c * gauss_w(x + xi, ft * ap_ * ap_) -
                        (x - xi) / c * gauss_w(x - xi, ft * ap_ * ap_);
             });
        return v;
    }

    // Duhamel: u_g(x,t) = int_0^t S(t-tau) g(.,tau) dtau, tau = t - sigma^2
    double source_part(double x, double t, bool deriv) const {
        auto integrand = [&](double sigma) {
            double dt = sigma * sigma;
            Profile h{[&](double xi) { return spec_.g(xi, t - dt); }, spec_.g_lo, spec_.g_hi};
            double v = deriv ? homogeneous_part_dx(x, dt, h)
                             : homogeneous_part_levels_off(x, dt, h);
            return cd(2.0 * sigma * v, 0.0);
        };
        return integrate_panels(integrand, linspace_breaks(0.0, std::sqrt(t), 6), 8).real();
    }

    RodSpec spec_;
    double am_, ap_, km_, kp_, lam0_, lam1_, lamp_, lamm_, gamma_;
};

// General rod with m >= 1 interfaces: Laplace-domain fundamental-function
// assembly plus fixed-Talbot inversion.
class GeneralRod {
  public:
    explicit GeneralRod(RodSpec s) : spec_(std::move(s)) {
        spec_.validate();
        if (spec_.b.empty()) throw domain_error("GeneralRod: needs at least one interface");
        m_ = (int)spec_.b.size();
    }

    const RodSpec& spec() const { return spec_; }

    cd u_hat(double x, cd p) const { return u_hat_full(x, p, false, spec_.f, true); }

    double u(double x, double t) const { return eval(x, t, false); }
    double ux(double x, double t) const { return eval(x, t, true); }
    double u_total(double x, double t) const {
        return u(x, t) + (x < spec_.b.front() ? spec_.gamma_minus : spec_.gamma_plus);
    }

  private:
    // segment endpoints (semi-infinite ends handled by the callers)
    double seg_lo(int j) const { return j == 0 ? -1e300 : spec_.b[j - 1]; }
    double seg_hi(int j) const { return j == m_ ? 1e300 : spec_.b[j]; }
    int n_unknowns(int j) const { return (j == 0 || j == m_) ? 1 : 2; }
    int offset(int j) const { return j == 0 ? 0 : 1 + 2 * (j - 1); }

    // basis functions, normalized to magnitude <= 1 on their segment
    cd basis(int j, int which, double x, cd p, bool deriv) const {
        cd q = sqrt_p(p) / spec_.a[j];
        if (j == 0) {
            cd v = std::exp(q * (x - spec_.b[0]));
            return deriv ? q * v : v;
        }
        if (j == m_) {
            cd v = std::exp(-q * (x - spec_.b[m_ - 1]));
            return deriv ? -q * v : v;
        }
        if (which == 0) {
            cd v = std::exp(-q * (x - spec_.b[j - 1]));
            return deriv ? -q * v : v;
        }
        cd v = std::exp(-q * (spec_.b[j] - x));
        return deriv ? q * v : v;
    }

    cd particular(int j, double x, cd p, bool deriv, const Profile& f) const {
        if (f.empty()) return 0.0;
        double lo = std::max(seg_lo(j), f.lo), hi = std::min(seg_hi(j), f.hi);
        if (hi <= lo) return 0.0;
        cd rp = sqrt_p(p);
        cd q = rp / spec_.a[j];
        auto piece = [&](double l, double h) {
            if (h <= l) return cd(0.0);
            return integrate_adaptive(
                [&](double xi) {
                    cd e = std::exp(-q * std::abs(x - xi)) * f.f(xi);
                    if (deriv) e *= -q * (x >= xi ? 1.0 : -1.0);
                    return e;
                },
                l, h, 1e-12);
        };
        double xm = std::clamp(x, lo, hi);
        return (piece(lo, xm) + piece(xm, hi)) / (2.0 * spec_.a[j] * rp);
    }

    cd hom_value(int j, double x, cd p, const Eigen::VectorXcd& c) const {
        cd v = c[offset(j)] * basis(j, 0, x, p, false);
        if (n_unknowns(j) == 2) v += c[offset(j) + 1] * basis(j, 1, x, p, false);
        return v;
    }
    cd hom_deriv(int j, double x, cd p, const Eigen::VectorXcd& c) const {
        cd v = c[offset(j)] * basis(j, 0, x, p, true);
        if (n_unknowns(j) == 2) v += c[offset(j) + 1] * basis(j, 1, x, p, true);
        return v;
    }

    Eigen::VectorXcd solve_coeffs(cd p, const Profile& f, bool with_jump) const {
        int n = 2 * m_;
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
        double gamma = spec_.gamma_plus - spec_.gamma_minus;
        for (int j = 0; j < m_; ++j) {
            double bj = spec_.b[j];
            int rl = 2 * j;
            for (int w = 0; w < n_unknowns(j); ++w) {
                A(rl, offset(j) + w) += basis(j, w, bj, p, false);
                A(rl + 1, offset(j) + w) += spec_.k[j] * basis(j, w, bj, p, true);
            }
            for (int w = 0; w < n_unknowns(j + 1); ++w) {
                A(rl, offset(j + 1) + w) -= basis(j + 1, w, bj, p, false);
                A(rl + 1, offset(j + 1) + w) -= spec_.k[j + 1] * basis(j + 1, w, bj, p, true);
            }
            rhs[rl] = (j == 0 && with_jump ? gamma / p : cd(0.0)) -
                      (particular(j, bj, p, false, f) - particular(j + 1, bj, p, false, f));
            rhs[rl + 1] = -(spec_.k[j] * particular(j, bj, p, true, f) -
                            spec_.k[j + 1] * particular(j + 1, bj, p, true, f));
        }
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
        if (!lu.isInvertible())
            throw numeric_error("GeneralRod: singular interface matrix at p = (" +
                                std::to_string(p.real()) + "," + std::to_string(p.imag()) + ")");
        return lu.solve(rhs);
    }

    cd u_hat_full(double x, cd p, bool deriv, const Profile& f, bool with_jump) const {
        Eigen::VectorXcd c = solve_coeffs(p, f, with_jump);
        int seg = spec_.segment_of(x);
        cd v = deriv ? hom_deriv(seg, x, p, c) : hom_value(seg, x, p, c);
        return v + particular(seg, x, p, deriv, f);
    }

    // time-domain value; sources handled by Duhamel superposition
    double eval(double x, double t, bool deriv) const {
        double v = talbot_invert_checked(
            [&](cd p) { return u_hat_full(x, p, deriv, spec_.f, true); }, t, 1e-9).real();
        if (spec_.g) {
            auto integrand = [&](double sigma) {
                double dt = sigma * sigma;
                Profile h{[&](double xi) { return spec_.g(xi, t - dt); }, spec_.g_lo, spec_.g_hi};
                double w = talbot_invert_checked(
                    [&](cd p) { return u_hat_full(x, p, deriv, h, false); }, dt, 1e-8).real();
                return cd(2.0 * sigma * w, 0.0);
            };
            v += integrate_panels(integrand, linspace_breaks(0.0, std::sqrt(t), 4), 8).real();
        }
        return v;
    }

    RodSpec spec_;
    int m_;
};

}  // namespace mwh
