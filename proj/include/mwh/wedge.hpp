#pragma once

// Mixed Dirichlet/Neumann problem for the Laplacian in a wedge of angle
// alpha: temperature prescribed on 0 < r < a_j of each face, flux prescribed
// beyond.  Solved by a Mellin-domain 2x2 matrix factorization whose entries
// are Beta x Gauss-hypergeometric closed forms, followed by a vector
// boundary-value problem solved with Cauchy integrals and Liouville's
// theorem.  The temperature at infinity T_inf comes out of the solvability
// condition.

#include <array>
#include <functional>
#include <vector>

#include "mwh/contour.hpp"
#include "mwh/numerics.hpp"
#include "mwh/special.hpp"

namespace mwh {

using Mat2 = std::array<std::array<cd, 2>, 2>;
using Vec2 = std::array<cd, 2>;

inline Vec2 mat_vec(const Mat2& m, const Vec2& v) {
    return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}
inline Mat2 mat_inv(const Mat2& m) {
    cd det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (std::abs(det) == 0.0) throw numeric_error("mat_inv: singular 2x2 matrix");
    return {{{m[1][1] / det, -m[0][1] / det}, {-m[1][0] / det, m[0][0] / det}}};
}

struct WedgeSpec {
    double alpha = pi / 2;  // wedge angle
    double a1 = 1.0, a2 = 2.0;  // Dirichlet segment lengths, lambda = a2/a1 >= 1
    double T1 = 0.0, T2 = 1.0;  // constant temperature parts on the two faces
    std::function<double(double)> T1s, T2s;    // variable temperature parts (may be null)
    std::function<double(double)> f1p, f2p;    // prescribed fluxes for r > a_j (may be null)
    double kappa1 = 1e9, kappa2 = 1e9;  // decay exponents of the flux data
    double sigma = 0.0;                 // contour abscissa; 0 = automatic (beta/2)

    double lambda() const { return a2 / a1; }
    double beta() const { return std::min({pi / alpha, kappa1, kappa2}); }
    void validate() const {
        if (!(alpha > 0.0 && alpha < 2.0 * pi)) throw domain_error("WedgeSpec: bad angle");
        if (!(a1 > 0.0 && a2 >= a1)) throw domain_error("WedgeSpec: need 0 < a1 <= a2");
    }
};

// direct series form of the factorization entries (one-parametric family,
// parameter mu1; converges for lambda > 1)
inline cd chi_series(cd s, int mu1, double lambda, double alpha, int terms = 400,
                     bool second = false) {
    cd x = alpha * s / pi;
    double q = std::pow(lambda, -pi / alpha), mu = mu1;
    cd sum = 0.0;
    if (!second) {  // chi_{1j}^-
        for (int k = 0; k < terms; ++k) {
            cd t = std::exp(clgamma(x + cd(k)) + clgamma(cd(k + mu + 0.5)) -
                            clgamma(x + cd(k + mu + 0.5)) - clgamma(cd(k + 1.0)));
            sum += t * std::pow(-1.0, k) * std::pow(q, k);
        }
    } else {  // chi_{2j}^+
        for (int k = 0; k < terms; ++k) {
            cd t = std::exp(clgamma(-x + cd(k + 1.0)) + clgamma(cd(k - mu + 0.5)) -
                            clgamma(-x + cd(k - mu + 1.5)) - clgamma(cd(k + 1.0)));
            sum += t * std::pow(-1.0, k - mu1) *
                   std::pow(lambda, (mu - k - 0.5) * pi / alpha);
        }
    }
    return sum;
}

// Matrix factor X^+ = G X^- with hypergeometric entries.  All series are
// evaluated after a Pfaff transformation, which keeps the argument in
// [0, 1/2] and the series parameters bounded (works down to lambda = 1).
class WedgeFactor {
  public:
    WedgeFactor(double alpha, double lambda, bool swap_cols = false)
        : alpha_(alpha), lambda_(lambda), swap_(swap_cols) {
        if (!(lambda >= 1.0)) throw domain_error("WedgeFactor: needs lambda >= 1");
        z_ = -std::pow(lambda, -pi / alpha);
        zt_ = z_ / (z_ - 1.0);
        w_ = std::pow(lambda, -pi / (2.0 * alpha));
    }

    double alpha() const { return alpha_; }
    double lambda() const { return lambda_; }

    // analytic in D^- (meromorphic in D^+)
    cd chi11m(cd s) const { return chi1m_entry(s, 0.5); }
    cd chi12m(cd s) const { return chi1m_entry(s, 1.5); }
    // analytic in D^+ (meromorphic in D^-)
    cd chi21p(cd s) const {
        cd x = alpha_ * s / pi;
        return w_ * cbeta(1.0 - x, 0.5) * std::pow(1.0 - z_, -0.5) *
               gauss2f1(0.5, 0.5, 1.5 - x, zt_);
    }
    cd chi22p(cd s) const {
        cd x = alpha_ * s / pi;
        return -1.0 / w_ * cbeta(1.0 - x, -0.5) * std::pow(1.0 - z_, 0.5) *
               gauss2f1(-0.5, -0.5, 0.5 - x, zt_);
    }
    // sin(alpha s) * chi_{1j}^-(s): pole-free form used near Re s <= 0
    cd sin_chi1m(cd s, int j) const {
        cd x = alpha_ * s / pi;
        double c = (j == 1) ? 0.5 : 1.5;
        return pi * cgamma(cd(c)) * std::exp(-clgamma(1.0 - x) - clgamma(x + c)) *
               std::pow(1.0 - z_, -c) * gauss2f1(c, c, x + c, zt_);
    }
    // coupled entries
    cd chi1jp(cd s, int j) const {
        cd chi2 = (j == 1) ? chi21p(s) : chi22p(s);
        return (-sin_chi1m(s, j) + std::pow(lambda_, s) * chi2) * sec_as(s);
    }
    cd chi2jm(cd s, int j) const {
        cd chi2 = (j == 1) ? chi21p(s) : chi22p(s);
        cd chi1 = (j == 1) ? chi11m(s) : chi12m(s);
        return tan_as(s) * chi2 - std::pow(lambda_, -s) * sec_as(s) * chi1;
    }

    Mat2 Xplus(cd s) const {
        Mat2 m{{{chi1jp(s, 1), chi1jp(s, 2)}, {chi21p(s), chi22p(s)}}};
        return maybe_swap(m);
    }
    Mat2 Xminus(cd s) const {
        Mat2 m{{{chi11m(s), chi12m(s)}, {chi2jm(s, 1), chi2jm(s, 2)}}};
        return maybe_swap(m);
    }
    Mat2 Xplus0() const {  // X^+(0); chi_{1j}^+(0) = -pi + chi_{2j}^+(0)
        cd c21 = chi21p(cd(0.0)), c22 = chi22p(cd(0.0));
        Mat2 m{{{-pi + c21, -pi + c22}, {c21, c22}}};
        return maybe_swap(m);
    }
    Mat2 G(cd s) const {
        cd t = tan_as(s), sec = sec_as(s);
        cd cotv = (std::abs(t) < 1e-300) ? cd(1e300) : 1.0 / t;
        cd csc = sec / t;  // csc = 1/sin = sec/tan
        return {{{cotv, std::pow(lambda_, s) * csc},
                 {std::pow(lambda_, -s) * csc, cotv}}};
    }

    // stable trig helpers for complex theta = alpha s
    cd sec_as(cd s) const {
        cd th = alpha_ * s;
        if (th.imag() > 0.0) {
            cd e = std::exp(cd(0, 1) * th);
            return 2.0 * e / (e * e + 1.0);
        }
        cd e = std::exp(-cd(0, 1) * th);
        return 2.0 * e / (e * e + 1.0);
    }
    cd tan_as(cd s) const {
        cd th = alpha_ * s;
        if (th.imag() > 0.0) {
            cd q = std::exp(2.0 * cd(0, 1) * th);
            return -cd(0, 1) * (q - 1.0) / (q + 1.0);
        }
        cd q = std::exp(-2.0 * cd(0, 1) * th);
        return cd(0, 1) * (q - 1.0) / (q + 1.0);
    }

  private:
    cd chi1m_entry(cd s, double c) const {
        cd x = alpha_ * s / pi;
        return cbeta(x, c) * std::pow(1.0 - z_, -c) * gauss2f1(c, c, x + c, zt_);
    }
    Mat2 maybe_swap(Mat2 m) const {
        if (swap_) {
            std::swap(m[0][0], m[0][1]);
            std::swap(m[1][0], m[1][1]);
        }
        return m;
    }

    double alpha_, lambda_;
    bool swap_;
    cd z_, zt_;
    double w_;
};

class WedgeSolver {
  public:
    explicit WedgeSolver(WedgeSpec sp, bool swap_cols = false)
        : spec_(std::move(sp)), fac_(spec_.alpha, spec_.lambda(), swap_cols) {
        spec_.validate();
        sigma_ = spec_.sigma > 0.0 ? spec_.sigma : 0.5 * spec_.beta();
        Xp0_ = fac_.Xplus0();
        Xp0inv_ = mat_inv(Xp0_);
        has_profiles_ = (bool)spec_.T1s || (bool)spec_.T2s;
        has_flux_ = (bool)spec_.f1p || (bool)spec_.f2p;
        if (has_profiles_ || has_flux_) build_cache();
        // solvability: temperature at infinity
        double w = std::pow(spec_.lambda(), -pi / (2.0 * spec_.alpha));
        cd po = psi2_inf_ + omega2_inf_;
        Tinf_ = 2.0 / pi * std::atan(w) * (spec_.T1 - spec_.T2) + spec_.T2 -
                2.0 / w * po.real();
        Tt_ = {cd(spec_.T1 - Tinf_), cd(spec_.T2 - Tinf_)};
    }

    const WedgeSpec& spec() const { return spec_; }
    const WedgeFactor& factor() const { return fac_; }
    double T_inf() const { return Tinf_; }
    double sigma() const { return sigma_; }
    Vec2 T_tilde() const { return Tt_; }

    // Mellin transforms of the data
    cd That(int j, cd s) const {  // transform of the variable temperature part
        auto& f = (j == 1) ? spec_.T1s : spec_.T2s;
        if (!f) return 0.0;
        double aj = (j == 1) ? spec_.a1 : spec_.a2;
        // int_0^1 T*(a rho) rho^{s-1} drho, rho = e^{-v}
        return integrate_adaptive(
            [&](double v) { return f(aj * std::exp(-v)) * std::exp(-s * v); }, 0.0, 40.0,
            1e-12);
    }
    cd Fhat_plus(int j, cd s) const {  // transform of the flux data
        auto& f = (j == 1) ? spec_.f1p : spec_.f2p;
        if (!f) return 0.0;
        double aj = (j == 1) ? spec_.a1 : spec_.a2;
        return aj * integrate_adaptive(
                        [&](double v) { return f(aj * std::exp(v)) * std::exp((s + 1.0) * v); },
                        0.0, 60.0, 1e-12);
    }

    // Cauchy integrals of the two densities, evaluated off the contour
    Vec2 Psi(cd s) const { return cache_sum(rho_psi_, s); }
    Vec2 Omega(cd s) const { return cache_sum(rho_omega_, s); }

    // the solution of the vector boundary problem
    Vec2 Phi_plus(cd s) const {
        Mat2 Xp = fac_.Xplus(s);
        Vec2 a = mat_vec(Xp0inv_, Tt_);
        Vec2 xa = mat_vec(Xp, a);
        Vec2 po = add(Psi(s), Omega(s));
        Vec2 xpo = mat_vec(Xp, po);
        return {(-Tt_[0] + xa[0]) / s - xpo[0], (-Tt_[1] + xa[1]) / s - xpo[1]};
    }
    Vec2 Phi_minus(cd s) const {
        Mat2 Xm = fac_.Xminus(s);
        Vec2 a = mat_vec(Xp0inv_, Tt_);
        Vec2 xa = mat_vec(Xm, a);
        Vec2 po = add(Psi(s), Omega(s));
        Vec2 xpo = mat_vec(Xm, po);
        return {-xa[0] + s * xpo[0], -xa[1] + s * xpo[1]};
    }

    // on-contour boundary values (principal value + half density)
    void Phi_both(cd s, Vec2& plus, Vec2& minus) const {
        Vec2 psi_pv = cache_pv(rho_psi_, s), om_pv = cache_pv(rho_omega_, s);
        Vec2 psi_d = density_psi(s), om_d = density_omega(s);
        Vec2 pp = add(add(psi_pv, om_pv), half(add(psi_d, om_d), +0.5));
        Vec2 pm = add(add(psi_pv, om_pv), half(add(psi_d, om_d), -0.5));
        Mat2 Xp = fac_.Xplus(s), Xm = fac_.Xminus(s);
        Vec2 a = mat_vec(Xp0inv_, Tt_);
        Vec2 xa = mat_vec(Xp, a), xpo = mat_vec(Xp, pp);
        plus = {(-Tt_[0] + xa[0]) / s - xpo[0], (-Tt_[1] + xa[1]) / s - xpo[1]};
        Vec2 xam = mat_vec(Xm, a), xpom = mat_vec(Xm, pm);
        minus = {-xam[0] + s * xpom[0], -xam[1] + s * xpom[1]};
    }

    // densities of Psi and Omega on the contour
    Vec2 density_psi(cd s) const {
        if (!has_profiles_) return {cd(0.0), cd(0.0)};
        return mat_vec(mat_inv(fac_.Xplus(s)), Vec2{That(1, s), That(2, s)});
    }
    Vec2 density_omega(cd s) const {
        if (!has_flux_) return {cd(0.0), cd(0.0)};
        Vec2 v = mat_vec(mat_inv(fac_.Xminus(s)), Vec2{Fhat_plus(1, s), Fhat_plus(2, s)});
        return {v[0] / s, v[1] / s};
    }

    // ---- field reconstruction ----

    // u(r, theta) = physical temperature minus T_inf
    double u(double r, double theta) const {
        if (theta < 1e-9 && r < spec_.a1) return boundary_value(r, 1);
        if (theta > spec_.alpha - 1e-9 && r < spec_.a2) return boundary_value(r, 2);
        if (r * r >= spec_.a1 * spec_.a2) return field_large(r, theta);
        return field_small(r, theta);
    }
    double u_total(double r, double theta) const { return u(r, theta) + Tinf_; }

    // flux -du/(r dtheta) on the lower face for r < a1 (edge-singular part
    // handled in closed form via the s^{-1/2} tail of Phi_1^-)
    double flux_lower(double r) const {
        double x = r / spec_.a1;
        if (!(x > 0.0 && x < 1.0)) throw domain_error("flux_lower: needs 0 < r < a1");
        double sig = sigma_ + 0.45 * (pi / spec_.alpha - sigma_);
        // far-field constant of Phi_1^-(s) ~ c_as s^{-1/2} by Richardson
        double R = 300.0;
        cd cR = Phi_minus(cd(sig + R, 0.0))[0] * std::sqrt(cd(sig + R));
        cd c2R = Phi_minus(cd(sig + 2.0 * R, 0.0))[0] * std::sqrt(cd(sig + 2.0 * R));
        cd cas = 2.0 * c2R - cR;
        double lx = std::log(1.0 / x);
        cd closed = cas * std::pow(lx, -0.5) / std::sqrt(pi) / x;
        auto rem = [&](double t) {
            cd s(sig, t);
            cd v = (Phi_minus(s)[0] - cas * std::pow(s, -0.5)) * std::pow(x, -s - 1.0);
            return v;
        };
        double T = 400.0;
        int panels = std::max(64, (int)(T * std::max(lx, 0.3) / 4.0));
        cd corr = integrate_panels(rem, linspace_breaks(-T, T, std::min(panels, 4096)), 16) *
                  cd(0, 1) / (cd(0, 2) * pi);
        return (closed + corr).real() / spec_.a1;
    }

  private:
    struct Cache {
        std::vector<cd> node;  // contour points sigma + i tau
        std::vector<cd> w;     // quadrature weights including i d tau
        std::vector<Vec2> rho;
        bool active = false;
    };

    static Vec2 add(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
    static Vec2 half(const Vec2& a, double c) { return {c * a[0], c * a[1]}; }

    void build_cache() {
        const double T = 300.0;
        const int panels = 600, order = 12;
        auto& gr = gauss_rule(order);
        auto breaks = linspace_breaks(-T, T, panels);
        auto fill = [&](Cache& c, auto&& dens) {
            c.active = true;
            for (int p = 0; p < panels; ++p) {
                double a = breaks[p], b = breaks[p + 1];
                double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
                for (int q = 0; q < order; ++q) {
                    double tau = mid + hw * gr.x[q];
                    cd s(sigma_, tau);
                    c.node.push_back(s);
                    c.w.push_back(cd(0, 1) * hw * gr.w[q]);
                    c.rho.push_back(dens(s));
                }
            }
        };
        if (has_profiles_) fill(rho_psi_, [&](cd s) { return density_psi(s); });
        if (has_flux_) fill(rho_omega_, [&](cd s) { return density_omega(s); });
        // moments for the solvability condition: Psi2^o = -(1/2 pi i) int rho
        cd itp = cd(0, 2) * pi;
        psi2_inf_ = omega2_inf_ = 0.0;
        for (size_t i = 0; i < rho_psi_.node.size(); ++i)
            psi2_inf_ -= rho_psi_.w[i] * rho_psi_.rho[i][1] / itp;
        for (size_t i = 0; i < rho_omega_.node.size(); ++i)
            omega2_inf_ -= rho_omega_.w[i] * rho_omega_.rho[i][1] / itp;
    }

    Vec2 cache_sum(const Cache& c, cd s) const {
        if (!c.active) return {cd(0.0), cd(0.0)};
        cd itp = cd(0, 2) * pi;
        Vec2 v{cd(0.0), cd(0.0)};
        for (size_t i = 0; i < c.node.size(); ++i) {
            cd k = c.w[i] / (c.node[i] - s) / itp;
            v[0] += k * c.rho[i][0];
            v[1] += k * c.rho[i][1];
        }
        return v;
    }
    // principal value on the contour itself (s = sigma + i tau0)
    Vec2 cache_pv(const Cache& c, cd s) const {
        if (!c.active) return {cd(0.0), cd(0.0)};
        cd itp = cd(0, 2) * pi;
        Vec2 rs = (&c == &rho_psi_) ? density_psi(s) : density_omega(s);
        Vec2 v{cd(0.0), cd(0.0)};
        for (size_t i = 0; i < c.node.size(); ++i) {
            cd k = c.w[i] / (c.node[i] - s) / itp;
            v[0] += k * (c.rho[i][0] - rs[0]);
            v[1] += k * (c.rho[i][1] - rs[1]);
        }
        // + rho(s) * (1/2 pi i) int d sigma'/(sigma' - s) over the segment
        cd z1 = c.node.back() - s, z2 = c.node.front() - s;
        cd lg = (std::log(std::abs(z1)) - std::log(std::abs(z2))) +
                cd(0, 1) * (std::arg(z1) - std::arg(z2));
        v[0] += rs[0] * lg / itp;
        v[1] += rs[1] * lg / itp;
        return v;
    }

    double boundary_value(double r, int j) const {
        double aj = (j == 1) ? spec_.a1 : spec_.a2;
        auto& prof = (j == 1) ? spec_.T1s : spec_.T2s;
        double base = Tt_[j - 1].real() + (prof ? prof(r) : 0.0);
        // correction: inverse Mellin of Phi_j^+ (supported on r > a_j) on a
        // deformed contour Re s = -M where (r/a_j)^{-s} is exponentially small
        double lx = std::log(aj / r);
        double M = std::min(30.0, 18.0 / std::max(lx, 0.05));
        M = (pi / spec_.alpha) * (std::floor(M * spec_.alpha / pi) + 0.25);
        double T = 120.0;
        auto f = [&](double t) {
            cd s(-M, t);
            return Phi_plus(s)[j - 1] * std::pow(r / aj, -s);
        };
        cd corr = integrate_panels(f, linspace_breaks(-T, T, 512), 16) * cd(0, 1) /
                  (cd(0, 2) * pi);
        return base + corr.real();
    }

    double field_large(double r, double theta) const {
        double sig = sigma_ + 0.45 * (std::min(pi / spec_.alpha,
                                               std::min(spec_.kappa1, spec_.kappa2)) -
                                      sigma_);
        double d = std::max(1e-3, std::min(theta, spec_.alpha - theta));
        double T = std::min(3000.0, std::max(80.0, 50.0 / d));
        auto f = [&](double t) {
            cd s(sig, t);
            Vec2 pm = Phi_minus(s);
            cd t1 = (pm[0] + Fhat_plus(1, s)) * std::cos((spec_.alpha - theta) * s) *
                    std::pow(r / spec_.a1, -s);
            cd t2 = (pm[1] + Fhat_plus(2, s)) * std::cos(theta * s) *
                    std::pow(r / spec_.a2, -s);
            return -(t1 + t2) / (s * std::sin(spec_.alpha * s));
        };
        int panels = std::max(128, (int)(T / 2.0));
        cd v = integrate_panels(f, linspace_breaks(-T, T, std::min(panels, 4096)), 16) *
               cd(0, 1) / (cd(0, 2) * pi);
        return v.real();
    }

    double field_small(double r, double theta) const {
        double sig = 0.5 * sigma_;
        double d = std::max(1e-3, std::min(theta, spec_.alpha - theta));
        double T = std::min(3000.0, std::max(80.0, 50.0 / d));
        auto f = [&](double t) {
            cd s(sig, t);
            Vec2 pp = Phi_plus(s);
            cd F1m = Tt_[0] / s + That(1, s);
            cd F2m = Tt_[1] / s + That(2, s);
            cd t1 = (pp[0] + F1m) * std::sin((spec_.alpha - theta) * s) *
                    std::pow(r / spec_.a1, -s);
            cd t2 = (pp[1] + F2m) * std::sin(theta * s) * std::pow(r / spec_.a2, -s);
            return (t1 + t2) / std::sin(spec_.alpha * s);
        };
        int panels = std::max(128, (int)(T / 2.0));
        cd v = integrate_panels(f, linspace_breaks(-T, T, std::min(panels, 4096)), 16) *
               cd(0, 1) / (cd(0, 2) * pi);
        return v.real();
    }

    WedgeSpec spec_;
    WedgeFactor fac_;
    double sigma_;
    Mat2 Xp0_, Xp0inv_;
    bool has_profiles_ = false, has_flux_ = false;
    Cache rho_psi_, rho_omega_;
    cd psi2_inf_{0.0}, omega2_inf_{0.0};
    double Tinf_ = 0.0;
    Vec2 Tt_{cd(0.0), cd(0.0)};
};

}  // namespace mwh
