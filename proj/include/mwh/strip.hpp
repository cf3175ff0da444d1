#pragma once

// Neumann problem for the Helmholtz equation in a strip with an internal
// slit.  Fourier transform in x leads to a 2x2 problem whose meromorphic
// entry g(alpha) has non-periodic zeros; it is solved by a scalar
// factorization g = K+/K-, rational pole-removal functions Omega+-, and a
// truncated linear system for their residue coefficients.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "mwh/contour.hpp"
#include "mwh/numerics.hpp"
#include "mwh/special.hpp"

namespace mwh {

struct StripSpec {
    double b_plus = 1.0, b_minus = 1.0;  // half-widths (slit length = 1)
    cd k{0.0, 2.0};                      // wavenumber, Im k > 0
    std::function<cd(double)> f;         // crack load on (0,1)
    int N = 32;                          // truncation order of the zero lattice

    double B() const { return b_plus + b_minus; }
    void validate() const {
        if (!(k.imag() > 0.0)) throw domain_error("StripSpec: requires Im k > 0");
        if (!(b_plus > 0.0 && b_minus > 0.0)) throw domain_error("StripSpec: b must be > 0");
        if (N < 1) throw domain_error("StripSpec: N >= 1");
    }
};

// log of sinh(g b+) sinh(g b-) / sinh(g B); the expression is even in gamma,
// so the root may be flipped into Re gamma >= 0 where the exponentials decay
inline cd strip_L(cd alpha, const StripSpec& sp) {
    cd g = gamma_branch(alpha, sp.k);
    if (g.real() < 0.0) g = -g;
    return std::log(1.0 - std::exp(-2.0 * g * sp.b_plus)) +
           std::log(1.0 - std::exp(-2.0 * g * sp.b_minus)) -
           std::log(1.0 - std::exp(-2.0 * g * sp.B())) - std::log(2.0);
}
inline cd strip_g(cd alpha, const StripSpec& sp) {
    cd g = gamma_branch(alpha, sp.k);
    if (g.real() < 0.0) g = -g;  // g(alpha) is even in gamma
    double x = std::abs(g) * sp.B();
    if (x < 1e-4)  // g ~ gamma^2 b+ b- / B near the branch point
        return g * g * sp.b_plus * sp.b_minus / sp.B();
    if (x < 300.0)  // direct ratio, no overflow and no log of a vanishing sinh
        return g * std::sinh(g * sp.b_plus) * std::sinh(g * sp.b_minus) /
               std::sinh(g * sp.B());
    return g * std::exp(strip_L(alpha, sp));
}

// zeros of g in the upper half-plane with the closed-form derivative g'
struct StripZero {
    cd z;        // location, Im z > 0
    cd gprime;   // g'(z)
    int source;  // 0: z=k, 1: b+ lattice, 2: b- lattice, 3: merged
};

inline std::vector<StripZero> zero_lattice(const StripSpec& sp, int N) {
    sp.validate();
    std::vector<StripZero> out;
    // z = k: g ~ (alpha^2 - k^2) b+ b- / B
    out.push_back({sp.k, 2.0 * sp.k * sp.b_plus * sp.b_minus / sp.B(), 0});
    auto lattice_zero = [&](int m, double b) {
        cd z = std::sqrt(sp.k * sp.k - cd(pi * pi * m * m / (b * b)));
        if (z.imag() < 0.0) z = -z;
        return z;
    };
    struct Cand { cd z; int src; int m; };
    std::vector<Cand> cands;
    for (int m = 1; m <= N; ++m) {
        cands.push_back({lattice_zero(m, sp.b_plus), 1, m});
        cands.push_back({lattice_zero(m, sp.b_minus), 2, m});
    }
    std::sort(cands.begin(), cands.end(),
              [](const Cand& a, const Cand& b) { return a.z.imag() < b.z.imag(); });
    auto near_int = [](double v) { return std::abs(v - std::lround(v)) < 1e-9; };
    for (size_t i = 0; i < cands.size(); ++i) {
        if (i + 1 < cands.size() &&
            std::abs(cands[i].z - cands[i + 1].z) < 1e-10 * (1.0 + std::abs(cands[i].z)))
            ++i;  // drop the duplicate of a zero both lattices produced
        cd z = cands[i].z;
        cd g = gamma_branch(z, sp.k);
        // a zero is shared whenever gamma lies on both lattices, even if the
        // partner index exceeds the truncation; then sinh(g B) vanishes too
        double y = (cands[i].src == 1) ? pi * cands[i].m / sp.b_plus
                                       : pi * cands[i].m / sp.b_minus;
        bool merged = near_int(y * sp.b_plus / pi) && near_int(y * sp.b_minus / pi);
        cd gp;
        int src;
        if (merged) {
            gp = z * sp.b_plus * sp.b_minus / sp.B() * std::cosh(g * sp.b_plus) *
                 std::cosh(g * sp.b_minus) / std::cosh(g * sp.B());
            src = 3;
        } else if (cands[i].src == 1) {
            gp = z * sp.b_plus * std::cosh(g * sp.b_plus) * std::sinh(g * sp.b_minus) /
                 std::sinh(g * sp.B());
            src = 1;
        } else {
            gp = z * sp.b_minus * std::cosh(g * sp.b_minus) * std::sinh(g * sp.b_plus) /
                 std::sinh(g * sp.B());
            src = 2;
        }
        out.push_back({z, gp, src});
    }
    return out;
}

// scalar factorization g = K+/K- with K+- = (alpha +- k)^{+-1/2} K0^{+-}.
// The Cauchy exponent of K0 is built once on a fixed grid; the density L
// reaches its limit -ln 2 exponentially fast, so beyond the grid the tail
// is handled by the closed-form transform of a constant.
class StripFactor {
  public:
    explicit StripFactor(StripSpec sp) : spec_(std::move(sp)) {
        spec_.validate();
        double bmin = std::min(spec_.b_plus, spec_.b_minus);
        RL_ = 30.0 / bmin + std::abs(spec_.k) + 10.0;
        int panels = (int)std::ceil(RL_ / 0.2);
        auto& gr = gauss_rule(12);
        auto breaks = linspace_breaks(-RL_, RL_, panels);
        for (int p = 0; p < panels; ++p) {
            double mid = 0.5 * (breaks[p] + breaks[p + 1]);
            double hw = 0.5 * (breaks[p + 1] - breaks[p]);
            for (int q = 0; q < 12; ++q) {
                t_.push_back(mid + hw * gr.x[q]);
                w_.push_back(hw * gr.w[q]);
                L_.push_back(strip_L(cd(t_.back(), 0.0), spec_));
            }
        }
    }

    cd K0(cd a) const {  // off the real axis
        cd s = 0.0;
        for (size_t i = 0; i < t_.size(); ++i) s += w_[i] * (L_[i] - c_) / (t_[i] - a);
        s += c_ * std::log((RL_ - a) / (-RL_ - a));
        return std::exp(s / (cd(0, 2) * pi));
    }
    void K0_axis(double a, cd& k0p, cd& k0m) const {
        const cd itp = cd(0, 2) * pi;
        cd pv = 0.0;
        if (std::abs(a) < RL_) {
            cd La = strip_L(cd(a, 0.0), spec_);
            for (size_t i = 0; i < t_.size(); ++i) pv += w_[i] * (L_[i] - La) / (t_[i] - a);
            pv += La * std::log((RL_ - a) / (RL_ + a));
            pv += c_ * std::log((RL_ + a) / (RL_ - a));  // constant tails
            k0p = std::exp((pv + cd(0, 1) * pi * La) / itp);
            k0m = std::exp((pv - cd(0, 1) * pi * La) / itp);
        } else {  // beyond the grid L == c to machine precision
            for (size_t i = 0; i < t_.size(); ++i) pv += w_[i] * (L_[i] - c_) / (t_[i] - a);
            pv -= c_ * std::log(std::abs((a - RL_) / (a + RL_)));
            k0p = std::exp((pv + cd(0, 1) * pi * c_) / itp);
            k0m = std::exp((pv - cd(0, 1) * pi * c_) / itp);
        }
    }
    cd Kp(cd a) const {  // Im a >= 0
        if (a.imag() == 0.0) {
            cd p, m;
            K0_axis(a.real(), p, m);
            return root_plus(a, spec_.k) * p;
        }
        return root_plus(a, spec_.k) * K0(a);
    }
    cd Km(cd a) const {  // Im a <= 0
        if (a.imag() == 0.0) {
            cd p, m;
            K0_axis(a.real(), p, m);
            return m / root_minus(a, spec_.k);
        }
        return K0(a) / root_minus(a, spec_.k);
    }

    const StripSpec& spec() const { return spec_; }

  private:
    StripSpec spec_;
    double RL_;
    cd c_ = -std::log(2.0);
    std::vector<double> t_, w_;
    std::vector<cd> L_;
};

class StripSolver {
  public:
    explicit StripSolver(StripSpec sp, double grid_radius = 450.0, int grid_panels = 1200)
        : spec_(std::move(sp)), fac_(spec_), R_(grid_radius) {
        spec_.validate();
        zeros_ = zero_lattice(spec_, spec_.N);
        build_grid(grid_panels);
        for (auto& z : zeros_) delta_.push_back(sq(fac_.Kp(z.z)) / z.gprime);
        assemble_and_solve();
        build_field_cache();
    }

    const StripSpec& spec() const { return spec_; }
    const StripFactor& factor() const { return fac_; }
    const std::vector<StripZero>& zeros() const { return zeros_; }
    const std::vector<cd>& delta() const { return delta_; }
    const std::vector<cd>& A_plus() const { return Ap_; }
    const std::vector<cd>& A_minus() const { return Am_; }

    // Fourier data of the load
    cd Fhat_plus(cd a) const {
        if (!spec_.f) return 0.0;
        int panels = 8 + (int)(std::abs(a) / 8.0);  // resolve the oscillation
        return integrate_panels(
            [&](double x) { return spec_.f(x) * std::exp(cd(0, 1) * a * x); },
            linspace_breaks(0.0, 1.0, panels), 12);
    }
    cd Fhat_minus(cd a) const { return std::exp(-cd(0, 1) * a) * Fhat_plus(a); }

    // Cauchy integrals of the two densities; side = +1/-1 selects the upper/
    // lower boundary value when a is real, side = 0 requires Im a != 0
    cd Psi_plus(cd a, int side = 0) const { return psi_eval(rho_p_, cp_, a, side); }
    cd Psi_minus(cd a, int side = 0) const { return psi_eval(rho_m_, cm_, a, side); }

    cd Omega_plus(cd a) const {
        cd s = 0.0;
        for (size_t n = 0; n < zeros_.size(); ++n) s += Ap_[n] / (a + zeros_[n].z);
        return s;
    }
    cd Omega_minus(cd a) const {
        cd s = 0.0;
        for (size_t n = 0; n < zeros_.size(); ++n) s += Am_[n] / (a - zeros_[n].z);
        return s;
    }

    // solution of the RHP; for real a the appropriate boundary values are used
    cd Phi2_minus(cd a) const {
        int sd = (a.imag() == 0.0) ? -1 : 0;
        return (Psi_minus(a, sd) + Omega_minus(a)) / fac_.Km(a);
    }
    cd Phi2_plus(cd a) const {
        int sd = (a.imag() == 0.0) ? +1 : 0;
        return fac_.Kp(a) * (Omega_plus(a) - Psi_plus(a, sd));
    }
    cd Phi1_plus(cd a) const {
        int sd = (a.imag() == 0.0) ? +1 : 0;
        cd Kp = fac_.Kp(a);
        return -(Psi_minus(a, sd) + Omega_minus(a)) / Kp +
               std::exp(cd(0, 1) * a) * Kp * (Psi_plus(a, sd) - Omega_plus(a)) /
                   strip_g(a, spec_);
    }
    cd Phi1_minus(cd a) const {
        int sd = (a.imag() == 0.0) ? -1 : 0;
        cd Km = fac_.Km(a);
        return Km * (Psi_plus(a, sd) - Omega_plus(a)) -
               std::exp(-cd(0, 1) * a) * (Psi_minus(a, sd) + Omega_minus(a)) /
                   (Km * strip_g(a, spec_));
    }

    // ---- field reconstruction (4.5)-(4.6) ----

    // u(x, y); at y = 0 on the slit pass side = +1 or -1
    cd u(double x, double y, int side = 0) const {
        cd s = 0.0;
        for (size_t i = 0; i < node_.size(); ++i) {
            cd h = height_factor(gam_[i], (y == 0.0) ? (side >= 0 ? +0.0 : -0.0) : y,
                                 y > 0.0 || (y == 0.0 && side >= 0));
            s += w_[i] * phi1p_[i] * h * std::exp(-cd(0, 1) * node_[i] * x);
        }
        return s / (2.0 * pi);
    }
    cd u_y(double x, double y, int side = 0) const {
        cd s = 0.0;
        for (size_t i = 0; i < node_.size(); ++i) {
            cd h = height_deriv(gam_[i], (y == 0.0) ? 0.0 : y,
                                y > 0.0 || (y == 0.0 && side >= 0));
            s += w_[i] * phi1p_[i] * h * std::exp(-cd(0, 1) * node_[i] * x);
        }
        return s / (2.0 * pi);
    }

    // u_y(x, 0) for x on the open slit.  The transform of the flux splits
    // into the load transform plus two halves analytic off the slit; each
    // half is integrated on a shifted contour where its inverse transform
    // converges rapidly (both vanish identically for x inside the slit)
    cd flux_slit(double x) const {
        if (!(x > 0.0 && x < 1.0)) throw domain_error("flux_slit: x must be in (0,1)");
        double H = 25.0, T = 300.0;  // both halves are pole-free off the axis
        auto breaks = linspace_breaks(-T, T, 300);
        cd lower = integrate_panels(
            [&](double t) {
                cd a(t, -H);
                return Phi2_minus(a) * std::exp(-cd(0, 1) * a * x);
            },
            breaks, 12);
        cd upper = integrate_panels(
            [&](double t) {
                cd a(t, H);
                return Phi2_plus(a) * std::exp(cd(0, 1) * a * (1.0 - x));
            },
            breaks, 12);
        cd fx = spec_.f ? spec_.f(x) : cd(0.0);
        return fx + (lower + upper) / (2.0 * pi);
    }

    // jump u(x,0+) - u(x,0-) for x outside [0,1], via shifted contours where
    // the inverse transform decays exponentially (the jump must vanish there)
    cd jump_outside(double x) const {
        if (!(x < 0.0 || x > 1.0)) throw domain_error("jump_outside: x must be off [0,1]");
        double H = 11.0, T = 200.0;
        auto breaks = linspace_breaks(-T, T, 240);
        if (x < 0.0) {  // lift into C+, e^{-i a x} decays upward
            auto fint = [&](double t) {
                cd a(t, H);
                return Phi1_plus(a) * std::exp(-cd(0, 1) * a * x);
            };
            return integrate_panels(fint, breaks, 12) / (2.0 * pi);
        }
        // x > 1: Phi1+ = e^{i a} Phi1-, push into C-
        auto fint = [&](double t) {
            cd a(t, -H);
            return Phi1_minus(a) * std::exp(-cd(0, 1) * a * (x - 1.0));
        };
        return integrate_panels(fint, breaks, 12) / (2.0 * pi);
    }

  private:
    static cd sq(cd v) { return v * v; }

    struct Tail {  // non-oscillatory beta^{-3/2} tail constants at +-infinity
        cd right{0.0}, left{0.0};
    };

    void build_grid(int panels) {
        auto& gr = gauss_rule(12);
        auto breaks = linspace_breaks(-R_, R_, panels);
        for (int p = 0; p < panels; ++p) {
            double a = breaks[p], b = breaks[p + 1];
            double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
            for (int q = 0; q < 12; ++q) {
                double t = mid + hw * gr.x[q];
                node_.push_back(t);
                w_.push_back(hw * gr.w[q]);
                cd k0p, k0m;
                fac_.K0_axis(t, k0p, k0m);
                kp_.push_back(root_plus(cd(t, 0.0), spec_.k) * k0p);
                km_.push_back(k0m / root_minus(cd(t, 0.0), spec_.k));
                gam_.push_back(gamma_branch(cd(t, 0.0), spec_.k));
                cd Fp = Fhat_plus(cd(t, 0.0));
                rho_p_.push_back(std::exp(-cd(0, 1) * t) * Fp / kp_.back());
                rho_m_.push_back(km_.back() * Fp);
            }
        }
        // leading constants of the algebraic (endpoint) tails
        cd f1 = spec_.f ? spec_.f(1.0) : cd(0.0), f0 = spec_.f ? spec_.f(0.0) : cd(0.0);
        cp_.right = std::pow(R_, 1.5) * f1 / (cd(0, 1) * R_ * kp_.back());
        cp_.left = std::pow(R_, 1.5) * f1 / (cd(0, 1) * (-R_) * kp_.front());
        cm_.right = std::pow(R_, 1.5) * (-f0 / (cd(0, 1) * R_)) * km_.back();
        cm_.left = std::pow(R_, 1.5) * (-f0 / (cd(0, 1) * (-R_))) * km_.front();
    }

    // int_R^inf b^{-3/2} db / (b - z), z off [R, inf)
    cd tail_I(cd z) const {
        cd w = std::sqrt(z), sr = std::sqrt(R_);
        return 2.0 / z * (-0.5 / w * std::log((sr - w) / (sr + w)) - 1.0 / sr);
    }

    cd psi_eval(const std::vector<cd>& rho, const Tail& c, cd a, int side) const {
        const cd itp = cd(0, 2) * pi;
        cd s = 0.0;
        if (a.imag() != 0.0) {
            for (size_t i = 0; i < node_.size(); ++i) s += w_[i] * rho[i] / (node_[i] - a);
        } else {
            if (side == 0) throw domain_error("psi_eval: real point needs a side");
            // principal value with the density value subtracted, plus the
            // closed-form log end correction and the half-density jump
            double t0 = a.real();
            if (std::abs(t0) >= R_) throw domain_error("psi_eval: point beyond grid");
            cd r0 = interp_density(rho, t0);
            for (size_t i = 0; i < node_.size(); ++i) {
                double d = node_[i] - t0;
                if (std::abs(d) < 1e-10 * (1.0 + std::abs(t0))) {
                    // limit of the regularized integrand: the density slope
                    size_t lo = (i == 0) ? 0 : i - 1;
                    size_t hi = (i + 1 == node_.size()) ? i : i + 1;
                    s += w_[i] * (rho[hi] - rho[lo]) / (node_[hi] - node_[lo]);
                } else {
                    s += w_[i] * (rho[i] - r0) / d;
                }
            }
            s += r0 * std::log((R_ - t0) / (R_ + t0));
            s += (side > 0 ? +0.5 : -0.5) * itp * r0;
        }
        if (std::abs(a) < 0.9 * R_)
            s += c.right * tail_I(a) - c.left * tail_I(-a);
        return s / itp;
    }

    cd interp_density(const std::vector<cd>& rho, double t0) const {
        // densities are smooth on the axis: recompute exactly at t0
        cd k0p, k0m;
        fac_.K0_axis(t0, k0p, k0m);
        cd Fp = Fhat_plus(cd(t0, 0.0));
        if (&rho == &rho_p_)
            return std::exp(-cd(0, 1) * t0) * Fp /
                   (root_plus(cd(t0, 0.0), spec_.k) * k0p);
        return k0m / root_minus(cd(t0, 0.0), spec_.k) * Fp;
    }

    void assemble_and_solve() {
        const int M = (int)zeros_.size();
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2 * M, 2 * M);
        Eigen::VectorXcd b(2 * M);
        // unknowns: x = [A+_0..A+_{M-1}, A-_0..A-_{M-1}]
        for (int n = 0; n < M; ++n) {
            cd zn = zeros_[n].z;
            cd de = delta_[n] * std::exp(cd(0, 1) * zn);
            // A_n^+ - de sum_m A_m^-/(z_n+z_m) = -de Psi_-(-z_n)
            A(n, n) += 1.0;
            for (int m = 0; m < M; ++m) A(n, M + m) -= de / (zn + zeros_[m].z);
            b(n) = -de * Psi_minus(-zn);
            // A_n^- + de sum_m A_m^+/(z_n+z_m) = de Psi_+(z_n)
            A(M + n, M + n) += 1.0;
            for (int m = 0; m < M; ++m) A(M + n, m) += de / (zn + zeros_[m].z);
            b(M + n) = de * Psi_plus(zn);
        }
        Eigen::VectorXcd x = A.partialPivLu().solve(b);
        for (int n = 0; n < M; ++n) {
            Ap_.push_back(x(n));
            Am_.push_back(x(M + n));
        }
        system_residual_ = (A * x - b).cwiseAbs().maxCoeff();
    }

    void build_field_cache() {
        for (size_t i = 0; i < node_.size(); ++i) {
            cd a(node_[i], 0.0);
            cd Kp = kp_[i];
            cd p1 = -(Psi_minus(a, +1) + Omega_minus(a)) / Kp +
                    std::exp(cd(0, 1) * a) * Kp * (Psi_plus(a, +1) - Omega_plus(a)) /
                        strip_g(a, spec_);
            phi1p_.push_back(p1);
        }
    }

    // cosh(g(y-b+)) sinh(g b-)/sinh(g B) for the upper layer (upper = true),
    // -cosh(g(y+b-)) sinh(g b+)/sinh(g B) for the lower; overflow-free
    cd height_factor(cd g, double y, bool upper) const {
        cd den = 2.0 * (1.0 - std::exp(-2.0 * g * spec_.B()));
        if (upper) {
            cd num = std::exp(g * (y - 2.0 * spec_.b_plus)) + std::exp(-g * y) -
                     std::exp(g * (y - 2.0 * spec_.B())) -
                     std::exp(-g * (y + 2.0 * spec_.b_minus));
            return num / den;
        }
        cd num = std::exp(g * y) + std::exp(-g * (y + 2.0 * spec_.b_minus)) -
                 std::exp(g * (y - 2.0 * spec_.b_plus)) -
                 std::exp(-g * (y + 2.0 * spec_.B()));
        return -num / den;
    }
    cd height_deriv(cd g, double y, bool upper) const {
        cd den = 2.0 * (1.0 - std::exp(-2.0 * g * spec_.B()));
        if (upper) {
            cd num = std::exp(g * (y - 2.0 * spec_.b_plus)) - std::exp(-g * y) -
                     std::exp(g * (y - 2.0 * spec_.B())) +
                     std::exp(-g * (y + 2.0 * spec_.b_minus));
            return g * num / den;
        }
        cd num = std::exp(g * y) - std::exp(-g * (y + 2.0 * spec_.b_minus)) -
                 std::exp(g * (y - 2.0 * spec_.b_plus)) +
                 std::exp(-g * (y + 2.0 * spec_.B()));
        return -g * num / den;
    }

  public:
    double system_residual() const { return system_residual_; }

  private:
    StripSpec spec_;
    StripFactor fac_;
    double R_;
    std::vector<StripZero> zeros_;
    std::vector<cd> delta_, Ap_, Am_;
    std::vector<double> node_, w_;
    std::vector<cd> kp_, km_, gam_, rho_p_, rho_m_, phi1p_;
    Tail cp_, cm_;
    double system_residual_ = 0.0;
};

}  // namespace mwh
