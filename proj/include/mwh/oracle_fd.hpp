#pragma once

// Independent brute-force reference solvers.  These share no analytic
// machinery with the semi-analytic solvers: plain finite differences /
// quadrature discretizations of the original PDEs and integral equations,
// used to validate the closed-form solutions.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "mwh/conv_system.hpp"
#include "mwh/heat_rod.hpp"
#include "mwh/numerics.hpp"
#include "mwh/strip.hpp"
#include "mwh/wedge.hpp"

#include <algorithm>

namespace mwh {

struct GridSolution {
    std::vector<double> x;
    std::vector<double> u;
    double interp(double xq) const {
        if (xq <= x.front()) return u.front();
        if (xq >= x.back()) return u.back();
        size_t i = std::upper_bound(x.begin(), x.end(), xq) - x.begin() - 1;
        double w = (xq - x[i]) / (x[i + 1] - x[i]);
        return (1.0 - w) * u[i] + w * u[i + 1];
    }
};

// Conservative finite-volume Crank-Nicolson solver for
//   c(x) u_t = (k(x) u_x)_x + c(x) g(x,t)
// on [-L, L] with Dirichlet values gamma_-/gamma_+ at the ends.  Cells are
// centered at x_i = -L + (i+1/2)h so material interfaces fall on faces when
// they are grid-aligned; face conductivities are harmonic means.  Solves
// for the total temperature directly.
inline GridSolution heat_cn(const RodSpec& spec, double L, int cells, int steps,
                            double t_end) {
    spec.validate();
    const double h = 2.0 * L / cells, dt = t_end / steps;
    std::vector<double> x(cells), cap(cells), kf(cells + 1);
    for (int i = 0; i < cells; ++i) {
        x[i] = -L + (i + 0.5) * h;
        int j = spec.segment_of(x[i]);
        cap[i] = spec.k[j] / (spec.a[j] * spec.a[j]);  // c_p rho
    }
    auto cond = [&](double xx) { return spec.k[spec.segment_of(xx)]; };
    for (int i = 1; i < cells; ++i) {
        double kl = cond(x[i - 1]), kr = cond(x[i]);
        kf[i] = 2.0 * kl * kr / (kl + kr);
    }
    kf[0] = cond(x[0]);
    kf[cells] = cond(x[cells - 1]);

    // M u + r : interior fluxes; Dirichlet via ghost u_{-1} = 2 gamma_- - u_0
    Eigen::SparseMatrix<double> M(cells, cells);
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd r = Eigen::VectorXd::Zero(cells);
    for (int i = 0; i < cells; ++i) {
        double cl = (i > 0) ? kf[i] : 2.0 * kf[0];
        double cr = (i < cells - 1) ? kf[i + 1] : 2.0 * kf[cells];
        double diag = -(cl + cr);
        if (i > 0) trip.emplace_back(i, i - 1, cl / (cap[i] * h * h));
        else r[i] += cl * spec.gamma_minus / (cap[i] * h * h);
        if (i < cells - 1) trip.emplace_back(i, i + 1, cr / (cap[i] * h * h));
        else r[i] += cr * spec.gamma_plus / (cap[i] * h * h);
        trip.emplace_back(i, i, diag / (cap[i] * h * h));
    }
    M.setFromTriplets(trip.begin(), trip.end());

    Eigen::SparseMatrix<double> I(cells, cells);
    I.setIdentity();
    Eigen::SparseMatrix<double> Aimp = I - (dt / 2.0) * M;
    Eigen::SparseMatrix<double> Aexp = I + (dt / 2.0) * M;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(Aimp);
    if (lu.info() != Eigen::Success) throw numeric_error("heat_cn: factorization failed");

    // initial data: exact cell averages (box-type f has discontinuities)
    Eigen::VectorXd u(cells);
    double b0 = spec.b.front();
    for (int i = 0; i < cells; ++i) {
        double lo = x[i] - 0.5 * h, hi = x[i] + 0.5 * h;
        auto f0 = [&](double xx) {
            double v = xx < b0 ? spec.gamma_minus : spec.gamma_plus;
            if (!spec.f.empty() && xx > spec.f.lo && xx < spec.f.hi) v += spec.f.f(xx);
            return cd(v, 0.0);
        };
        u[i] = integrate_adaptive(f0, lo, hi, 1e-12).real() / h;
    }

    Eigen::VectorXd gv = Eigen::VectorXd::Zero(cells);
    for (int n = 0; n < steps; ++n) {
        if (spec.g) {
            double tm = (n + 0.5) * dt;
            for (int i = 0; i < cells; ++i) gv[i] = spec.g(x[i], tm);
        }
        Eigen::VectorXd rhs = Aexp * u + dt * (r + gv);
        u = lu.solve(rhs);
    }
    GridSolution out;
    out.x = x;
    out.u.assign(u.data(), u.data() + cells);
    return out;
}

// Two-grid refinement wrapper: returns the fine solution and an error
// estimate (max abs difference against the coarse run on the fine centers).
inline GridSolution heat_cn_refined(const RodSpec& spec, double L, int cells, int steps,
                                    double t_end, double* err_estimate = nullptr) {
    GridSolution coarse = heat_cn(spec, L, cells, steps, t_end);
    GridSolution fine = heat_cn(spec, L, 2 * cells, 2 * steps, t_end);
    if (err_estimate) {
        double e = 0.0;
        for (size_t i = 0; i < fine.x.size(); ++i)
            if (std::abs(fine.x[i]) < 0.8 * L)
                e = std::max(e, std::abs(fine.u[i] - coarse.interp(fine.x[i])));
        *err_estimate = e;
    }
    return fine;
}

// Nystrom (trapezoid) discretization of the 2x2 half-line convolution
// system, truncated at X.  Choose n so that h = X/n divides the kernel
// offset a: the |x-t|-type kinks then sit on grid nodes and the trapezoid
// rule keeps its O(h^2) Euler-Maclaurin expansion.
struct AWGridSolution {
    std::vector<double> x;
    std::vector<cd> u1, u2;
    cd interp1(double xq) const { return interp(u1, xq); }
    cd interp2(double xq) const { return interp(u2, xq); }
    cd interp(const std::vector<cd>& u, double xq) const {
        if (xq <= x.front()) return u.front();
        if (xq >= x.back()) return u.back();
        size_t i = std::upper_bound(x.begin(), x.end(), xq) - x.begin() - 1;
        double w = (xq - x[i]) / (x[i + 1] - x[i]);
        return (1.0 - w) * u[i] + w * u[i + 1];
    }
};

inline AWGridSolution aw_nystrom(const AWSpec& spec, double X = 40.0, int n = 800) {
    spec.validate();
    const double h = X / n;
    const int m = n + 1;
    auto fval = [](const std::vector<std::pair<double, double>>& f, double x) {
        double v = 0.0;
        for (auto& [c, mu] : f) v += c * std::exp(-mu * x);
        return v;
    };
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(2 * m, 2 * m);
    Eigen::VectorXcd rhs(2 * m);
    for (int i = 0; i < m; ++i) {
        double xi = i * h;
        rhs[i] = fval(spec.f1, xi);
        rhs[m + i] = fval(spec.f2, xi);
        for (int j = 0; j < m; ++j) {
            double tj = j * h, w = (j == 0 || j == n) ? 0.5 * h : h;
            cd lw = spec.lambda * w;
            double d = xi - tj;
            A(i, j) -= lw * std::exp(-std::abs(d));
            A(i, m + j) -= lw * std::exp(-std::abs(d - spec.a));
            A(m + i, j) -= lw * std::exp(-std::abs(d + spec.a));
            A(m + i, m + j) -= lw * std::exp(-std::abs(d));
        }
    }
    Eigen::VectorXcd u = A.partialPivLu().solve(rhs);
    AWGridSolution out;
    out.x.resize(m);
    out.u1.resize(m);
    out.u2.resize(m);
    for (int i = 0; i < m; ++i) {
        out.x[i] = i * h;
        out.u1[i] = u[i];
        out.u2[i] = u[m + i];
    }
    return out;
}

// two-grid Richardson (h and h/2): eliminates the O(h^2) term
inline AWGridSolution aw_nystrom_refined(const AWSpec& spec, double X = 40.0, int n = 800,
                                         double* err_estimate = nullptr) {
    AWGridSolution c = aw_nystrom(spec, X, n);
    AWGridSolution f = aw_nystrom(spec, X, 2 * n);
    AWGridSolution out;
    out.x = c.x;
    out.u1.resize(c.x.size());
    out.u2.resize(c.x.size());
    double e = 0.0;
    for (size_t i = 0; i < c.x.size(); ++i) {
        out.u1[i] = (4.0 * f.u1[2 * i] - c.u1[i]) / 3.0;
        out.u2[i] = (4.0 * f.u2[2 * i] - c.u2[i]) / 3.0;
        if (c.x[i] < 0.8 * X)
            e = std::max(e, std::max(std::abs(f.u1[2 * i] - c.u1[i]),
                                     std::abs(f.u2[2 * i] - c.u2[i])));
    }
    if (err_estimate) *err_estimate = e;
    return out;
}

// ---- brute-force oracle for the mixed wedge problem ----
//
// Finite differences on a uniform grid in (log r, theta).  The temperature at
// infinity is an extra unknown, coupled by a Robin closure u_rho = -(pi/alpha)
// (u - T_inf) on the outer edge plus a zero-net-flux row through that edge.

struct WedgeGridSolution {
    std::vector<double> rho;    // ln r grid
    std::vector<double> theta;  // angular grid
    std::vector<double> u;      // physical temperature, row-major [i_rho][j_theta]
    double T_inf = 0.0;

    double at(double r, double th) const {
        double lr = std::log(r);
        size_t nr = rho.size(), nt = theta.size();
        double hr = rho[1] - rho[0], ht = theta[1] - theta[0];
        double fi = (lr - rho[0]) / hr, fj = (th - theta[0]) / ht;
        long i = std::clamp((long)fi, 0L, (long)nr - 2);
        long j = std::clamp((long)fj, 0L, (long)nt - 2);
        double ai = fi - i, aj = fj - j;
        auto U = [&](long p, long q) { return u[p * nt + q]; };
        return (1 - ai) * (1 - aj) * U(i, j) + ai * (1 - aj) * U(i + 1, j) +
               (1 - ai) * aj * U(i, j + 1) + ai * aj * U(i + 1, j + 1);
    }
};

inline WedgeGridSolution laplace_wedge_fd(const WedgeSpec& spec, double rho_min,
                                          double rho_max, int n_rho, int n_theta) {
    spec.validate();
    const double al = spec.alpha;
    const int NR = n_rho + 1, NT = n_theta + 1;
    const double hr = (rho_max - rho_min) / n_rho, ht = al / n_theta;
    const int N = NR * NT + 1;  // +1 for T_inf
    const int iT = NR * NT;

    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
    auto idx = [&](int i, int j) { return i * NT + j; };
    auto T1_at = [&](double r) { return spec.T1 + (spec.T1s ? spec.T1s(r) : 0.0); };
    auto T2_at = [&](double r) { return spec.T2 + (spec.T2s ? spec.T2s(r) : 0.0); };

    for (int i = 0; i < NR; ++i) {
        double rhoi = rho_min + i * hr, r = std::exp(rhoi);
        for (int j = 0; j < NT; ++j) {
            int row = idx(i, j);
            if (i == 0) {  // r -> 0: bounded harmonic limit, linear in theta
                double th = j * ht;
                trip.emplace_back(row, row, 1.0);
                rhs[row] = (1.0 - th / al) * spec.T1 + (th / al) * spec.T2;
                continue;
            }
            if (i == NR - 1) {  // outer Robin edge with unknown T_inf
                trip.emplace_back(row, idx(i, j), 3.0 / (2.0 * hr) + pi / al);
                trip.emplace_back(row, idx(i - 1, j), -4.0 / (2.0 * hr));
                trip.emplace_back(row, idx(i - 2, j), 1.0 / (2.0 * hr));
                trip.emplace_back(row, iT, -pi / al);
                continue;
            }
            if (j == 0 || j == NT - 1) {
                bool lower = (j == 0);
                double aj = lower ? spec.a1 : spec.a2;
                if (r <= aj) {  // Dirichlet part of the face
                    trip.emplace_back(row, row, 1.0);
                    rhs[row] = lower ? T1_at(r) : T2_at(r);
                } else {  // Neumann part, ghost node elimination
                    auto& f = lower ? spec.f1p : spec.f2p;
                    double fl = f ? f(r) : 0.0;
                    int jn = lower ? 1 : NT - 2;
                    trip.emplace_back(row, idx(i, j), -2.0 / (hr * hr) - 2.0 / (ht * ht));
                    trip.emplace_back(row, idx(i + 1, j), 1.0 / (hr * hr));
                    trip.emplace_back(row, idx(i - 1, j), 1.0 / (hr * hr));
                    trip.emplace_back(row, idx(i, jn), 2.0 / (ht * ht));
                    // u_theta(0) = -r f1, u_theta(alpha) = +r f2
                    rhs[row] = 2.0 * r * fl / ht;
                }
                continue;
            }
            trip.emplace_back(row, idx(i, j), -2.0 / (hr * hr) - 2.0 / (ht * ht));
            trip.emplace_back(row, idx(i + 1, j), 1.0 / (hr * hr));
            trip.emplace_back(row, idx(i - 1, j), 1.0 / (hr * hr));
            trip.emplace_back(row, idx(i, j + 1), 1.0 / (ht * ht));
            trip.emplace_back(row, idx(i, j - 1), 1.0 / (ht * ht));
        }
    }
    // closure: zero net flux through the outer edge (trapezoid in theta)
    for (int j = 0; j < NT; ++j) {
        double w = (j == 0 || j == NT - 1) ? 0.5 : 1.0;
        trip.emplace_back(iT, idx(NR - 1, j), w * 3.0 / (2.0 * hr));
        trip.emplace_back(iT, idx(NR - 2, j), -w * 4.0 / (2.0 * hr));
        trip.emplace_back(iT, idx(NR - 3, j), w * 1.0 / (2.0 * hr));
    }

    Eigen::SparseMatrix<double> A(N, N);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw numeric_error("laplace_wedge_fd: LU failed");
    Eigen::VectorXd sol = lu.solve(rhs);

    WedgeGridSolution out;
    out.rho.resize(NR);
    out.theta.resize(NT);
    for (int i = 0; i < NR; ++i) out.rho[i] = rho_min + i * hr;
    for (int j = 0; j < NT; ++j) out.theta[j] = j * ht;
    out.u.assign(sol.data(), sol.data() + NR * NT);
    out.T_inf = sol[iT];
    return out;
}

// ---- brute-force oracle for the Helmholtz strip with an internal slit ----
//
// Full-strip complex five-point scheme on x in [-X, 1+X], y in [-b-, b+].
// The slit y = 0, 0 < x < 1 carries two faces: the base grid row holds the
// lower-face values, extra unknowns hold the upper face; one-sided ghost
// rows impose du/dy = f on each face.  Walls are Neumann, the far ends
// Dirichlet zero (justified when Im k * X is large).

struct StripGridSolution {
    double X = 0.0, h = 0.0, b_plus = 0.0, b_minus = 0.0;
    int nx = 0, ny = 0, J0 = 0, i0 = 0, i1 = 0;
    std::vector<cd> base;   // (nx+1) x (ny+1), row-major in j
    std::vector<cd> upper;  // crack upper-face values, i = i0+1 .. i1-1

    cd node(int i, int j) const { return base[(size_t)j * (nx + 1) + i]; }
    // value at a grid point; on the slit interior pass side = +1 / -1
    cd at(double x, double y, int side = 0) const {
        int i = (int)std::lround((x + X) / h);
        int j = (int)std::lround((y + b_minus) / h);
        if (std::abs(x + X - i * h) > 1e-9 || std::abs(y + b_minus - j * h) > 1e-9)
            throw domain_error("StripGridSolution::at: not a grid point");
        if (j == J0 && i > i0 && i < i1 && side > 0) return upper[i - i0 - 1];
        return node(i, j);
    }
};

inline StripGridSolution helmholtz_strip_fd(const StripSpec& spec, double X = 7.0,
                                            int per_unit = 40) {
    spec.validate();
    const double h = 1.0 / per_unit;
    auto near_int = [](double v) {
        return std::abs(v - std::lround(v)) < 1e-12 * (1.0 + std::abs(v));
    };
    if (!near_int(spec.b_plus * per_unit) || !near_int(spec.b_minus * per_unit) ||
        !near_int(X * per_unit))
        throw domain_error("helmholtz_strip_fd: b and X must be multiples of h");

    const int nx = (int)std::lround((2.0 * X + 1.0) * per_unit);
    const int ny = (int)std::lround(spec.B() * per_unit);
    const int J0 = (int)std::lround(spec.b_minus * per_unit);
    const int i0 = (int)std::lround(X * per_unit), i1 = i0 + per_unit;
    const int nbase = (nx + 1) * (ny + 1);
    const int ncr = i1 - i0 - 1;  // upper-face unknowns
    const int n = nbase + ncr;

    auto id = [&](int i, int j) { return j * (nx + 1) + i; };
    auto idu = [&](int i) { return nbase + (i - i0 - 1); };  // i0 < i < i1
    auto crack_col = [&](int i) { return i > i0 && i < i1; };
    const cd k2 = spec.k * spec.k;
    const double ih2 = 1.0 / (h * h);

    std::vector<Eigen::Triplet<cd>> trip;
    trip.reserve((size_t)n * 6);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);

    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            const int r = id(i, j);
            if (i == 0 || i == nx) {  // far-end Dirichlet
                trip.emplace_back(r, r, cd(1.0, 0.0));
                continue;
            }
            const double x = -X + i * h;
            const bool on_crack = (j == J0) && crack_col(i);
            cd fv = (spec.f && j == J0 && i >= i0 && i <= i1) ? spec.f(x) : cd(0.0);

            // x-direction neighbours; on row J0 a tip couples to the average
            // of the two faces of an adjacent crack column
            auto couple_x = [&](int row, int inb, bool from_upper) {
                if (j == J0 && crack_col(inb)) {
                    if (crack_col(i)) {  // crack node: stay on its own face
                        trip.emplace_back(row, from_upper ? idu(inb) : id(inb, J0), cd(ih2));
                    } else {  // tip or outside node: average of the faces
                        trip.emplace_back(row, id(inb, J0), cd(0.5 * ih2));
                        trip.emplace_back(row, idu(inb), cd(0.5 * ih2));
                    }
                } else {
                    trip.emplace_back(row, id(inb, j), cd(ih2));
                }
            };

            if (on_crack) {
                // lower face (base row): ghost above enforces u_y(0-) = f
                couple_x(r, i - 1, false);
                couple_x(r, i + 1, false);
                trip.emplace_back(r, id(i, J0 - 1), cd(2.0 * ih2));
                trip.emplace_back(r, r, k2 - 4.0 * ih2);
                rhs(r) = -2.0 * fv / h;
                // upper face (extra row): ghost below enforces u_y(0+) = f
                const int ru = idu(i);
                couple_x(ru, i - 1, true);
                couple_x(ru, i + 1, true);
                trip.emplace_back(ru, id(i, J0 + 1), cd(2.0 * ih2));
                trip.emplace_back(ru, ru, k2 - 4.0 * ih2);
                rhs(ru) = 2.0 * fv / h;
                continue;
            }

            // y-direction neighbours (walls by reflected ghosts; the row
            // above the crack couples to the upper face)
            if (j == 0) {
                trip.emplace_back(r, id(i, 1), cd(2.0 * ih2));
            } else if (j == ny) {
                trip.emplace_back(r, id(i, ny - 1), cd(2.0 * ih2));
            } else {
                int jb = j - 1, ja = j + 1;
                if (ja == J0 && crack_col(i))
                    trip.emplace_back(r, id(i, J0), cd(ih2));  // lower face
                else
                    trip.emplace_back(r, id(i, ja), cd(ih2));
                if (jb == J0 && crack_col(i))
                    trip.emplace_back(r, idu(i), cd(ih2));  // upper face
                else
                    trip.emplace_back(r, id(i, jb), cd(ih2));
            }
            couple_x(r, i - 1, false);
            couple_x(r, i + 1, false);
            trip.emplace_back(r, r, k2 - 4.0 * ih2);
        }
    }

    Eigen::SparseMatrix<cd> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<cd>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw numeric_error("helmholtz_strip_fd: LU failed");
    Eigen::VectorXcd sol = lu.solve(rhs);

    StripGridSolution out;
    out.X = X;
    out.h = h;
    out.b_plus = spec.b_plus;
    out.b_minus = spec.b_minus;
    out.nx = nx;
    out.ny = ny;
    out.J0 = J0;
    out.i0 = i0;
    out.i1 = i1;
    out.base.assign(sol.data(), sol.data() + nbase);
    out.upper.assign(sol.data() + nbase, sol.data() + n);
    return out;
}

}  // namespace mwh
