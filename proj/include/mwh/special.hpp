#pragma once

// Branch-correct complex special functions shared by all solvers:
// Gamma, Beta, the Gauss hypergeometric series, erfc, and the two
// branch-cut square roots used in the transform planes.

#include <cmath>
#include <complex>

#include "mwh/numerics.hpp"

namespace mwh {

// Complex Gamma, Lanczos g=7 with reflection for Re z < 1/2.
inline cd cgamma(cd z) {
    static const double coef[9] = {0.99999999999980993,  676.5203681218851,
                                   -1259.1392167224028,  771.32342877765313,
                                   -176.61502916214059,  12.507343278686905,
                                   -0.13857109526572012, 9.9843695780195716e-6,
                                   1.5056327351493116e-7};
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw domain_error("cgamma: pole at non-positive integer");
    if (z.real() < 0.5) return pi / (std::sin(pi * z) * cgamma(1.0 - z));
    z -= 1.0;
    cd x = coef[0];
    for (int i = 1; i < 9; ++i) x += coef[i] / (z + cd(i, 0));
    cd t = z + 7.5;
    return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

// log Gamma (branch arbitrary up to 2 pi i; used only inside exp-of-sums)
inline cd clgamma(cd z) {
    static const double coef[9] = {0.99999999999980993,  676.5203681218851,
                                   -1259.1392167224028,  771.32342877765313,
                                   -176.61502916214059,  12.507343278686905,
                                   -0.13857109526572012, 9.9843695780195716e-6,
                                   1.5056327351493116e-7};
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw domain_error("clgamma: pole at non-positive integer");
    if (z.real() < 0.5) {
        // log(pi / sin(pi z)) - clgamma(1 - z), with log sin computed stably
        cd lsin;
        if (z.imag() >= 0.0)
            lsin = -cd(0, 1) * pi * z + std::log(1.0 - std::exp(2.0 * cd(0, 1) * pi * z)) -
                   std::log(cd(0, -2));
        else
            lsin = cd(0, 1) * pi * z + std::log(1.0 - std::exp(-2.0 * cd(0, 1) * pi * z)) -
                   std::log(cd(0, 2));
        return std::log(cd(pi)) - lsin - clgamma(1.0 - z);
    }
    z -= 1.0;
    cd x = coef[0];
    for (int i = 1; i < 9; ++i) x += coef[i] / (z + cd(i, 0));
    cd t = z + 7.5;
    return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// Beta function via log Gamma (robust for large imaginary arguments, where
// the Gamma factors individually underflow)
inline cd cbeta(cd a, cd b) { return std::exp(clgamma(a) + clgamma(b) - clgamma(a + b)); }

inline double erfc(double x) { return std::erfc(x); }

// Gauss 2F1 by its defining series, |z| < 1.  Stops once two consecutive
// terms drop below tol * |partial sum|; hard cap 1e5 terms.
inline cd gauss2f1(cd a, cd b, cd c, cd z, double tol = 1e-14) {
    if (std::abs(z) >= 1.0) throw domain_error("gauss2f1: series requires |z| < 1");
    if (c.imag() == 0.0 && c.real() <= 0.0 && c.real() == std::floor(c.real()))
        throw domain_error("gauss2f1: c at non-positive integer");
    cd sum = 1.0, term = 1.0;
    int small_streak = 0;
    for (int k = 0; k < 100000; ++k) {
        term *= (a + cd(k)) * (b + cd(k)) / ((c + cd(k)) * cd(k + 1.0)) * z;
        sum += term;
        if (std::abs(term) < tol * std::abs(sum)) {
            if (++small_streak >= 2) return sum;
        } else {
            small_streak = 0;
        }
    }
    throw numeric_error("gauss2f1: series did not converge within 1e5 terms");
}

// Principal square root with Re > 0; the cut (-infty, 0] is rejected.
inline cd sqrt_p(cd p) {
    if (p.imag() == 0.0 && p.real() <= 0.0) throw domain_error("sqrt_p: p on the cut (-inf,0]");
    return std::sqrt(p);
}

// gamma(alpha) = sqrt(alpha^2 - k^2), Im k > 0, normalized so that
// Re gamma >= 0 on the real axis and gamma(0) = -i k.
inline cd gamma_branch(cd alpha, cd k) {
    if (k.imag() <= 0.0) throw domain_error("gamma_branch: requires Im k > 0");
    cd w = k * k - alpha * alpha;
    if (w == cd(0.0, 0.0)) return cd(0.0, 0.0);
    if (w.imag() == 0.0 && w.real() < 0.0) w = cd(w.real(), +0.0);
    return cd(0.0, -1.0) * std::sqrt(w);
}

// Half-line square roots of (alpha +- k) with cuts running from -+k away
// from the origin, so that root_plus * root_minus == gamma_branch.
inline cd root_plus(cd alpha, cd k) {
    // cut from -k along direction arg(-k)
    double cut = std::arg(-k);
    cd w = alpha + k;
    double phi = std::arg(w);
    while (phi <= cut) phi += 2.0 * pi;
    while (phi > cut + 2.0 * pi) phi -= 2.0 * pi;
    return std::sqrt(std::abs(w)) * std::polar(1.0, 0.5 * phi);
}

inline cd root_minus(cd alpha, cd k) {
    // cut from k along direction arg(k)
    double cut = std::arg(k);
    cd w = alpha - k;
    double phi = std::arg(w);
    while (phi <= cut - 2.0 * pi) phi += 2.0 * pi;
    while (phi > cut) phi -= 2.0 * pi;
    return std::sqrt(std::abs(w)) * std::polar(1.0, 0.5 * phi);
}

}  // namespace mwh
