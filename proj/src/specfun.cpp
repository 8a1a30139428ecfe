#include "winter/specfun.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>

#include "winter/errors.hpp"

namespace winter {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kE = 2.71828182845904523536;

// Halley iteration for w e^w = x, started from `w`. Returns NaN if it fails to settle.
double halley_lambert(double x, double w) {
    for (int it = 0; it < 60; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double wp1 = w + 1.0;
        const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if (denom == 0.0) break;
        const double dw = f / denom;
        w -= dw;
        if (std::abs(dw) <= 1e-16 * (1.0 + std::abs(w))) return w;
    }
    const double resid = std::abs(w * std::exp(w) - x) / std::max(std::abs(x), 1e-300);
    return resid <= 1e-12 ? w : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double lambert_w0(double x) {
    if (!std::isfinite(x)) throw DomainError("lambert_w0: non-finite argument");
    if (x == 0.0) return 0.0;
    double t = kE * x + 1.0;  // vanishes at the branch point x = -1/e
    if (t < 0.0) {
        if (t < -1e-12) throw DomainError("lambert_w0: argument below -1/e");
        t = 0.0;
    }
    const double rho = std::sqrt(2.0 * t);
    if (rho < 1e-4) return -1.0 + rho - rho * rho / 3.0 + 11.0 * rho * rho * rho / 72.0;

    double w;
    if (x < -0.2) {
        w = -1.0 + rho - rho * rho / 3.0 + 11.0 * rho * rho * rho / 72.0;
    } else if (x < kE) {
        w = x / (1.0 + 0.6 * x);
    } else {
        const double l1 = std::log(x);
        const double l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }
    w = halley_lambert(x, w);
    if (std::isnan(w)) throw NumericalError("lambert_w0: iteration failed to converge");
    return w;
}

double lambert_wm1(double x) {
    if (!std::isfinite(x)) throw DomainError("lambert_wm1: non-finite argument");
    if (x >= 0.0) throw DomainError("lambert_wm1: argument must be negative");
    double t = kE * x + 1.0;
    if (t < 0.0) {
        if (t < -1e-12) throw DomainError("lambert_wm1: argument below -1/e");
        t = 0.0;
    }
    const double rho = std::sqrt(2.0 * t);
    if (rho < 1e-4) return -1.0 - rho - rho * rho / 3.0 - 11.0 * rho * rho * rho / 72.0;

    double w;
    if (x < -0.2) {
        w = -1.0 - rho - rho * rho / 3.0 - 11.0 * rho * rho * rho / 72.0;
    } else {
        const double lx = std::log(-x);
        w = lx - std::log(-lx);
    }
    w = halley_lambert(x, w);
    if (std::isnan(w) || w > -1.0 + 1e-9) throw NumericalError("lambert_wm1: iteration failed to converge");
    return w;
}

double elliptic_K(double p) {
    if (!std::isfinite(p) || p < 0.0 || p >= 1.0) throw DomainError("elliptic_K: modulus must lie in [0, 1)");
    double a = 1.0;
    double b = std::sqrt((1.0 - p) * (1.0 + p));
    for (int it = 0; it < 64 && std::abs(a - b) > 1e-17 * a; ++it) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return kPi / (2.0 * a);
}

JacobiTriple jacobi(double u, double p) {
    if (!std::isfinite(u) || !std::isfinite(p)) throw DomainError("jacobi: non-finite argument");
    if (p < 0.0 || p > 1.0) throw DomainError("jacobi: modulus must lie in [0, 1]");
    if (p == 0.0) return {std::sin(u), std::cos(u), 1.0};
    if (p > 1.0 - 1e-10) {
        // Hyperbolic degeneration; dn from the identity dn^2 = cn^2 + (1 - p^2) sn^2.
        const double sn = std::tanh(u);
        const double cn = 1.0 / std::cosh(u);
        const double dn = std::sqrt(cn * cn + (1.0 - p) * (1.0 + p) * sn * sn);
        return {sn, cn, dn};
    }

    // Descending Landen ladder: k halves superquadratically, u rescales with it.
    std::array<double, 18> ks{};
    std::array<double, 18> kps{};
    ks[0] = p;
    kps[0] = std::sqrt((1.0 - p) * (1.0 + p));
    std::size_t n = 0;
    while (ks[n] > 1e-16 && n + 1 < ks.size()) {
        ks[n + 1] = (1.0 - kps[n]) / (1.0 + kps[n]);
        kps[n + 1] = 2.0 * std::sqrt(kps[n]) / (1.0 + kps[n]);
        u /= 1.0 + ks[n + 1];
        ++n;
    }

    double sn = std::sin(u);
    double cn = std::cos(u);
    double dn = 1.0;
    // Ascend: invert each Landen step; dn is rebuilt from an all-positive identity.
    for (std::size_t m = n; m-- > 0;) {
        const double k1 = ks[m + 1];
        const double d = 1.0 + k1 * sn * sn;
        sn = (1.0 + k1) * sn / d;
        cn = cn * dn / d;
        dn = std::sqrt(cn * cn + kps[m] * kps[m] * sn * sn);
    }
    return {sn, cn, dn};
}

double jacobi_cs(double u, double p) {
    const JacobiTriple j = jacobi(u, p);
    if (std::abs(j.sn) < 1e-14) throw PoleError("jacobi_cs: sn vanishes at this argument");
    return j.cn / j.sn;
}

FresnelCS fresnel(double x) {
    if (!std::isfinite(x)) throw DomainError("fresnel: non-finite argument");
    const double ax = std::abs(x);
    double C, S;
    if (ax < 1.6) {
        // Taylor series; terms fall factorially, fewer than 20 needed here.
        const double x4 = ax * ax * ax * ax;
        const double hp = 0.5 * kPi;
        double cterm = ax;            // (-1)^n (pi/2)^{2n} x^{4n+1} / (2n)!
        double sterm = hp * ax * ax * ax;  // (-1)^n (pi/2)^{2n+1} x^{4n+3} / (2n+1)!
        C = cterm;
        S = sterm / 3.0;
        for (int n = 0; n < 60; ++n) {
            cterm *= -hp * hp * x4 / ((2.0 * n + 1.0) * (2.0 * n + 2.0));
            sterm *= -hp * hp * x4 / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
            C += cterm / (4.0 * n + 5.0);
            S += sterm / (4.0 * n + 7.0);
            if (std::abs(cterm) < 1e-18 && std::abs(sterm) < 1e-18) break;
        }
    } else {
        // C + iS = (1+i)/2 (1 - erfc(z)), z = (sqrt(pi)/2)(1-i)x; erfc via a
        // continued fraction evaluated with the modified Lentz scheme.
        using cplx = std::complex<double>;
        const cplx z = 0.5 * std::sqrt(kPi) * cplx(1.0, -1.0) * ax;
        const cplx z2 = z * z;  // equals -i pi x^2 / 2
        const double tiny = 1e-300;
        cplx f = z2;
        cplx cl = f;
        cplx d = 0.0;
        for (int n = 1; n <= 200; ++n) {
            const double an = 0.5 * n;
            const cplx bn = (n % 2 == 1) ? cplx(1.0) : z2;
            d = bn + an * d;
            if (std::abs(d) < tiny) d = tiny;
            d = 1.0 / d;
            cl = bn + an / cl;
            if (std::abs(cl) < tiny) cl = tiny;
            const cplx delta = cl * d;
            f *= delta;
            if (std::abs(delta - 1.0) < 1e-16) break;
        }
        const cplx erfc_z = std::exp(-z2) * z / (std::sqrt(kPi) * f);
        const cplx F = 0.5 * cplx(1.0, 1.0) * (1.0 - erfc_z);
        C = F.real();
        S = F.imag();
    }
    if (x < 0.0) {
        C = -C;
        S = -S;
    }
    return {C, S};
}

}  // namespace winter
