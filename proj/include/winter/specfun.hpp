#pragma once

#include <complex>

namespace winter {

struct JacobiTriple {
    double sn;
    double cn;
    double dn;
};

struct FresnelCS {
    double C;
    double S;
};

// Principal branch of the Lambert W function, real axis, x >= -1/e.
// Throws DomainError for x < -1/e (beyond a small rounding allowance) or non-finite x.
double lambert_w0(double x);

// Secondary real branch W_{-1} on [-1/e, 0). Throws DomainError outside.
double lambert_wm1(double x);

// Complete elliptic integral of the first kind, modulus convention:
// K(p) = \int_0^{pi/2} dt / sqrt(1 - p^2 sin^2 t), 0 <= p < 1.
// Throws DomainError for p outside [0, 1).
double elliptic_K(double p);

// Jacobi elliptic functions sn, cn, dn of argument u and modulus p in [0, 1].
// p = 0 degenerates to (sin u, cos u, 1); p = 1 to (tanh u, sech u, sech u).
// Throws DomainError for p outside [0, 1] or non-finite input.
JacobiTriple jacobi(double u, double p);

// cs(u, p) = cn/sn. Throws PoleError when sn(u, p) vanishes.
double jacobi_cs(double u, double p);

// Fresnel integrals in the convention C(x) + i S(x) = \int_0^x exp(i pi tau^2 / 2) dtau.
// Both are odd; C, S -> 1/2 as x -> +infinity.
FresnelCS fresnel(double x);

}  // namespace winter
