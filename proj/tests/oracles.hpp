#pragma once

// Independent reference implementations used only by the test suites. These are
// deliberately written with different algorithms than the library (bisection,
// plain Simpson refinement, RK4 integration of defining ODEs) so agreement is
// evidence, not tautology.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>

namespace oracle {

// Bisection for a sign-changing continuous f on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-14) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) throw std::runtime_error("oracle::bisect: no sign change");
    for (int it = 0; it < 200 && hi - lo > tol * (1.0 + std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Composite Simpson with doubling until two refinements agree to tol.
template <typename F>
auto simpson(F&& f, double a, double b, double tol = 1e-13) {
    using V = decltype(f(a));
    auto composite = [&](std::size_t n) {
        const double h = (b - a) / static_cast<double>(n);
        V acc = f(a) + f(b);
        for (std::size_t i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
        return acc * (h / 3.0);
    };
    V prev = composite(64);
    for (std::size_t n = 128; n <= (1u << 22); n *= 2) {
        V cur = composite(n);
        using std::abs;
        if (abs(cur - prev) <= tol * (1.0 + abs(cur))) return cur;
        prev = cur;
    }
    throw std::runtime_error("oracle::simpson: failed to converge");
}

struct JacobiState {
    double sn, cn, dn;
};

// RK4 integration of sn' = cn dn, cn' = -sn dn, dn' = -p^2 sn cn from u = 0.
inline JacobiState jacobi_rk4(double u, double p, std::size_t steps_per_unit = 4000) {
    const double p2 = p * p;
    auto deriv = [p2](const JacobiState& s) {
        return JacobiState{s.cn * s.dn, -s.sn * s.dn, -p2 * s.sn * s.cn};
    };
    auto axpy = [](const JacobiState& s, double h, const JacobiState& d) {
        return JacobiState{s.sn + h * d.sn, s.cn + h * d.cn, s.dn + h * d.dn};
    };
    const std::size_t n = std::max<std::size_t>(2000, static_cast<std::size_t>(std::abs(u) * steps_per_unit) + 1);
    const double h = u / static_cast<double>(n);
    JacobiState s{0.0, 1.0, 1.0};
    for (std::size_t i = 0; i < n; ++i) {
        const JacobiState k1 = deriv(s);
        const JacobiState k2 = deriv(axpy(s, 0.5 * h, k1));
        const JacobiState k3 = deriv(axpy(s, 0.5 * h, k2));
        const JacobiState k4 = deriv(axpy(s, h, k3));
        s.sn += h / 6.0 * (k1.sn + 2.0 * k2.sn + 2.0 * k3.sn + k4.sn);
        s.cn += h / 6.0 * (k1.cn + 2.0 * k2.cn + 2.0 * k3.cn + k4.cn);
        s.dn += h / 6.0 * (k1.dn + 2.0 * k2.dn + 2.0 * k3.dn + k4.dn);
    }
    return s;
}

}  // namespace oracle
