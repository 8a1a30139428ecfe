#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "winter/errors.hpp"

namespace winter {

// 16-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 16> kGL16Nodes = {
    -0.98940093499164994, -0.9445750230732326,  -0.86563120238783176, -0.755404408355003,
    -0.61787624440264377, -0.45801677765722737, -0.28160355077925892, -0.095012509837637454,
    0.095012509837637454, 0.28160355077925892,  0.45801677765722737,  0.61787624440264377,
    0.755404408355003,    0.86563120238783176,  0.9445750230732326,   0.98940093499164994};

inline constexpr std::array<double, 16> kGL16Weights = {
    0.027152459411754037, 0.062253523938647706, 0.095158511682492591, 0.12462897125553403,
    0.14959598881657676,  0.16915651939500262,  0.18260341504492361,  0.18945061045506859,
    0.18945061045506859,  0.18260341504492361,  0.16915651939500262,  0.14959598881657676,
    0.12462897125553403,  0.095158511682492591, 0.062253523938647706, 0.027152459411754037};

// Integrates f over [a, b] with one 16-point Gauss-Legendre panel.
// Result type follows the return type of f (double or std::complex<double>).
template <typename F>
auto gl16_panel(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto acc = f(mid + half * kGL16Nodes[0]) * (half * kGL16Weights[0]);
    for (std::size_t i = 1; i < 16; ++i) acc += f(mid + half * kGL16Nodes[i]) * (half * kGL16Weights[i]);
    return acc;
}

namespace detail {

template <typename F, typename V>
V adaptive_simpson_rec(F& f, double a, double b, V fa, V fm, V fb, V whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const V flm = f(lm);
    const V frm = f(rm);
    const V left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const V right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const V sum = left + right;
    using std::abs;
    if (depth <= 0) throw AccuracyError("adaptive_simpson: recursion limit reached", abs(sum - whole));
    if (abs(sum - whole) <= 15.0 * tol) return sum + (sum - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Classic adaptive Simpson quadrature with absolute tolerance `tol`.
template <typename F>
auto adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 48) {
    using V = decltype(f(a));
    const V fa = f(a);
    const V fb = f(b);
    const V fm = f(0.5 * (a + b));
    const V whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace winter
