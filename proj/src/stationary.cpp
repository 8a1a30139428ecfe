#include "winter/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "winter/errors.hpp"
#include "winter/linear.hpp"
#include "winter/quadrature.hpp"
#include "winter/specfun.hpp"

namespace winter {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_ell(int ell) {
    if (ell != 1 && ell != 2) throw DomainError("ell selects a sign branch and must be 1 or 2");
}

double ell_sign(int ell) { return (ell % 2 == 0) ? 1.0 : -1.0; }

void require_scale(double lambda_prime) {
    if (!(lambda_prime > 0.0) || !std::isfinite(lambda_prime))
        throw DomainError("exterior scale must be positive and finite");
}

void validate_modulus(Regime regime, double p) {
    if (regime == Regime::focusing) {
        if (!(p > kInvSqrt2 && p <= 1.0))
            throw DomainError("focusing modulus must lie in (1/sqrt(2), 1]");
    } else {
        if (!(p >= 0.0 && p < 1.0)) throw DomainError("defocusing modulus must lie in [0, 1)");
    }
}

// Evaluates the matching function without domain checks; callers inside this
// file guarantee the arguments.  Focusing nullopt marks the inadmissible
// region where no exterior amplitude can meet the interior arc.
std::optional<double> eval_focusing(double p, double lp, int ell, const ModelParams& params) {
    if (p >= 1.0) return 0.0;  // degenerate hyperbolic limit
    const double w = 1.0 / std::sqrt(2.0 * p * p - 1.0);
    const double K = elliptic_K(p);
    const double us = lp * w * params.a - K;
    const JacobiTriple jt = jacobi(us, p);
    const double rad = 1.0 - p * p * w * w * jt.cn * jt.cn;
    if (rad < 0.0) return std::nullopt;
    return jt.cn * (lp * ell_sign(ell) * std::sqrt(rad) + params.alpha) - lp * w * jt.sn * jt.dn;
}

std::optional<double> eval_defocusing(double p, double lp, int ell, const ModelParams& params) {
    const double u = 1.0 / std::sqrt(2.0 - p * p);
    const double K = elliptic_K(p);
    const double us = lp * u * params.a - K;
    const double cs = jacobi_cs(us, p);  // PoleError where the interior arc is singular
    const JacobiTriple jt = jacobi(us, p);
    const double rad = 1.0 + u * u * cs * cs;
    return jt.cn * (lp * ell_sign(ell) * std::sqrt(rad) + params.alpha) - u * lp * jt.dn / jt.sn;
}

std::optional<double> eval_matching(Regime regime, int ell, double p, double lp, const ModelParams& params) {
    return regime == Regime::focusing ? eval_focusing(p, lp, ell, params)
                                      : eval_defocusing(p, lp, ell, params);
}

// Product of the two focusing sheet values.  The square root cancels, so this
// is smooth across the admissibility boundary, vanishes exactly on the union
// of the two root curves, and stays regular at the joints where a root curve
// crosses from one sheet to the other along that boundary.
double eval_focusing_product(double p, double lp, const ModelParams& params) {
    if (p >= 1.0) return 0.0;
    const double w = 1.0 / std::sqrt(2.0 * p * p - 1.0);
    const double K = elliptic_K(p);
    const double us = lp * w * params.a - K;
    const JacobiTriple jt = jacobi(us, p);
    const double rad = 1.0 - p * p * w * w * jt.cn * jt.cn;
    const double F = jt.cn * params.alpha - lp * w * jt.sn * jt.dn;
    return F * F - jt.cn * jt.cn * lp * lp * rad;
}

// Builds the full state from a root of the matching function.  nullopt rejects
// inadmissible parameters and sign-spurious roots: the matching family encodes
// the tail sign as (-1)^ell, so a root probed with the other ell fails the
// derivative jump by an O(1) amount.  A continuity failure cannot arise from
// the construction and signals an internal bug.
std::optional<StationaryState> reconstruct(Regime regime, int ell, double p, double lp,
                                           const ModelParams& params) {
    const double a = params.a;
    StationaryState st;
    st.regime = regime;
    st.ell = ell;
    st.a = a;
    st.p = p;
    st.lambda_prime = lp;
    st.Omega = -lp * lp;

    double phi_a = 0.0, dphi_in = 0.0, dphi_out = 0.0, match_gap = 0.0;
    if (regime == Regime::focusing) {
        if (p >= 1.0) return std::nullopt;  // the degenerate limit carries no isolated state
        const double w = 1.0 / std::sqrt(2.0 * p * p - 1.0);
        const double K = elliptic_K(p);
        st.lambda = lp * w;
        st.x0 = K / st.lambda;
        st.C = std::sqrt(2.0) * p * st.lambda;
        const double us = st.lambda * (a - st.x0);
        const JacobiTriple jt = jacobi(us, p);
        if (jt.cn == 0.0) return std::nullopt;  // shell on a node: the tail cannot attach
        const double s = std::min(p * w * std::abs(jt.cn), 1.0);
        const double y = ell_sign(ell) * std::atanh(std::sqrt(std::max(0.0, 1.0 - s * s)));
        st.x0_prime = a - y / lp;
        st.C_prime = (jt.cn > 0.0 ? 1.0 : -1.0) * std::sqrt(2.0) * lp;
        phi_a = st.C * jt.cn;
        match_gap = phi_a - st.C_prime / std::cosh(y);
        dphi_in = -st.C * st.lambda * jt.sn * jt.dn;
        dphi_out = -st.C_prime * lp * std::tanh(y) / std::cosh(y);
    } else {
        const double u = 1.0 / std::sqrt(2.0 - p * p);
        const double K = elliptic_K(p);
        st.lambda = lp * u;
        st.x0 = K / st.lambda;
        if (st.x0 <= a) return std::nullopt;  // interior arc would contain the cs pole
        const double us = st.lambda * (a - st.x0);
        const JacobiTriple jt = jacobi(us, p);
        if (std::abs(jt.sn) < 1e-14) return std::nullopt;
        const double cs = jt.cn / jt.sn;
        const double s = u * std::abs(cs);
        if (!(s > 0.0)) return std::nullopt;
        // the ell branch fixes the tail offset sign; a negative offset puts the
        // cosech singularity inside the exterior domain, so only ell = 2 yields
        // a normalizable tail
        const double y = ell_sign(ell) * std::asinh(1.0 / s);
        if (!(y > 0.0)) return std::nullopt;
        st.x0_prime = a - y / lp;
        st.C = std::sqrt(2.0) * st.lambda;
        st.C_prime = (cs > 0.0 ? 1.0 : -1.0) * std::sqrt(2.0) * lp;
        phi_a = st.C * cs;
        match_gap = phi_a - st.C_prime / std::sinh(y);
        dphi_in = -st.C * st.lambda * jt.dn / (jt.sn * jt.sn);
        dphi_out = -st.C_prime * lp * std::cosh(y) / (std::sinh(y) * std::sinh(y));
    }

    const double scale = std::abs(phi_a) * (1.0 + std::abs(params.alpha)) + std::abs(dphi_in) +
                         std::abs(dphi_out) + lp;
    if (std::abs(match_gap) > 1e-8 * scale)
        throw InternalError("state reconstruction broke profile continuity at the shell");
    if (std::abs(dphi_out - dphi_in - params.alpha * phi_a) > 1e-8 * scale) return std::nullopt;
    return st;
}

// Squared mass: closed-form exterior tail plus adaptive interior quadrature.
double mass_of(const StationaryState& st) {
    const double y = st.lambda_prime * (st.a - st.x0_prime);
    double tail;
    if (st.regime == Regime::focusing) {
        tail = st.C_prime * st.C_prime * (1.0 - std::tanh(y)) / st.lambda_prime;
    } else {
        if (!(y > 0.0)) throw InvalidProfileError("exterior tail is not normalizable");
        tail = st.C_prime * st.C_prime * (std::cosh(y) / std::sinh(y) - 1.0) / st.lambda_prime;
    }
    auto f = [&st](double x) {
        const double v = profile_eval(st, x);
        return v * v;
    };
    const double tol = 1e-11 * (1.0 + st.C * st.C * st.a);
    const double mid = 0.5 * st.a;
    const double interior = adaptive_simpson(f, 0.0, mid, tol) + adaptive_simpson(f, mid, st.a, tol);
    return tail + interior;
}

// Completes a state with its mass; nullopt if reconstruction rejects.
std::optional<StationaryState> full_state(Regime regime, int ell, double p, double lp,
                                          const ModelParams& params) {
    auto st = reconstruct(regime, ell, p, lp, params);
    if (!st) return std::nullopt;
    st->mu_sq = mass_of(*st);
    st->eta = (regime == Regime::focusing) ? -st->mu_sq : st->mu_sq;
    return st;
}

double matching_magnitude_scale(double lp, double p, const ModelParams& params) {
    const double w = (p > kInvSqrt2 && p < 1.0) ? 1.0 / std::sqrt(std::abs(2.0 * p * p - 1.0)) : 1.0;
    return 1.0 + std::abs(params.alpha) + lp * (1.0 + w);
}

// Bisection between valid samples of opposite sign, followed by a secant
// polish.  Returns the root only if the matching value there is genuinely
// small: a sign flip across a pole or a chart boundary is not a root.
std::optional<double> bisect_root(Regime regime, int ell, double p, const ModelParams& params,
                                  double lo, double hi, double f_lo) {
    double a = lo, b = hi, fa = f_lo;
    for (int it = 0; it < 200 && (b - a) > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, b);
         ++it) {
        const double m = 0.5 * (a + b);
        std::optional<double> fm;
        try {
            fm = eval_matching(regime, ell, p, m, params);
        } catch (const PoleError&) {
            fm = std::nullopt;
        }
        if (!fm) return std::nullopt;  // bracket straddles an inadmissible window
        if ((fa < 0.0) != (*fm < 0.0)) {
            b = m;
        } else {
            a = m;
            fa = *fm;
        }
    }
    const double root = 0.5 * (a + b);
    std::optional<double> fr;
    try {
        fr = eval_matching(regime, ell, p, root, params);
    } catch (const PoleError&) {
        return std::nullopt;
    }
    if (!fr) return std::nullopt;
    if (std::abs(*fr) > 1e-12 * matching_magnitude_scale(root, p, params)) return std::nullopt;
    return root;
}

// All matching roots on (lp_lo, lp_hi] for fixed modulus, by sign scan over a
// grid resolved against the quarter period of the shell argument.
std::vector<double> scan_roots(Regime regime, int ell, double p, const ModelParams& params,
                               double lp_lo, double lp_hi) {
    std::vector<double> roots;
    if (!(lp_hi > lp_lo)) return roots;
    double step;
    if (regime == Regime::focusing) {
        if (p >= 1.0) return roots;
        const double w = 1.0 / std::sqrt(2.0 * p * p - 1.0);
        const double K = elliptic_K(p);
        step = K / (8.0 * w * params.a);
    } else {
        const double u = 1.0 / std::sqrt(2.0 - p * p);
        const double K = elliptic_K(p);
        const double pole = K / (u * params.a);
        lp_hi = std::min(lp_hi, pole * (1.0 - 1e-9));  // the interior pole bounds the chart
        if (!(lp_hi > lp_lo)) return roots;
        step = (lp_hi - lp_lo) / 384.0;
    }
    step = std::min(step, (lp_hi - lp_lo) / 32.0);
    const std::size_t n = static_cast<std::size_t>(std::ceil((lp_hi - lp_lo) / step)) + 1;
    double prev_x = 0.0;
    std::optional<double> prev_f;
    for (std::size_t i = 0; i <= n; ++i) {
        const double x = std::min(lp_lo + static_cast<double>(i) * step, lp_hi);
        std::optional<double> f;
        try {
            f = eval_matching(regime, ell, p, x, params);
        } catch (const PoleError&) {
            f = std::nullopt;
        }
        if (prev_f && f && (*prev_f < 0.0) != (*f < 0.0)) {
            if (auto r = bisect_root(regime, ell, p, params, prev_x, x, *prev_f)) {
                if (roots.empty() || std::abs(roots.back() - *r) > 1e-9 * std::max(1.0, *r))
                    roots.push_back(*r);
            }
        }
        prev_x = x;
        prev_f = f;
        if (x >= lp_hi) break;
    }
    return roots;
}

// Root closest to a guess, searched in an expanding relative window.  Keeps
// continuation steps from jumping to a different rung of the root ladder.
std::optional<double> root_near(Regime regime, int ell, double p, const ModelParams& params,
                                double guess, double w0 = 0.02) {
    for (double r = w0; r <= 0.6; r *= 2.0) {
        const double lo = std::max(guess * (1.0 - r), 1e-8);
        const double hi = guess * (1.0 + r);
        auto roots = scan_roots(regime, ell, p, params, lo, hi);
        if (!roots.empty()) {
            auto best = std::min_element(roots.begin(), roots.end(), [guess](double x, double y) {
                return std::abs(x - guess) < std::abs(y - guess);
            });
            return *best;
        }
    }
    return std::nullopt;
}

// The root curves of the matching family fold back in the modulus direction
// (vertical tangents are generic), so continuation runs in pseudo-arclength
// over the (p, lambda_prime) plane: predict along the unit tangent, correct
// back onto the zero set by gradient-descent Newton on the active sheet.

struct TraceLimits {
    double eta_min = -110.0;
    double deta_target = 1.0;  // step control aims at this eta spacing
    double ds0 = 1e-3;
    double ds_max = 0.02;
    double lp_cap = 14.0;
    double p_floor = kInvSqrt2 + 1e-7;
    double p_ceil = 1.0 - 1e-13;
    std::size_t max_points = 4000;
};

std::optional<double> sheet_eval(Regime regime, int ell, double p, double lp, const ModelParams& params,
                                 const TraceLimits& lim) {
    if (!(p > lim.p_floor && p < lim.p_ceil) || !(lp > 1e-3 && lp < lim.lp_cap + 2.0))
        return std::nullopt;
    try {
        return eval_matching(regime, ell, p, lp, params);
    } catch (const PoleError&) {
        return std::nullopt;
    }
}

// Partial derivative with one-sided fallback: near the admissibility boundary
// one side of the stencil leaves the sheet's domain.
template <typename F>
std::optional<double> fd_partial(F&& f, double x, double h, double f0) {
    for (int k = 0; k < 3; ++k, h /= 16.0) {
        auto a = f(x + h);
        auto b = f(x - h);
        if (a && b) return (*a - *b) / (2.0 * h);
        if (a) return (*a - f0) / h;
        if (b) return (f0 - *b) / h;
    }
    return std::nullopt;
}

// Product residual inside the continuation box.  Total within the box: the
// product form needs no admissibility test.
std::optional<double> prod_eval(double p, double lp, const ModelParams& params, const TraceLimits& lim) {
    if (!(p > lim.p_floor && p < lim.p_ceil) || !(lp > 1e-3 && lp < lim.lp_cap + 2.0))
        return std::nullopt;
    return eval_focusing_product(p, lp, params);
}

double product_scale(double lp, double p, const ModelParams& params) {
    const double s = matching_magnitude_scale(lp, p, params);
    return s * s;
}

// One-equation Newton toward the zero set of the product residual, stepping
// along the gradient.
bool correct_onto_curve(double& p, double& lp, const ModelParams& params, const TraceLimits& lim) {
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    for (int it = 0; it < 25; ++it) {
        auto G = prod_eval(p, lp, params, lim);
        if (!G) return false;
        const double scale = product_scale(lp, p, params);
        if (std::abs(*G) <= 1e-14 * scale) return true;
        // near p = 1 the complete elliptic integral varies on the scale of
        // 1 - p, so the stencil must shrink with it
        const double hp = std::min(1e-7 * std::max(1.0, std::abs(p)), 0.05 * (1.0 - p));
        const double hl = 1e-7 * std::max(1.0, lp);
        auto gp_o = fd_partial([&](double q) { return prod_eval(q, lp, params, lim); }, p, hp, *G);
        auto gl_o = fd_partial([&](double q) { return prod_eval(p, q, params, lim); }, lp, hl, *G);
        if (!gp_o || !gl_o) return false;
        const double gp = *gp_o, gl = *gl_o;
        const double g2 = gp * gp + gl * gl;
        if (g2 < 1e-30) return false;
        // the achievable residual is limited by the grid of representable
        // coordinates; near p = 1 the p-derivative is enormous
        const double tol_eff =
            std::max(1e-14 * scale, 4.0 * (std::abs(gp) * kEps * std::max(1.0, std::abs(p)) +
                                           std::abs(gl) * kEps * std::max(1.0, lp)));
        if (std::abs(*G) <= tol_eff) return true;
        double dp_n = -*G * gp / g2;
        double dl_n = -*G * gl / g2;
        // keep Newton from catapulting across the p = 1 wall
        const double gap = 1.0 - p;
        if (dp_n > 0.75 * gap) {
            const double f = 0.75 * gap / dp_n;
            dp_n *= f;
            dl_n *= f;
        }
        bool stepped = false;
        for (int k = 0; k < 8; ++k, dp_n *= 0.5, dl_n *= 0.5) {
            const double pn = p + dp_n, ln = lp + dl_n;
            if (!prod_eval(pn, ln, params, lim)) continue;
            p = pn;
            lp = ln;
            stepped = true;
            break;
        }
        if (!stepped) return false;
    }
    auto G = prod_eval(p, lp, params, lim);
    return G && std::abs(*G) <= 1e-12 * product_scale(lp, p, params);
}

// The sheet carrying the root is the one with the smaller matching value.
// Points microscopically past the boundary evaluate on neither sheet; the
// previous label continues there, and both reconstructions coincide at a
// joint anyway.
int classify_sheet(double p, double lp, const ModelParams& params, const TraceLimits& lim, int fallback) {
    auto h1 = sheet_eval(Regime::focusing, 1, p, lp, params, lim);
    auto h2 = sheet_eval(Regime::focusing, 2, p, lp, params, lim);
    if (h1 && h2) return std::abs(*h1) <= std::abs(*h2) ? 1 : 2;
    if (h1) return 1;
    if (h2) return 2;
    return fallback;
}

// Pseudo-arclength trace from (p0, lp0) with initial tangent (tp0, tl0).
// Continuation runs on the product residual, so the trace crosses sheet
// joints without bookkeeping; ell_hint only labels the first point.
std::vector<StationaryState> trace_curve(const ModelParams& params, double p0, double lp0, double tp0,
                                         double tl0, int ell_hint, const TraceLimits& lim) {
    std::vector<StationaryState> out;
    double p = p0, lp = lp0;
    double tp = tp0, tl = tl0;
    {
        const double n = std::hypot(tp, tl);
        if (n == 0.0) return out;
        tp /= n;
        tl /= n;
    }
    if (!correct_onto_curve(p, lp, params, lim)) {
        // a fold point is already on the curve but its gradient degenerates;
        // accept a near-root start as-is
        p = p0;
        lp = lp0;
        auto G = prod_eval(p, lp, params, lim);
        if (!G || std::abs(*G) > 1e-9 * product_scale(lp, p, params)) return out;
    }
    int ell = classify_sheet(p, lp, params, lim, ell_hint);
    auto st0 = full_state(Regime::focusing, ell, p, lp, params);
    if (!st0) st0 = full_state(Regime::focusing, 3 - ell, p, lp, params);
    if (!st0) return out;
    out.push_back(*st0);

    double ds = lim.ds0;
    int rejects = 0;
    while (out.size() < lim.max_points && rejects < 60) {
        // a candidate counts only if it converges AND moves forward, since a
        // correction can legitimately converge backward onto the traced tail;
        // displaced predictors cover the rare corrector miss
        double np = 0.0, nlp = 0.0;
        bool ok = false;
        for (double h : {0.0, 0.25 * ds, -0.25 * ds, 0.5 * ds, -0.5 * ds}) {
            double cp = p + ds * tp - h * tl;
            double cl = lp + ds * tl + h * tp;
            if (!correct_onto_curve(cp, cl, params, lim)) continue;
            const double dp_ = cp - p, dl_ = cl - lp;
            const double n = std::hypot(dp_, dl_);
            if (!(n > 1e-14 && (dp_ * tp + dl_ * tl) > 0.2 * n && n < 8.0 * ds + 1e-6)) continue;
            np = cp;
            nlp = cl;
            ok = true;
            break;
        }
        if (!ok) {
            ds *= 0.5;
            ++rejects;
            if (ds < 1e-7) break;
            continue;
        }
        const int nell = classify_sheet(np, nlp, params, lim, ell);
        auto st = full_state(Regime::focusing, nell, np, nlp, params);
        if (!st) st = full_state(Regime::focusing, 3 - nell, np, nlp, params);
        if (!st) {
            ds *= 0.5;
            ++rejects;
            if (ds < 1e-7) break;
            continue;
        }
        const double deta = std::abs(st->eta - out.back().eta);
        if (deta > 3.0 * lim.deta_target && ds > 2e-6) {
            ds *= 0.5;
            ++rejects;
            continue;
        }
        rejects = 0;
        const double n = std::hypot(np - p, nlp - lp);
        tp = (np - p) / n;
        tl = (nlp - lp) / n;
        p = np;
        lp = nlp;
        ell = nell;
        out.push_back(*st);
        if (st->eta <= lim.eta_min) break;
        if (deta < 0.5 * lim.deta_target) ds = std::min(ds * 1.4, lim.ds_max);
    }
    return out;
}

// Tangent of the zero curve at a point: perpendicular to the gradient of the
// product residual.
std::optional<std::pair<double, double>> curve_tangent(double p, double lp, const ModelParams& params,
                                                       const TraceLimits& lim) {
    auto G0 = prod_eval(p, lp, params, lim);
    if (!G0) return std::nullopt;
    const double hp = std::min(1e-7 * std::max(1.0, std::abs(p)), 0.05 * (1.0 - p));
    const double hl = 1e-7 * std::max(1.0, lp);
    auto gp = fd_partial([&](double q) { return prod_eval(q, lp, params, lim); }, p, hp, *G0);
    auto gl = fd_partial([&](double q) { return prod_eval(p, q, params, lim); }, lp, hl, *G0);
    if (!gp || !gl) return std::nullopt;
    const double n = std::hypot(*gp, *gl);
    if (n < 1e-30) return std::nullopt;
    return std::make_pair(-*gl / n, *gp / n);
}

}  // namespace

std::optional<double> matching_focusing(double p, double lambda_prime, int ell, const ModelParams& params) {
    params.validate();
    require_ell(ell);
    require_scale(lambda_prime);
    validate_modulus(Regime::focusing, p);
    return eval_focusing(p, lambda_prime, ell, params);
}

std::optional<double> matching_defocusing(double p, double lambda_prime, int ell, const ModelParams& params) {
    params.validate();
    require_ell(ell);
    require_scale(lambda_prime);
    validate_modulus(Regime::defocusing, p);
    return eval_defocusing(p, lambda_prime, ell, params);
}

double profile_eval(const StationaryState& st, double x) {
    if (x <= 0.0) return 0.0;
    if (x <= st.a) {
        const double u = st.lambda * (x - st.x0);
        const JacobiTriple jt = jacobi(u, st.p);
        if (st.regime == Regime::focusing) return st.C * jt.cn;
        if (std::abs(jt.sn) < 1e-300) throw InvalidProfileError("interior arc hits the cs pole");
        return st.C * jt.cn / jt.sn;
    }
    const double v = st.lambda_prime * (x - st.x0_prime);
    if (st.regime == Regime::focusing) return st.C_prime / std::cosh(v);
    if (!(v > 0.0)) throw InvalidProfileError("exterior tail is singular at this point");
    return st.C_prime / std::sinh(v);
}

double norm_mu_sq(const StationaryState& st) {
    if (!(st.lambda_prime > 0.0) || !(st.lambda > 0.0))
        throw DomainError("state scales must be positive");
    if (st.regime == Regime::defocusing && st.x0 <= st.a)
        throw InvalidProfileError("interior arc contains the cs pole; the mass integral diverges");
    return mass_of(st);
}

std::vector<StationaryState> solve_branch(Regime regime, int ell, const ModelParams& params,
                                          const std::vector<double>& p_grid, double lambda_prime_max) {
    params.validate();
    require_ell(ell);
    for (double p : p_grid) validate_modulus(regime, p);

    const double L0 = (lambda_prime_max > 0.0) ? lambda_prime_max : 20.0 / params.a;
    std::vector<StationaryState> states;
    for (double p : p_grid) {
        if (regime == Regime::focusing && p >= 1.0) continue;  // degenerate column
        std::vector<double> roots = scan_roots(regime, ell, p, params, 1e-6, L0);
        if (lambda_prime_max <= 0.0 && regime == Regime::focusing) {
            // extend while the top octave still produces roots; the ladder in
            // lambda_prime is infinite (one rung per interior node), so growth
            // is capped instead of chased
            double L = L0;
            const double cap = 8.0 * L0;
            auto in_top = [&L](double r) { return r > 0.5 * L; };
            while (L < cap && std::any_of(roots.begin(), roots.end(), in_top)) {
                const double Lp = L;
                L *= 2.0;
                auto more = scan_roots(regime, ell, p, params, Lp, L);
                roots.insert(roots.end(), more.begin(), more.end());
            }
        }
        for (double r : roots) {
            if (auto st = full_state(regime, ell, p, r, params)) states.push_back(*st);
        }
    }
    std::sort(states.begin(), states.end(),
              [](const StationaryState& x, const StationaryState& y) { return x.Omega < y.Omega; });
    return states;
}

std::vector<BifurcationPoint> find_bifurcations(Regime regime, int ell, const ModelParams& params,
                                                const BifurcationBox& box) {
    params.validate();
    require_ell(ell);
    if (!(box.p_hi > box.p_lo) || !(box.lp_hi > box.lp_lo))
        throw DomainError("bifurcation search box is empty");

    // coarse columns; fold seeds are extrema of the root curves plus columns
    // where the root count changes
    const std::size_t ncol = 61;
    std::vector<double> ps(ncol);
    std::vector<std::vector<double>> cols(ncol);
    for (std::size_t j = 0; j < ncol; ++j) {
        ps[j] = box.p_lo + (box.p_hi - box.p_lo) * static_cast<double>(j) / static_cast<double>(ncol - 1);
        try {
            validate_modulus(regime, ps[j]);
        } catch (const DomainError&) {
            continue;
        }
        cols[j] = scan_roots(regime, ell, ps[j], params, box.lp_lo, box.lp_hi);
    }

    std::vector<std::pair<double, double>> seeds;
    auto nearest = [](const std::vector<double>& v, double x) -> std::optional<double> {
        if (v.empty()) return std::nullopt;
        auto it = std::min_element(v.begin(), v.end(),
                                   [x](double u, double w) { return std::abs(u - x) < std::abs(w - x); });
        return *it;
    };
    const double win = 0.1 * (box.lp_hi - box.lp_lo);
    for (std::size_t j = 1; j + 1 < ncol; ++j) {
        for (double r : cols[j]) {
            auto rl = nearest(cols[j - 1], r);
            auto rr = nearest(cols[j + 1], r);
            if (rl && rr && std::abs(*rl - r) < win && std::abs(*rr - r) < win) {
                if ((r - *rl) * (*rr - r) < 0.0) seeds.emplace_back(ps[j], r);  // curve extremum
            }
        }
        if (cols[j].size() != cols[j + 1].size()) {
            // a root pair appeared or vanished between the columns
            const auto& big = cols[j].size() > cols[j + 1].size() ? cols[j] : cols[j + 1];
            const auto& small = cols[j].size() > cols[j + 1].size() ? cols[j + 1] : cols[j];
            for (double r : big) {
                auto m = nearest(small, r);
                if (!m || std::abs(*m - r) > 0.05 * std::max(1.0, r))
                    seeds.emplace_back(0.5 * (ps[j] + ps[j + 1]), r);
            }
        }
    }

    // damped 2D Newton on (H, dH/dp); the modulus derivative is a Richardson
    // extrapolated central difference, certified by the two-step comparison
    auto H_of = [&](double p, double lp) -> std::optional<double> {
        try {
            validate_modulus(regime, p);
            require_scale(lp);
            return eval_matching(regime, ell, p, lp, params);
        } catch (const Error&) {
            return std::nullopt;
        }
    };
    auto Hp_of = [&](double p, double lp) -> std::optional<double> {
        const double h = 6e-6 * std::max(1.0, std::abs(p));
        auto d = [&](double hh) -> std::optional<double> {
            auto f1 = H_of(p + hh, lp), f2 = H_of(p - hh, lp);
            if (!f1 || !f2) return std::nullopt;
            return (*f1 - *f2) / (2.0 * hh);
        };
        auto d1 = d(h), d2 = d(0.5 * h);
        if (!d1 || !d2) return std::nullopt;
        return (4.0 * *d2 - *d1) / 3.0;
    };

    std::vector<BifurcationPoint> found;
    for (auto [p0, lp0] : seeds) {
        double p = p0, lp = lp0;
        bool ok = false;
        for (int it = 0; it < 80; ++it) {
            auto F1 = H_of(p, lp);
            auto F2 = Hp_of(p, lp);
            if (!F1 || !F2) break;
            const double scale = matching_magnitude_scale(lp, p, params);
            if (std::abs(*F1) <= 1e-11 * scale && std::abs(*F2) <= 1e-11 * scale) {
                ok = true;
                break;
            }
            const double hp = 1e-6 * std::max(1.0, std::abs(p));
            const double hl = 1e-6 * std::max(1.0, std::abs(lp));
            auto F1p = H_of(p + hp, lp), F1m = H_of(p - hp, lp);
            auto F1l = H_of(p, lp + hl), F1k = H_of(p, lp - hl);
            auto F2p = Hp_of(p + hp, lp), F2m = Hp_of(p - hp, lp);
            auto F2l = Hp_of(p, lp + hl), F2k = Hp_of(p, lp - hl);
            if (!F1p || !F1m || !F1l || !F1k || !F2p || !F2m || !F2l || !F2k) break;
            const double J11 = (*F1p - *F1m) / (2.0 * hp), J12 = (*F1l - *F1k) / (2.0 * hl);
            const double J21 = (*F2p - *F2m) / (2.0 * hp), J22 = (*F2l - *F2k) / (2.0 * hl);
            const double det = J11 * J22 - J12 * J21;
            if (std::abs(det) < 1e-30) break;
            const double dp = -(J22 * *F1 - J12 * *F2) / det;
            const double dl = -(-J21 * *F1 + J11 * *F2) / det;
            const double n0 = std::hypot(*F1, *F2);
            double t = 1.0;
            bool stepped = false;
            for (int bt = 0; bt < 12; ++bt, t *= 0.5) {
                const double pn = p + t * dp, ln = lp + t * dl;
                auto G1 = H_of(pn, ln);
                auto G2 = Hp_of(pn, ln);
                if (!G1 || !G2) continue;
                if (std::hypot(*G1, *G2) < n0) {
                    p = pn;
                    lp = ln;
                    stepped = true;
                    break;
                }
            }
            if (!stepped) break;  // divergent seed, discarded
        }
        if (!ok) continue;
        if (!(p > box.p_lo - 1e-3 && p < box.p_hi + 1e-3 && lp > box.lp_lo - 1e-3 && lp < box.lp_hi + 1e-3))
            continue;
        bool dup = false;
        for (const auto& b : found)
            if (std::abs(b.p - p) < 1e-7 && std::abs(b.lambda_prime - lp) < 1e-6 * std::max(1.0, lp))
                dup = true;
        if (dup) continue;
        auto st = full_state(regime, ell, p, lp, params);
        if (!st) st = full_state(regime, 3 - ell, p, lp, params);
        if (!st) continue;  // fold outside the reconstructible charts
        BifurcationPoint bp;
        bp.p = p;
        bp.lambda_prime = lp;
        bp.ell = st->ell;
        bp.Omega = st->Omega;
        bp.eta = st->eta;
        found.push_back(bp);
    }
    std::sort(found.begin(), found.end(), [](const BifurcationPoint& x, const BifurcationPoint& y) {
        return std::abs(x.eta) < std::abs(y.eta);
    });
    for (std::size_t i = 0; i < found.size(); ++i) found[i].n = static_cast<int>(i) + 1;
    return found;
}

SlopeReport stability_slope(const std::vector<StationaryState>& branch, double tol) {
    if (branch.size() < 3) throw InsufficientDataError("slope classification needs at least 3 states");
    std::vector<StationaryState> b = branch;
    std::sort(b.begin(), b.end(),
              [](const StationaryState& x, const StationaryState& y) { return -x.Omega < -y.Omega; });
    SlopeReport rep;
    const std::size_t n = b.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t il = (i == 0) ? 0 : i - 1;
        const std::size_t ir = (i + 1 == n) ? i : i + 1;
        const double dom = (-b[ir].Omega) - (-b[il].Omega);
        if (std::abs(dom) < 1e-14) throw InsufficientDataError("branch states collapse in omega");
        SlopeEntry e;
        e.state = b[i];
        e.slope = (b[ir].mu_sq - b[il].mu_sq) / dom;
        e.classification = (e.slope > tol) ? "stable" : (e.slope < -tol) ? "unstable" : "marginal";
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

RealReductionReport check_real_reduction(const std::vector<std::complex<double>>& psi, double dx) {
    if (psi.size() < 3) throw InsufficientDataError("real-reduction check needs at least 3 samples");
    if (!(dx > 0.0)) throw DomainError("grid spacing must be positive");
    RealReductionReport rep;
    std::size_t imax = 0;
    double amax = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double m = std::abs(psi[i]);
        if (m > amax) {
            amax = m;
            imax = i;
        }
    }
    rep.phase = (amax > 0.0) ? std::arg(psi[imax]) : 0.0;
    const std::complex<double> rot = std::polar(1.0, -rep.phase);
    for (std::size_t i = 1; i + 1 < psi.size(); ++i) {
        const std::complex<double> d = (psi[i + 1] - psi[i - 1]) / (2.0 * dx);
        const double w = std::abs(d * std::conj(psi[i]) - psi[i] * std::conj(d));
        rep.max_wronskian = std::max(rep.max_wronskian, w);
    }
    for (const auto& z : psi) rep.residual_imag = std::max(rep.residual_imag, std::abs((rot * z).imag()));
    return rep;
}

StationaryState ground_state_at_mu_sq(const ModelParams& params, double mu_sq_target) {
    params.validate();
    if (!(mu_sq_target > 0.0)) throw DomainError("mass target must be positive");
    const SpectralData sd = bound_state(params);
    if (!sd.has_bound_state) throw DomainError("the ground branch continues from the linear bound state");

    double guess = sd.h;
    auto mass_at = [&](double p) -> std::optional<double> {
        auto r = root_near(Regime::focusing, 2, p, params, guess);
        if (!r) return std::nullopt;
        auto st = full_state(Regime::focusing, 2, p, *r, params);
        if (!st) return std::nullopt;
        guess = st->lambda_prime;
        return st->mu_sq;
    };

    const double p_hi0 = 1.0 - 1e-10;
    auto m_hi = mass_at(p_hi0);
    if (!m_hi) throw NumericalError("ground branch root lost near the linear limit");
    if (*m_hi >= mu_sq_target) throw DomainError("mass target below the resolvable linear limit");
    double p_hi = p_hi0;
    double p_lo = p_hi0;
    std::optional<double> m_lo;
    for (double step = 4e-10; step < 0.3; step *= 4.0) {
        p_lo = 1.0 - step;
        if (p_lo <= kInvSqrt2 + 1e-6) {
            p_lo = kInvSqrt2 + 1e-6;
            m_lo = mass_at(p_lo);
            break;
        }
        m_lo = mass_at(p_lo);
        if (m_lo && *m_lo > mu_sq_target) break;
        if (m_lo) p_hi = p_lo;  // tighten from above while the mass is still low
    }
    if (!m_lo || !(*m_lo > mu_sq_target))
        throw DomainError("mass target beyond the continued ground branch");

    for (int it = 0; it < 200 && (p_hi - p_lo) > 4.0 * std::numeric_limits<double>::epsilon(); ++it) {
        const double pm = 0.5 * (p_lo + p_hi);
        auto mm = mass_at(pm);
        if (!mm) throw NumericalError("ground branch root lost during mass bisection");
        if (*mm > mu_sq_target)
            p_lo = pm;
        else
            p_hi = pm;
    }
    const double pf = 0.5 * (p_lo + p_hi);
    auto r = root_near(Regime::focusing, 2, pf, params, guess);
    if (!r) throw NumericalError("ground branch root lost at the final modulus");
    auto st = full_state(Regime::focusing, 2, pf, *r, params);
    if (!st) throw NumericalError("ground state reconstruction failed at the final modulus");
    return *st;
}

std::vector<StationaryState> ground_branch(const ModelParams& params, double eta_min, std::size_t n_points) {
    params.validate();
    if (!(eta_min < 0.0)) throw DomainError("the focusing ground branch lives at negative eta");
    if (n_points < 2) throw DomainError("a branch needs at least 2 points");
    const SpectralData sd = bound_state(params);
    if (!sd.has_bound_state) throw DomainError("the ground branch continues from the linear bound state");

    const double p0 = 1.0 - 1e-6;
    auto r0 = root_near(Regime::focusing, 2, p0, params, sd.h);
    if (!r0) throw NumericalError("no matching root near the linear bound state");
    TraceLimits lim;
    lim.eta_min = eta_min;
    lim.deta_target = std::abs(eta_min) / static_cast<double>(n_points - 1);
    lim.max_points = 30 * n_points;
    lim.lp_cap = std::sqrt(std::abs(eta_min)) + 4.0;
    auto t = curve_tangent(p0, *r0, params, lim);
    if (!t) throw NumericalError("no curve tangent at the linear bound state");
    double tp = t->first, tl = t->second;
    if (tp > 0.0) {
        tp = -tp;
        tl = -tl;
    }
    auto curve = trace_curve(params, p0, *r0, tp, tl, 2, lim);
    if (curve.size() < 2) throw NumericalError("ground branch continuation stalled");
    return curve;
}

std::vector<BranchPoint> eta_omega_dataset(const ModelParams& params, double eta_min) {
    params.validate();
    if (!(eta_min < 0.0)) throw DomainError("the diagram range must extend to negative eta");
    std::vector<BranchPoint> out;
    auto push = [&out](const std::string& label, const StationaryState& st) {
        BranchPoint bp;
        bp.label = label;
        bp.eta = st.eta;
        bp.Omega = st.Omega;
        bp.p = st.p;
        bp.lambda_prime = st.lambda_prime;
        bp.ell = st.ell;
        out.push_back(std::move(bp));
    };

    for (const auto& st : ground_branch(params, eta_min, 140)) push("Omega0", st);

    const double lp_hi = std::sqrt(std::abs(eta_min)) + 1.0;
    BifurcationBox box{kInvSqrt2 + 0.02, 0.995, 0.2, lp_hi};
    std::vector<BifurcationPoint> folds;
    for (int ell : {1, 2}) {
        for (const auto& b : find_bifurcations(Regime::focusing, ell, params, box)) {
            bool dup = false;
            for (const auto& g : folds)
                if (std::abs(g.p - b.p) < 1e-6 && std::abs(g.lambda_prime - b.lambda_prime) < 1e-5)
                    dup = true;
            if (!dup && b.eta > eta_min && b.eta < 0.0) folds.push_back(b);
        }
    }
    std::sort(folds.begin(), folds.end(), [](const BifurcationPoint& x, const BifurcationPoint& y) {
        return std::abs(x.eta) < std::abs(y.eta);
    });

    TraceLimits lim;
    lim.eta_min = eta_min;
    lim.deta_target = std::abs(eta_min) / 90.0;
    lim.lp_cap = std::sqrt(std::abs(eta_min)) + 4.0;
    lim.max_points = 3000;
    int n = 0;
    for (const auto& b : folds) {
        if (n >= 2) break;
        ++n;
        // near the fold the matching function is flat (its gradient vanishes
        // there), so the arms are picked up a little past it, where the two
        // rungs are already separated
        const double p_seed = b.p + 5e-4;
        std::vector<double> rungs;
        {
            const double w_lo = b.lambda_prime - 0.35, w_hi = b.lambda_prime + 0.45;
            const int nscan = 800;
            double prev_x = w_lo;
            auto prev = sheet_eval(Regime::focusing, b.ell, p_seed, prev_x, params, lim);
            for (int i = 1; i <= nscan; ++i) {
                const double x = w_lo + (w_hi - w_lo) * i / nscan;
                auto cur = sheet_eval(Regime::focusing, b.ell, p_seed, x, params, lim);
                if (prev && cur && *prev * *cur <= 0.0) {
                    double lo = prev_x, hi = x;
                    for (int it = 0; it < 80; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        auto fm = sheet_eval(Regime::focusing, b.ell, p_seed, mid, params, lim);
                        if (!fm) break;
                        if (*prev * *fm <= 0.0)
                            hi = mid;
                        else
                            lo = mid;
                    }
                    rungs.push_back(0.5 * (lo + hi));
                }
                prev = cur;
                prev_x = x;
            }
        }
        if (rungs.size() < 2) continue;
        std::sort(rungs.begin(), rungs.end(), [&](double x, double y) {
            return std::abs(x - b.lambda_prime) < std::abs(y - b.lambda_prime);
        });
        rungs.resize(2);
        std::sort(rungs.begin(), rungs.end());

        auto trace_arm = [&](double rung) {
            auto t = curve_tangent(p_seed, rung, params, lim);
            double tp = t ? t->first : 1.0, tl = t ? t->second : 0.0;
            if (tp < 0.0) {
                tp = -tp;
                tl = -tl;
            }
            return trace_curve(params, p_seed, rung, tp, tl, b.ell, lim);
        };
        auto armA = trace_arm(rungs[0]);
        auto armB = trace_arm(rungs[1]);
        auto mean_omega = [](const std::vector<StationaryState>& v) {
            double s = 0.0;
            for (const auto& q : v) s += q.Omega;
            return v.empty() ? 0.0 : s / static_cast<double>(v.size());
        };
        const bool a_plus = mean_omega(armA) >= mean_omega(armB);
        const std::string tag = "Omega" + std::to_string(n);
        // the fold itself belongs to both arms
        if (auto fs = full_state(Regime::focusing, b.ell, b.p, b.lambda_prime, params)) {
            push(tag + "+", *fs);
            push(tag + "-", *fs);
        }
        for (const auto& st : armA) push(tag + (a_plus ? "+" : "-"), st);
        for (const auto& st : armB) push(tag + (a_plus ? "-" : "+"), st);
    }
    return out;
}

}  // namespace winter
