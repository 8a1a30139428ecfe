#include "winter/linear.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "winter/dynamics.hpp"
#include "winter/errors.hpp"
#include "winter/parallel.hpp"
#include "winter/quadrature.hpp"
#include "winter/specfun.hpp"

namespace winter {
namespace {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
constexpr cplx kImag{0.0, 1.0};

// Reflection factor rho(k) = alpha w / (2i + alpha w), w = 2i sin(ka) e^{ika} / k,
// for real k; the removable singularity at k = 0 is filled by series.
cplx rho_factor(double k, double a, double alpha) {
    const double ka = k * a;
    cplx w;
    if (std::abs(ka) < 1e-8) {
        w = 2.0 * kImag * a * std::polar(1.0, ka) * (1.0 - ka * ka / 6.0);
    } else {
        w = 2.0 * kImag * std::sin(ka) * std::polar(1.0, ka) / k;
    }
    const cplx aw = alpha * w;
    return aw / (2.0 * kImag + aw);
}

// F(k) = 2 Re[(e^{ik theta} - 1) rho(k) / (2ik)]; real for real k, finite at k = 0.
double shell_integrand(double k, double theta, double a, double alpha) {
    const double kt = k * theta;
    cplx pre;  // (e^{ik theta} - 1) / (2ik), written to avoid cancellation at small k theta
    if (std::abs(kt) < 1e-8) {
        pre = cplx(0.5 * theta, 0.25 * k * theta * theta);
    } else {
        const double sh = std::sin(0.5 * kt);
        pre = cplx(std::sin(kt) / (2.0 * k), sh * sh / k);
    }
    return 2.0 * (pre * rho_factor(k, a, alpha)).real();
}

// Degree-2 jets in k for the integration-by-parts tail of the shell quadrature.
struct Jet {
    cplx f{0.0, 0.0};
    cplx d1{0.0, 0.0};
    cplx d2{0.0, 0.0};
};

Jet jmul(const Jet& x, const Jet& y) {
    return {x.f * y.f, x.f * y.d1 + x.d1 * y.f, x.f * y.d2 + 2.0 * x.d1 * y.d1 + x.d2 * y.f};
}

Jet jdiv(const Jet& x, const Jet& y) {
    const cplx f = x.f / y.f;
    const cplx d1 = (x.d1 - f * y.d1) / y.f;
    const cplx d2 = (x.d2 - 2.0 * d1 * y.d1 - f * y.d2) / y.f;
    return {f, d1, d2};
}

Jet jscale(const cplx& c, const Jet& x) { return {c * x.f, c * x.d1, c * x.d2}; }

Jet jexp_i(double c, double k) {  // e^{i c k}
    const cplx e = std::polar(1.0, c * k);
    return {e, kImag * c * e, -c * c * e};
}

Jet jsin(double c, double k) {  // sin(c k)
    const double s = std::sin(c * k);
    const double co = std::cos(c * k);
    return {s, c * co, -c * c * s};
}

Jet jinv(double k) {  // 1/k
    const double r = 1.0 / k;
    return {r, -r * r, 2.0 * r * r * r};
}

// Jet of g(k) = (e^{ik theta} - 1) rho(k) / (2ik); only used at k >= 64 where
// every factor is well conditioned.
Jet g_jet(double k, double theta, double a, double alpha) {
    const Jet invk = jinv(k);
    const Jet w = jscale(2.0 * kImag, jmul(jmul(jsin(a, k), jexp_i(a, k)), invk));
    const Jet aw = jscale(alpha, w);
    Jet den = aw;
    den.f += 2.0 * kImag;
    const Jet rho = jdiv(aw, den);
    Jet num = jexp_i(theta, k);
    num.f -= 1.0;
    const Jet pre = jmul(num, jscale(-0.5 * kImag, invk));
    return jmul(pre, rho);
}

struct RealJet {
    double f = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

RealJet f_jet(double k, double theta, double a, double alpha) {
    const Jet g = g_jet(k, theta, a, alpha);
    return {2.0 * g.f.real(), 2.0 * g.d1.real(), 2.0 * g.d2.real()};
}

// Magnitude of the second integration-by-parts iterate F2; the dropped tail is
// the oscillatory integral of F2 against e^{-i k^2 t}, so one further
// integration by parts bounds it by max |F2| near K over 2 K t.
double f2_magnitude(double k, double theta, double t, double a, double alpha) {
    const RealJet F = f_jet(k, theta, a, alpha);
    const cplx inv2it = 1.0 / (2.0 * kImag * t);
    const double k2 = k * k;
    const double k3 = k2 * k;
    const cplx f1 = inv2it * (F.d1 / k - F.f / k2);
    const cplx f1p = inv2it * (F.d2 / k - 2.0 * F.d1 / k2 + 2.0 * F.f / k3);
    const cplx f2 = inv2it * (f1p / k - f1 / k2);
    return std::abs(f2);
}

double tail_remainder_estimate(double K, double theta, double t, double a, double alpha) {
    auto mag = [&](double k) { return f2_magnitude(k, theta, t, a, alpha); };
    // |F2| decays like a power of 1/k; sampling three points guards against an
    // accidental zero at K itself
    const double peak = std::max({mag(K), mag(1.5 * K), mag(2.0 * K)});
    return 3.0 * peak / (2.0 * K * t);
}

// T(theta, t) = int_0^inf e^{-i k^2 t} F(k) dk: phase-resolved Gauss panels on
// [0, K] plus a two-term integration-by-parts tail, K chosen so the dropped
// remainder estimate is below tol/2.
cplx shell_T(double theta, double t, double a, double alpha, double tol) {
    if (theta == 0.0 || alpha == 0.0) return {0.0, 0.0};
    double K = 64.0;
    double rem = tail_remainder_estimate(K, theta, t, a, alpha);
    while (rem > 0.5 * tol && K < 1024.0) {
        K *= 2.0;
        rem = tail_remainder_estimate(K, theta, t, a, alpha);
    }
    if (rem > 0.5 * tol) throw AccuracyError("shell quadrature: truncation tail above tolerance", rem);
    cplx total{0.0, 0.0};
    double k0 = 0.0;
    while (k0 < K) {
        const double width = 6.0 / (2.0 * k0 * t + theta + 2.0 * a + 1.0);
        const double k1 = std::min(K, k0 + width);
        total += gl16_panel(
            [&](double k) { return std::polar(1.0, -k * k * t) * shell_integrand(k, theta, a, alpha); }, k0, k1);
        k0 = k1;
    }
    const RealJet F = f_jet(K, theta, a, alpha);
    const cplx inv2it = 1.0 / (2.0 * kImag * t);
    const cplx f1 = inv2it * (F.d1 / K - F.f / (K * K));
    total += std::polar(1.0, -K * K * t) * (cplx(F.f, 0.0) + f1) / (2.0 * kImag * K * t);
    return total;
}

// Boundary Fresnel term (pi / sqrt 2) e^{-i pi/4} (C + iS)(theta / sqrt(2 pi t)).
cplx j_term(double theta, double t) {
    const FresnelCS F = fresnel(theta / std::sqrt(2.0 * kPi * t));
    return kPi / std::sqrt(2.0) * std::polar(1.0, -0.25 * kPi) * cplx(F.C, F.S);
}

// Removes the bound-state component (discrete-normalized on the grid of psi0).
WaveField project_out_bound_state(const WaveField& psi0, const ModelParams& params) {
    WaveField out = psi0;
    const SpectralData sd = bound_state(params);
    if (!sd.has_bound_state) return out;
    WaveField eig = psi0;
    for (std::size_t j = 0; j < eig.size(); ++j) eig.values[j] = eigenfunction(sd, params, eig.x(j));
    eig.values.front() = 0.0;
    eig.values.back() = 0.0;
    const double nrm = std::sqrt(norm_sq(eig));
    for (auto& v : eig.values) v /= nrm;
    const cplx c = inner(eig, out);
    for (std::size_t j = 0; j < out.size(); ++j) out.values[j] -= c * eig.values[j];
    return out;
}

// Natural cubic spline on a uniform grid with complex values.
struct CubicSpline {
    double h = 0.0;
    std::vector<cplx> y;
    std::vector<cplx> m;  // second derivatives at the nodes

    cplx eval(double s) const {
        const std::size_t M = y.size() - 1;
        double u = s / h;
        if (u < 0.0) u = 0.0;
        std::size_t i = static_cast<std::size_t>(u);
        if (i >= M) i = M - 1;
        const double d = s - static_cast<double>(i) * h;
        const double e = h - d;
        return (m[i] * (e * e * e) + m[i + 1] * (d * d * d)) / (6.0 * h) + (y[i] - m[i] * (h * h / 6.0)) * (e / h) +
               (y[i + 1] - m[i + 1] * (h * h / 6.0)) * (d / h);
    }
};

CubicSpline build_shell_T_spline(double theta_max, double t, double a, double alpha, std::size_t intervals) {
    CubicSpline sp;
    const std::size_t M = intervals;
    sp.h = theta_max / static_cast<double>(M);
    sp.y.resize(M + 1);
    auto* yp = sp.y.data();
    const double h = sp.h;
    parallel_for(M + 1, [&, yp, h](std::size_t j) { yp[j] = shell_T(static_cast<double>(j) * h, t, a, alpha, 1e-7); });
    sp.m.assign(M + 1, cplx{0.0, 0.0});
    if (M >= 2) {
        std::vector<double> diag(M - 1, 4.0);
        std::vector<cplx> rhs(M - 1);
        for (std::size_t i = 1; i < M; ++i) {
            rhs[i - 1] = 6.0 * (sp.y[i + 1] - 2.0 * sp.y[i] + sp.y[i - 1]) / (h * h);
        }
        for (std::size_t i = 1; i + 1 < M; ++i) {
            const double w = 1.0 / diag[i - 1];
            diag[i] -= w;
            rhs[i] -= w * rhs[i - 1];
        }
        sp.m[M - 1] = rhs[M - 2] / diag[M - 2];
        for (std::size_t i = M - 2; i >= 1; --i) {
            sp.m[i] = (rhs[i - 1] - sp.m[i + 1]) / diag[i - 1];
        }
    }
    return sp;
}

}  // namespace

SpectralData bound_state(const ModelParams& params) {
    params.validate();
    SpectralData sd;
    const double prod = params.a * params.alpha;
    if (prod >= -1.0) return sd;
    const double h = (-prod + lambert_w0(prod * std::exp(prod))) / (2.0 * params.a);
    const double ha = h * params.a;
    sd.has_bound_state = true;
    sd.h = h;
    sd.E = -h * h;
    sd.B = std::sqrt(2.0 * h / (std::exp(ha) * std::sinh(ha) - ha));
    return sd;
}

double eigenfunction(const SpectralData& sd, const ModelParams& params, double x) {
    if (!sd.has_bound_state) throw DomainError("eigenfunction: no bound state for these parameters");
    if (!(x >= 0.0)) throw DomainError("eigenfunction: x must be nonnegative");
    const double a = params.a;
    const double h = sd.h;
    if (x <= a) return sd.B * std::sinh(h * x);
    return sd.B * std::exp(h * a) * std::sinh(h * a) * std::exp(-h * x);
}

EigenfunctionBoundsReport eigenfunction_bounds_check(const ModelParams& params) {
    EigenfunctionBoundsReport rep;
    const SpectralData sd = bound_state(params);
    if (!sd.has_bound_state) return rep;
    rep.has_bound_state = true;
    const double a = params.a;
    const double h = sd.h;
    rep.sup_form_sinh_ha = sd.B * std::sinh(h * a);
    rep.sup_form_sinh_a = sd.B * std::sinh(a);
    // dense sampling with the kink at x = a included exactly
    double sup = 0.0;
    const std::size_t n_in = 4000;
    for (std::size_t j = 0; j <= n_in; ++j) {
        sup = std::max(sup, eigenfunction(sd, params, a * static_cast<double>(j) / n_in));
    }
    const double x_max = a + 40.0 / h;
    const std::size_t n_out = 16000;
    for (std::size_t j = 0; j <= n_out; ++j) {
        const double x = a + (x_max - a) * static_cast<double>(j) / n_out;
        sup = std::max(sup, eigenfunction(sd, params, x));
    }
    rep.sup_measured = sup;
    auto matches = [&](double form) { return std::abs(sup - form) <= 1e-12 * std::max(1.0, std::abs(form)); };
    if (matches(rep.sup_form_sinh_ha)) {
        rep.matched_variant = "sinh(h a)";
    } else if (matches(rep.sup_form_sinh_a)) {
        rep.matched_variant = "sinh(a)";
    } else {
        rep.matched_variant = "neither";
    }
    auto psi = [&](double x) { return eigenfunction(sd, params, x); };
    rep.l1_measured = adaptive_simpson(psi, 0.0, a, 1e-13) + adaptive_simpson(psi, a, a + 60.0 / h, 1e-13);
    rep.l1_form = sd.B * (std::exp(h * a) - 1.0) / h;
    rep.l1_ratio = rep.l1_measured / rep.l1_form;
    return rep;
}

cplx calG(cplx k, const ModelParams& params) {
    params.validate();
    return 2.0 * kImag * k - params.alpha * (1.0 - std::exp(2.0 * kImag * k * params.a));
}

cplx resolvent_kernel(double x, double y, cplx k, const ModelParams& params) {
    params.validate();
    if (!(x >= 0.0) || !(y >= 0.0)) throw DomainError("resolvent_kernel: x and y must be nonnegative");
    if (!(k.imag() > 0.0)) throw DomainError("resolvent_kernel: need Im k > 0");
    const double a = params.a;
    const double alpha = params.alpha;
    const cplx i2k = 2.0 * kImag * k;
    const cplx G = calG(k, params);
    if (std::abs(G) < 1e-13 * (std::abs(i2k) + 2.0 * std::abs(alpha))) {
        throw PoleError("resolvent_kernel: spectral parameter at a zero of the secular function");
    }
    auto E = [&](double s) { return std::exp(kImag * k * s); };
    const cplx K0 = kImag / (2.0 * k) * E(std::abs(x - y));
    cplx sum = i2k * E(x + y) * (1.0 - alpha * E(2.0 * a) / G);
    const cplx c = i2k * alpha / G;
    sum += c * E(x + std::abs(y - a) + a);
    sum += c * E(std::abs(x - a) + y + a);
    sum -= c * E(std::abs(x - a) + std::abs(y - a));
    return K0 - sum / (4.0 * k * k);
}

cplx q_factor(cplx k, double x, double y, const ModelParams& params) {
    params.validate();
    if (!(x >= 0.0) || !(y >= 0.0)) throw DomainError("q_factor: x and y must be nonnegative");
    const double a = params.a;
    auto E = [&](double s) { return std::exp(kImag * k * s); };
    return -E(x + y + 2.0 * a) + E(std::abs(x - a) + y + a) + E(x + std::abs(y - a) + a) -
           E(std::abs(x - a) + std::abs(y - a));
}

cplx evolution_kernel(double x, double y, double t, const ModelParams& params) {
    params.validate();
    if (!(x >= 0.0) || !(y >= 0.0)) throw DomainError("evolution_kernel: x and y must be nonnegative");
    if (!std::isfinite(t)) throw DomainError("evolution_kernel: t must be finite");
    if (t == 0.0) throw DomainError("evolution_kernel: t must be nonzero");
    if (t < 0.0) return std::conj(evolution_kernel(x, y, -t, params));
    const double a = params.a;
    const double alpha = params.alpha;
    const cplx pref = std::polar(1.0 / std::sqrt(4.0 * kPi * t), -0.25 * kPi);
    const cplx free_pair =
        pref * (std::polar(1.0, (x - y) * (x - y) / (4.0 * t)) - std::polar(1.0, (x + y) * (x + y) / (4.0 * t)));
    if (alpha == 0.0) return free_pair;
    const double theta[4] = {x + y + 2.0 * a, std::abs(x - a) + y + a, x + std::abs(y - a) + a,
                             std::abs(x - a) + std::abs(y - a)};
    const double sign[4] = {-1.0, 1.0, 1.0, -1.0};
    cplx corr{0.0, 0.0};
    for (int j = 0; j < 4; ++j) {
        corr += sign[j] * (j_term(theta[j], t) - shell_T(theta[j], t, a, alpha, 1e-7));
    }
    return free_pair - alpha / (2.0 * kPi) * corr;
}

cplx Ia_closed_form(double z, double t, double a) {
    if (!(t > 0.0)) throw DomainError("Ia_closed_form: t must be positive");
    if (!(a >= 0.0)) throw DomainError("Ia_closed_form: a must be nonnegative");
    if (!std::isfinite(z)) throw DomainError("Ia_closed_form: z must be finite");
    const double s = 1.0 / std::sqrt(2.0 * kPi * t);
    const FresnelCS f0 = fresnel(z * s);
    const FresnelCS fp = fresnel((z + 2.0 * a) * s);
    const FresnelCS fm = fresnel((z - 2.0 * a) * s);
    const cplx F0(f0.C, f0.S);
    const cplx Fp(fp.C, fp.S);
    const cplx Fm(fm.C, fm.S);
    return kPi * std::sqrt(2.0) * std::polar(1.0, -0.25 * kPi) * (F0 - 0.5 * Fp - 0.5 * Fm);
}

CorrectionBoundsReport correction_factor_bounds(const ModelParams& params, const std::vector<double>& k_grid) {
    params.validate();
    CorrectionBoundsReport rep;
    const double a = params.a;
    const double alpha = params.alpha;
    rep.at_threshold = std::abs(1.0 + a * alpha) < 1e-12;
    auto Q = [&](double k) {
        const double s = std::sin(k * a);
        return -kImag * (2.0 * s * s / k) * rho_factor(k, a, alpha);
    };
    double max_ratio = 0.0;
    double worst = 0.0;
    for (double k : k_grid) {
        if (!(k > 0.0) || !std::isfinite(k)) {
            throw DomainError("correction_factor_bounds: grid entries must be positive and finite");
        }
        const double bound = std::min(std::abs(alpha) * a * a, std::abs(alpha) / (k * k));
        if (bound == 0.0) continue;
        const double r = std::abs(Q(k)) / bound;
        if (r > max_ratio) {
            max_ratio = r;
            worst = k;
        }
    }
    rep.max_ratio = max_ratio;
    rep.worst_k = worst;
    rep.bounds_hold = max_ratio <= 1.0 + 1e-9;
    const double hstep = 1e-4;
    const cplx q1 = Q(hstep);
    const cplx q2 = Q(2.0 * hstep);
    rep.small_k_limit = 2.0 * q1 - q2;
    // Q(-k) = conj Q(k), so Im Q(h)/h is a central difference with O(h^2) error
    rep.small_k_slope = kImag * (q1.imag() / hstep);
    rep.predicted_slope = rep.at_threshold ? cplx{0.0, -(2.0 / 3.0) * a * a}
                                           : -2.0 * kImag * a * a * a * alpha / (1.0 + a * alpha);
    return rep;
}

WaveField propagate_continuum(const WaveField& psi0, double t, const ModelParams& params, ContinuumBackend backend) {
    psi0.validate();
    params.validate();
    if (std::abs(psi0.a() - params.a) > 1e-9) {
        throw DomainError("propagate_continuum: field grid does not place the shell at params.a");
    }
    if (!(t >= 0.0)) throw DomainError("propagate_continuum: t must be nonnegative");
    WaveField state = project_out_bound_state(psi0, params);
    if (t == 0.0) return state;
    if (backend == ContinuumBackend::pde) {
        const double dt = std::min(5e-4, t / 64.0);
        ObserverConfig obs;
        obs.stride = std::numeric_limits<std::size_t>::max();
        Trajectory tr = evolve(state, params, Nonlinearity{}, t, dt, obs);
        return tr.final_state;
    }
    const std::size_t n = state.size();
    if ((n - 1) % 2 != 0) throw DomainError("propagate_continuum: kernel backend needs an even interval count");
    const double dx = state.dx;
    const double a = params.a;
    const double alpha = params.alpha;
    std::vector<double> wt(n, 1.0);
    for (std::size_t j = 1; j + 1 < n; ++j) wt[j] = (j % 2 == 1) ? 4.0 : 2.0;
    const double theta_max = 2.0 * state.L + 2.0 * a;
    const std::size_t intervals = std::max<std::size_t>(1600, static_cast<std::size_t>(theta_max * 96.0));
    const CubicSpline Tspline =
        (alpha != 0.0) ? build_shell_T_spline(theta_max, t, a, alpha, intervals) : CubicSpline{};
    WaveField out = state;
    const cplx pref = std::polar(1.0 / std::sqrt(4.0 * kPi * t), -0.25 * kPi);
    const cplx corr_pref = alpha / (2.0 * kPi);
    auto* outp = out.values.data();
    parallel_for(n, [&, outp](std::size_t i) {
        if (i == 0) {
            outp[i] = 0.0;
            return;
        }
        const double xi = static_cast<double>(i) * dx;
        cplx acc{0.0, 0.0};
        for (std::size_t jy = 1; jy + 1 < n; ++jy) {
            const cplx v = state.values[jy];
            const double yj = static_cast<double>(jy) * dx;
            const cplx free_pair = pref * (std::polar(1.0, (xi - yj) * (xi - yj) / (4.0 * t)) -
                                           std::polar(1.0, (xi + yj) * (xi + yj) / (4.0 * t)));
            cplx kernel = free_pair;
            if (alpha != 0.0) {
                const double th0 = xi + yj + 2.0 * a;
                const double th1 = std::abs(xi - a) + yj + a;
                const double th2 = xi + std::abs(yj - a) + a;
                const double th3 = std::abs(xi - a) + std::abs(yj - a);
                const cplx corr = -(j_term(th0, t) - Tspline.eval(th0)) + (j_term(th1, t) - Tspline.eval(th1)) +
                                  (j_term(th2, t) - Tspline.eval(th2)) - (j_term(th3, t) - Tspline.eval(th3));
                kernel -= corr_pref * corr;
            }
            acc += wt[jy] * v * kernel;
        }
        outp[i] = acc * (dx / 3.0);
    });
    return out;
}

DispersiveReport dispersive_decay_check(const ModelParams& params, const DispersiveConfig& config) {
    params.validate();
    if (!(config.fit_t_min > 0.0) || !(config.t_max > config.fit_t_min)) {
        throw DomainError("dispersive_decay_check: need 0 < fit_t_min < t_max");
    }
    if (!(config.dt > 0.0)) throw DomainError("dispersive_decay_check: dt must be positive");
    DispersiveReport rep;
    rep.near_threshold = std::abs(1.0 + params.a * params.alpha) < 0.05;
    WaveField state = gaussian_field(params, config.L, config.dx, config.center, config.width);
    state = project_out_bound_state(state, params);
    const std::size_t j_mon = static_cast<std::size_t>(std::llround(0.9 * config.L / config.dx));
    constexpr std::size_t kSamples = 25;
    const double ratio = std::pow(config.t_max / config.fit_t_min, 1.0 / static_cast<double>(kSamples - 1));
    ObserverConfig obs;
    obs.stride = std::numeric_limits<std::size_t>::max();
    double t_now = 0.0;
    for (std::size_t s = 0; s < kSamples; ++s) {
        const double t_target = config.fit_t_min * std::pow(ratio, static_cast<double>(s));
        const double span = t_target - t_now;
        if (span > 0.0) {
            Trajectory tr = evolve(state, params, Nonlinearity{}, span, config.dt, obs);
            state = tr.final_state;
            t_now = t_target;
        }
        const double sup = sup_norm(state);
        if (j_mon < state.size() && sup > 0.0) {
            rep.max_reflection = std::max(rep.max_reflection, std::abs(state.values[j_mon]) / sup);
        }
        rep.samples.emplace_back(t_now, std::sqrt(t_now) * sup);
    }
    rep.reflection_ok = rep.max_reflection <= config.reflection_tol;
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [tt, val] : rep.samples) {
        const double lx = std::log(tt);
        const double ly = std::log(val);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        rep.C_empirical = std::max(rep.C_empirical, val);
    }
    const double m = static_cast<double>(rep.samples.size());
    rep.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return rep;
}

WaveField eigenstate_field(const ModelParams& params, double L, double dx) {
    const SpectralData sd = bound_state(params);
    if (!sd.has_bound_state) throw DomainError("eigenstate_field: no bound state for these parameters");
    WaveField f = make_field(L, dx, params.a);
    for (std::size_t j = 0; j < f.size(); ++j) f.values[j] = eigenfunction(sd, params, f.x(j));
    f.values.front() = 0.0;
    f.values.back() = 0.0;
    const double nrm = std::sqrt(norm_sq(f));
    for (auto& v : f.values) v /= nrm;
    return f;
}

WaveField gaussian_field(const ModelParams& params, double L, double dx, double center, double width) {
    if (!(width > 0.0)) throw DomainError("gaussian_field: width must be positive");
    if (!(center > 0.0) || !(center < L)) throw DomainError("gaussian_field: center must lie inside (0, L)");
    WaveField f = make_field(L, dx, params.a);
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double r = (f.x(j) - center) / width;
        f.values[j] = std::exp(-r * r);
    }
    f.values.front() = 0.0;
    f.values.back() = 0.0;
    const double nrm = std::sqrt(norm_sq(f));
    for (auto& v : f.values) v /= nrm;
    return f;
}

}  // namespace winter
