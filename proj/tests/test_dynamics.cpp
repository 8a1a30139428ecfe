#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "oracles.hpp"
#include "winter/dynamics.hpp"
#include "winter/errors.hpp"
#include "winter/specfun.hpp"
#include "winter/wavefield.hpp"

using namespace winter;
using cplx = std::complex<double>;

namespace {

// Bound state of the linear shell problem, sampled on the grid; closed form in
// terms of the principal Lambert branch.
WaveField sampled_bound_state(double L, double dx, double a, double alpha) {
    const double h = (-a * alpha + lambert_w0(a * alpha * std::exp(a * alpha))) / (2.0 * a);
    const double B = 1.0 / std::sqrt((std::exp(h * a) * std::sinh(h * a) - h * a) / (2.0 * h));
    WaveField f = make_field(L, dx, a);
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double x = f.x(j);
        f.values[j] = x <= a ? B * std::sinh(h * x) : B * std::exp(h * a) * std::sinh(h * a) * std::exp(-h * x);
    }
    f.values.front() = 0.0;
    f.values.back() = 0.0;
    return f;
}

void normalize(WaveField& f) {
    const double n = std::sqrt(norm_sq(f));
    for (auto& v : f.values) v /= n;
}

WaveField drifting_packet(double L, double dx) {
    WaveField f = sampled_bound_state(L, dx, 1.0, -4.0);
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double x = f.x(j);
        const double env = std::exp(-std::pow((x - 1.2) / 3.0, 2));
        f.values[j] *= std::polar(env, 0.5 * x);
    }
    f.values.front() = 0.0;
    f.values.back() = 0.0;
    normalize(f);
    return f;
}

}  // namespace

TEST_CASE("moment_of_inertia matches direct quadrature") {
    WaveField f = make_field(6.0, 1e-3, 1.0);
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double x = f.x(j);
        f.values[j] = x * std::exp(-x);
    }
    f.values.back() = 0.0;
    const double q = 0.4;
    const double ref = oracle::simpson(
        [&](double x) {
            const double p = x * std::exp(-x);
            return (x - q) * (x - q) * p * p;
        },
        0.0, 6.0, 1e-13);
    CHECK(moment_of_inertia(f, q) == doctest::Approx(ref).epsilon(1e-5));
    CHECK_THROWS_AS(moment_of_inertia(f, -0.1), DomainError);
}

TEST_CASE("virial identities on a smooth complex field") {
    // Smooth field, no kink: the piecewise machinery must agree with the
    // integration-by-parts identity at discretization accuracy.
    WaveField f = make_field(10.0, 2e-3, 1.0);
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double x = f.x(j);
        f.values[j] = std::polar(x * std::exp(-std::pow((x - 3.0) / 1.1, 2)), 0.7 * x);
    }
    f.values.front() = 0.0;
    f.values.back() = 0.0;
    normalize(f);
    // Second-order stencils: residual scales with dx^2 times the field curvature.
    CHECK(virial_real_identity_check(f, 0.3) <= 2e-5);
    CHECK(virial_real_identity_check(f, 0.0) <= 2e-5);
    CHECK_THROWS_AS(virial_first(f, -1.0), DomainError);
    CHECK_THROWS_AS(virial_second(f, -1.0, ModelParams{1.0, -4.0}, Nonlinearity{}), DomainError);
}

TEST_CASE("evolve conserves the discrete norm and energy") {
    const ModelParams params{1.0, -4.0};
    const Nonlinearity nl{-3.0, 1.0};
    WaveField f = drifting_packet(14.0, 4e-3);
    ObserverConfig obs;
    obs.stride = 60;
    obs.q = 0.3;
    const Trajectory tr = evolve(f, params, nl, 0.024, 1e-4, obs);
    REQUIRE(!tr.halted);
    REQUIRE(tr.records.size() >= 2);
    const DiagnosticsRecord& first = tr.records.front();
    const DiagnosticsRecord& last = tr.records.back();
    CHECK(std::abs(last.norm_sq - first.norm_sq) <= 1e-12);
    CHECK(std::abs(last.energy - first.energy) <= 1e-4 * std::max(1.0, std::abs(first.energy)));
    CHECK(last.t == doctest::Approx(0.024).epsilon(1e-12));
}

TEST_CASE("moment derivatives along a trajectory match their field expressions") {
    // Finite differences of the recorded I_q series against the instantaneous
    // identity values at the center record. Sampling interval kept at 5e-4:
    // wider windows alias the fast beat modes of the discrete spectrum.
    const ModelParams params{1.0, -4.0};
    const Nonlinearity nl{-3.0, 1.0};
    WaveField f = drifting_packet(14.0, 4e-3);
    ObserverConfig obs;
    obs.stride = 5;
    obs.q = 0.3;
    const Trajectory tr = evolve(f, params, nl, 0.024, 1e-4, obs);
    REQUIRE(!tr.halted);
    REQUIRE(tr.records.size() == 49);
    const double tau = 5.0 * 1e-4;
    const int c = 40;
    const auto& R = tr.records;
    const double i_m2 = R[c - 2].I_q, i_m1 = R[c - 1].I_q, i_0 = R[c].I_q, i_p1 = R[c + 1].I_q, i_p2 = R[c + 2].I_q;
    const double fd1 = (i_m2 - 8.0 * i_m1 + 8.0 * i_p1 - i_p2) / (12.0 * tau);
    const double fd2 = (-i_m2 + 16.0 * i_m1 - 30.0 * i_0 + 16.0 * i_p1 - i_p2) / (12.0 * tau * tau);
    CHECK(std::abs(fd1 - R[c].I_q_dot) <= 1e-4 * std::abs(fd1));
    CHECK(std::abs(fd2 - R[c].I_q_ddot) <= 5e-3 * std::abs(fd2));
}

TEST_CASE("eigenstate data stays put under the linear flow") {
    const ModelParams params{1.0, -4.0};
    const Nonlinearity nl{};  // eta = 0
    WaveField f = sampled_bound_state(12.0, 4e-3, 1.0, -4.0);
    normalize(f);
    ObserverConfig obs;
    obs.stride = 100;
    const Trajectory tr = evolve(f, params, nl, 0.5, 1e-3, obs);
    REQUIRE(!tr.halted);
    CHECK(std::abs(tr.records.back().norm_sq - 1.0) <= 1e-12);
    const cplx overlap = inner(f, tr.final_state);
    CHECK(std::abs(overlap) >= 1.0 - 1e-8);
    CHECK(std::abs(sup_norm(tr.final_state) - sup_norm(f)) <= 1e-4);
}

TEST_CASE("evolve rejects bad configuration and NaN fields") {
    const ModelParams params{1.0, -4.0};
    WaveField f = make_field(4.0, 0.01, 1.0);
    f.values[120] = 1.0;
    CHECK_THROWS_AS(evolve(f, params, Nonlinearity{}, -1.0, 1e-3, {}), DomainError);
    CHECK_THROWS_AS(evolve(f, params, Nonlinearity{}, 1.0, 0.0, {}), DomainError);
    f.values[50] = std::nan("");
    CHECK_THROWS_AS(evolve(f, params, Nonlinearity{}, 0.01, 1e-3, {}), NumericalError);
}

TEST_CASE("classify_blowup behavioral rules") {
    const ModelParams params{1.0, -4.0};
    WaveField f = make_field(8.0, 4e-3, 1.0);
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double x = f.x(j);
        f.values[j] = std::exp(-std::pow((x - 1.0) / 0.25, 2));
    }
    f.values.front() = 0.0;
    f.values.back() = 0.0;
    normalize(f);

    CHECK(classify_blowup(params, Nonlinearity{2.0, 3.0}, f).rule == "global:eta-nonnegative");
    CHECK(classify_blowup(params, Nonlinearity{0.0, 1.0}, f).rule == "global:eta-nonnegative");
    CHECK(classify_blowup(params, Nonlinearity{-1.0, 1.0}, f).rule == "global:subcritical");
    CHECK(classify_blowup(params, Nonlinearity{-1.0, 2.0}, f).rule == "indeterminate:critical-constant-unknown");

    // Weak supercritical focusing: positive energy, indeterminate.
    WaveField weak = f;
    for (auto& v : weak.values) v *= 0.05;
    const BlowupVerdict w = classify_blowup(params, Nonlinearity{-1.0, 3.0}, weak);
    CHECK(w.energy0 >= 0.0);
    CHECK(w.rule == "indeterminate:supercritical-constant-unknown");
    CHECK(!w.probe_ran);
}

TEST_CASE("classify_blowup detects collapse for negative-energy supercritical data") {
    const ModelParams params{1.0, -4.0};
    const Nonlinearity nl{-50.0, 3.0};
    WaveField f = make_field(8.0, 4e-3, 1.0);
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double x = f.x(j);
        f.values[j] = std::exp(-std::pow((x - 1.0) / 0.25, 2));
    }
    f.values.front() = 0.0;
    f.values.back() = 0.0;
    normalize(f);
    const BlowupVerdict v = classify_blowup(params, nl, f);
    CHECK(v.energy0 < 0.0);
    CHECK(v.rule == "conditional-blowup:negative-energy-supercritical");
    CHECK(v.probe_ran);
    CHECK(v.numerical_blowup_detected);
    CHECK(std::isfinite(v.T_max_estimate));
    CHECK(v.T_max_estimate > 0.0);
}
