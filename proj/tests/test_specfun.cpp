#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "winter/errors.hpp"
#include "winter/specfun.hpp"

using namespace winter;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("lambert_w0 reference values") {
    CHECK(lambert_w0(1.0) == doctest::Approx(0.567143290409783873).epsilon(1e-14));
    CHECK(lambert_w0(-4.0 * std::exp(-4.0)) == doctest::Approx(-0.07930960512711365643911).epsilon(1e-13));
    CHECK(lambert_w0(0.0) == 0.0);
    CHECK(lambert_w0(-1.0 / std::exp(1.0)) == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("lambert_w0 defining residual over a wide grid") {
    for (double x : {-0.367879, -0.3, -0.1, -1e-3, 1e-6, 0.5, 1.0, 2.0, 10.0, 1e3, 1e8, 1e15}) {
        const double w = lambert_w0(x);
        const double resid = std::abs(w * std::exp(w) - x) / std::max(std::abs(x), 1e-300);
        CHECK(resid <= 1e-12);
    }
}

TEST_CASE("lambert_w0 inverts x e^x on the principal branch") {
    for (double v : {-1.0, -0.9, -0.5, -0.1, 0.0, 0.3, 1.0, 3.0, 10.0}) {
        CHECK(lambert_w0(v * std::exp(v)) == doctest::Approx(v).epsilon(1e-10));
    }
}

TEST_CASE("lambert_wm1 reference values and residual") {
    CHECK(lambert_wm1(-0.2) == doctest::Approx(-2.5426413577735265).epsilon(1e-13));
    for (double x : {-0.367879, -0.35, -0.2, -0.05, -1e-3, -1e-8}) {
        const double w = lambert_wm1(x);
        CHECK(w <= -1.0);
        const double resid = std::abs(w * std::exp(w) - x) / std::max(std::abs(x), 1e-300);
        CHECK(resid <= 1e-12);
    }
}

TEST_CASE("lambert domain errors") {
    CHECK_THROWS_AS(lambert_w0(-0.5), DomainError);
    CHECK_THROWS_AS(lambert_w0(std::nan("")), DomainError);
    CHECK_THROWS_AS(lambert_wm1(0.1), DomainError);
    CHECK_THROWS_AS(lambert_wm1(-0.5), DomainError);
}

TEST_CASE("elliptic_K reference values") {
    CHECK(elliptic_K(0.0) == doctest::Approx(kPi / 2.0).epsilon(1e-15));
    CHECK(elliptic_K(1.0 / std::sqrt(2.0)) == doctest::Approx(1.854074677301371918434).epsilon(1e-14));
    CHECK(elliptic_K(0.99) == doctest::Approx(3.356600523361192376033).epsilon(1e-14));
    CHECK(elliptic_K(0.9999) == doctest::Approx(5.645148216829692788003).epsilon(1e-14));
    CHECK_THROWS_AS(elliptic_K(1.0), DomainError);
    CHECK_THROWS_AS(elliptic_K(-0.1), DomainError);
}

TEST_CASE("elliptic_K agrees with direct quadrature of its defining integral") {
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999, 0.9999}) {
        const double ref = oracle::simpson(
            [p](double t) {
                const double s = std::sin(t);
                return 1.0 / std::sqrt(1.0 - p * p * s * s);
            },
            0.0, kPi / 2.0, 1e-14);
        CHECK(std::abs(elliptic_K(p) - ref) <= 1e-10 * ref);
    }
}

TEST_CASE("jacobi reference values") {
    auto near = [](const JacobiTriple& j, double sn, double cn, double dn) {
        CHECK(j.sn == doctest::Approx(sn).epsilon(1e-13));
        CHECK(j.cn == doctest::Approx(cn).epsilon(1e-13));
        CHECK(j.dn == doctest::Approx(dn).epsilon(1e-13));
    };
    near(jacobi(1.3, 0.8), 0.9055026584496214780797, 0.4243405890798901042687, 0.6893776604634266905473);
    near(jacobi(0.5, 0.3), 0.477861052542715853, 0.8784354355686977629, 0.98967085099120156833);
    near(jacobi(2.0, 0.95), 0.98124875192792020029, 0.19274565323217777565, 0.36197883276927779223);
    near(jacobi(-1.1, 0.6), -0.86118169475457150287, 0.50829724435574508952, 0.85616107824583561361);
    near(jacobi(3.7, 0.9999), 0.99882722154459501003, 0.048416748150867358954, 0.050435133475049235108);
}

TEST_CASE("jacobi degenerate moduli") {
    const JacobiTriple j0 = jacobi(0.9, 0.0);
    CHECK(j0.sn == doctest::Approx(std::sin(0.9)).epsilon(1e-15));
    CHECK(j0.cn == doctest::Approx(std::cos(0.9)).epsilon(1e-15));
    CHECK(j0.dn == 1.0);
    const JacobiTriple j1 = jacobi(0.9, 1.0);
    CHECK(j1.sn == doctest::Approx(std::tanh(0.9)).epsilon(1e-15));
    CHECK(j1.cn == doctest::Approx(1.0 / std::cosh(0.9)).epsilon(1e-15));
    CHECK(j1.dn == doctest::Approx(1.0 / std::cosh(0.9)).epsilon(1e-15));
}

TEST_CASE("jacobi algebraic identities over random samples") {
    std::mt19937_64 rng(20260822u);
    std::uniform_real_distribution<double> up(-12.0, 12.0);
    std::uniform_real_distribution<double> pp(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const double u = up(rng);
        const double p = pp(rng);
        const JacobiTriple j = jacobi(u, p);
        CHECK(std::abs(j.sn * j.sn + j.cn * j.cn - 1.0) <= 1e-12);
        CHECK(std::abs(j.dn * j.dn + p * p * j.sn * j.sn - 1.0) <= 1e-12);
    }
}

TEST_CASE("jacobi matches RK4 integration of the defining system") {
    for (auto [u, p] : {std::pair{1.3, 0.8}, {2.7, 0.5}, {-1.9, 0.95}, {0.4, 0.2}}) {
        const oracle::JacobiState ref = oracle::jacobi_rk4(u, p);
        const JacobiTriple j = jacobi(u, p);
        CHECK(std::abs(j.sn - ref.sn) <= 1e-9);
        CHECK(std::abs(j.cn - ref.cn) <= 1e-9);
        CHECK(std::abs(j.dn - ref.dn) <= 1e-9);
    }
}

TEST_CASE("jacobi periodicity in 4K") {
    for (double p : {0.2, 0.6, 0.9, 0.99}) {
        const double K = elliptic_K(p);
        for (double u : {0.3, 1.1, -2.4}) {
            const JacobiTriple a = jacobi(u, p);
            const JacobiTriple b = jacobi(u + 4.0 * K, p);
            CHECK(std::abs(a.sn - b.sn) <= 1e-10);
            CHECK(std::abs(a.cn - b.cn) <= 1e-10);
            CHECK(std::abs(a.dn - b.dn) <= 1e-10);
        }
    }
}

TEST_CASE("jacobi domain errors") {
    CHECK_THROWS_AS(jacobi(1.0, 1.5), DomainError);
    CHECK_THROWS_AS(jacobi(1.0, -0.1), DomainError);
    CHECK_THROWS_AS(jacobi(std::nan(""), 0.5), DomainError);
}

TEST_CASE("jacobi_cs values and pole") {
    CHECK(jacobi_cs(0.7, 1.0) == doctest::Approx(1.0 / std::sinh(0.7)).epsilon(1e-13));
    const JacobiTriple j = jacobi(1.1, 0.4);
    CHECK(jacobi_cs(1.1, 0.4) == doctest::Approx(j.cn / j.sn).epsilon(1e-15));
    CHECK_THROWS_AS(jacobi_cs(0.0, 0.5), PoleError);
}

TEST_CASE("fresnel reference values") {
    auto near = [](double x, double c, double s) {
        const FresnelCS f = fresnel(x);
        CHECK(f.C == doctest::Approx(c).epsilon(1e-13));
        CHECK(f.S == doctest::Approx(s).epsilon(1e-13));
    };
    near(0.3, 0.2994009760520472103819, 0.01411699800657658580732);
    near(1.0, 0.7798934003768228294742, 0.4382591473903547660768);
    near(1.5, 0.4452611760398215350646, 0.6975049600820930130807);
    near(2.3, 0.6265617097919521014167, 0.553151641560702123289);
    near(3.1, 0.5615939025113564095451, 0.581815868085874466906);
    near(4.0, 0.4984260330381776155307, 0.4205157542469284244453);
    near(7.5, 0.5160182501523363463415, 0.4607012329468306108438);
}

TEST_CASE("fresnel agrees with direct quadrature of exp(i pi tau^2 / 2)") {
    for (double x : {0.5, 1.0, 1.5, 1.7, 2.3, 4.0}) {
        const std::complex<double> ref = oracle::simpson(
            [](double tau) { return std::exp(std::complex<double>(0.0, kPi * tau * tau / 2.0)); }, 0.0, x, 1e-14);
        const FresnelCS f = fresnel(x);
        CHECK(std::abs(f.C - ref.real()) <= 1e-12);
        CHECK(std::abs(f.S - ref.imag()) <= 1e-12);
    }
}

TEST_CASE("fresnel oddness, origin, and large-argument limit") {
    for (double x : {0.4, 1.2, 2.6, 5.0}) {
        const FresnelCS fp = fresnel(x);
        const FresnelCS fm = fresnel(-x);
        CHECK(fm.C == -fp.C);
        CHECK(fm.S == -fp.S);
    }
    const FresnelCS f0 = fresnel(0.0);
    CHECK(f0.C == 0.0);
    CHECK(f0.S == 0.0);
    // C, S -> 1/2 with envelope ~ 1/(pi x).
    const FresnelCS big = fresnel(50.0);
    CHECK(std::abs(big.C - 0.5) <= 1.0 / (kPi * 50.0) * 1.01);
    CHECK(std::abs(big.S - 0.5) <= 1.0 / (kPi * 50.0) * 1.01);
    CHECK_THROWS_AS(fresnel(std::nan("")), DomainError);
}
