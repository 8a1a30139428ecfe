#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "winter/errors.hpp"

namespace winter {

// Complex field sampled on the uniform grid x_j = j dx, j = 0..N, covering [0, L].
// Dirichlet problems keep values.front() == 0; j_a marks the shell location, which
// must sit exactly on a grid node.
struct WaveField {
    double L = 0.0;
    double dx = 0.0;
    std::size_t j_a = 0;
    std::vector<std::complex<double>> values;

    std::size_t size() const { return values.size(); }
    double x(std::size_t j) const { return static_cast<double>(j) * dx; }
    double a() const { return static_cast<double>(j_a) * dx; }

    void validate() const {
        if (!(L > 0.0) || !(dx > 0.0)) throw DomainError("WaveField: L and dx must be positive");
        const std::size_t n = static_cast<std::size_t>(std::llround(L / dx));
        if (std::abs(static_cast<double>(n) * dx - L) > 1e-9) throw DomainError("WaveField: L must be a multiple of dx");
        if (values.size() != n + 1) throw DomainError("WaveField: values size does not match the grid");
        if (j_a >= values.size()) throw DomainError("WaveField: shell index out of range");
    }
};

// Zero field on [0, L] with the shell at x = a, which must align with the grid.
inline WaveField make_field(double L, double dx, double a) {
    if (!(L > 0.0) || !(dx > 0.0) || !(a > 0.0) || a >= L) throw DomainError("make_field: need 0 < a < L, dx > 0");
    const long long ja = std::llround(a / dx);
    if (std::abs(static_cast<double>(ja) * dx - a) > 1e-9) throw DomainError("make_field: a must sit on a grid node");
    const long long n = std::llround(L / dx);
    if (std::abs(static_cast<double>(n) * dx - L) > 1e-9) throw DomainError("make_field: L must be a multiple of dx");
    WaveField f;
    f.L = L;
    f.dx = dx;
    f.j_a = static_cast<std::size_t>(ja);
    f.values.assign(static_cast<std::size_t>(n) + 1, {0.0, 0.0});
    return f;
}

inline double norm_sq(const WaveField& f) {
    double s = 0.0;
    for (const auto& v : f.values) s += std::norm(v);
    return s * f.dx;
}

inline double sup_norm(const WaveField& f) {
    double m = 0.0;
    for (const auto& v : f.values) m = std::max(m, std::abs(v));
    return m;
}

inline double h1_norm(const WaveField& f) {
    double s = 0.0;
    for (std::size_t j = 0; j + 1 < f.values.size(); ++j) s += std::norm(f.values[j + 1] - f.values[j]);
    return std::sqrt(s / f.dx + norm_sq(f));
}

// L2 pairing <f, g> = sum conj(f_j) g_j dx.
inline std::complex<double> inner(const WaveField& f, const WaveField& g) {
    std::complex<double> s = 0.0;
    const std::size_t n = std::min(f.values.size(), g.values.size());
    for (std::size_t j = 0; j < n; ++j) s += std::conj(f.values[j]) * g.values[j];
    return s * f.dx;
}

}  // namespace winter
