#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "winter/model.hpp"

namespace winter {

enum class Regime { focusing, defocusing };

// Piecewise elliptic stationary profile of -phi'' + g phi^3 = Omega phi on the
// half line: Dirichlet wall at 0, derivative jump alpha phi(a) at the shell,
// decay at infinity.  g = -1 focusing (cn / sech pieces), g = +1 defocusing
// (cs / cosech pieces).
struct StationaryState {
    Regime regime = Regime::focusing;
    int ell = 2;                // exterior sign branch: tail offset sign is (-1)^ell
    double a = 1.0;             // shell position: the interior/exterior seam
    double p = 0.0;             // elliptic modulus of the interior arc
    double lambda = 0.0;        // interior scale; lambda * x0 = K(p)
    double lambda_prime = 0.0;  // exterior scale; Omega = -lambda_prime^2
    double x0 = 0.0;
    double x0_prime = 0.0;
    double C = 0.0;
    double C_prime = 0.0;
    double Omega = 0.0;
    double mu_sq = 0.0;  // squared L2 mass of the profile
    double eta = 0.0;    // -mu_sq focusing, +mu_sq defocusing
};

// Scalar matching functions: the derivative-jump condition at the shell reduced
// onto the (p, lambda_prime) parameter plane; a state exists at a root.
// ell in {1, 2} selects the sign of the exterior tail offset.  Focusing returns
// nullopt where the interior arc cannot match any exterior sech amplitude (the
// square-root argument goes negative).  p = 1 is the degenerate hyperbolic
// limit where the focusing function vanishes identically.
std::optional<double> matching_focusing(double p, double lambda_prime, int ell, const ModelParams& params);
// Defocusing is defined for p in [0, 1); throws PoleError where the interior
// arc hits the cs pole (sn of the shell argument vanishes).
std::optional<double> matching_defocusing(double p, double lambda_prime, int ell, const ModelParams& params);

// Profile value at x (0 for x <= 0).
double profile_eval(const StationaryState& st, double x);

// Squared mass: closed-form exterior tail plus adaptive interior quadrature.
// Throws InvalidProfileError when the interior arc contains a cs pole.
double norm_mu_sq(const StationaryState& st);

// All reconstructed states on one ell-sheet over the modulus grid, sorted by
// Omega.  Every returned state satisfies the matching conditions to 1e-8 and
// carries its mass.  lambda_prime_max <= 0 selects the default ceiling 20/a
// (doubled while new roots keep appearing in the top octave, with a hard cap:
// the root ladder in lambda_prime is infinite, one rung per interior node).
std::vector<StationaryState> solve_branch(Regime regime, int ell, const ModelParams& params,
                                          const std::vector<double>& p_grid, double lambda_prime_max = 0.0);

// Fold point of the one-parameter family: simultaneous zero of the matching
// function and its modulus derivative.
struct BifurcationPoint {
    int n = 0;  // 1-based index in order of increasing |eta|
    double eta = 0.0;
    double Omega = 0.0;
    double p = 0.0;
    double lambda_prime = 0.0;
    int ell = 2;
};

struct BifurcationBox {
    double p_lo = 0.0;
    double p_hi = 0.0;
    double lp_lo = 0.0;
    double lp_hi = 0.0;
};

// Seeds 2D Newton iterations from coarse-grid extrema of the root curves;
// returns deduplicated points with both residuals below 1e-10.
std::vector<BifurcationPoint> find_bifurcations(Regime regime, int ell, const ModelParams& params,
                                                const BifurcationBox& box);

struct SlopeEntry {
    StationaryState state;
    double slope = 0.0;  // d mu^2 / d omega, omega = -Omega
    std::string classification;
};

struct SlopeReport {
    std::vector<SlopeEntry> entries;
    // the criterion presumes spectral conditions that are not verified here
    std::string caveat = "conjectural - assumes the spectral assumptions of the slope criterion";
};

// Centered-difference slope d mu^2 / d omega along a branch (sorted internally
// by omega).  classification: slope > tol stable, < -tol unstable, else
// marginal.  Throws InsufficientDataError for fewer than 3 states.
SlopeReport stability_slope(const std::vector<StationaryState>& branch, double tol = 1e-8);

struct RealReductionReport {
    double max_wronskian = 0.0;   // max |psi' conj(psi) - psi conj(psi')| on the grid
    double phase = 0.0;           // extracted global phase
    double residual_imag = 0.0;   // max |Im(e^{-i phase} psi)| after phase removal
};

// Stationary profiles are real up to a constant phase; this measures how far a
// gridded profile is from that form.
RealReductionReport check_real_reduction(const std::vector<std::complex<double>>& psi, double dx);

// Ground-branch state continued from the linear limit (p -> 1, lambda_prime ->
// the bound-state h) down to the requested mass.
StationaryState ground_state_at_mu_sq(const ModelParams& params, double mu_sq_target);

// The focusing ground branch from the linear limit to eta_min, roughly
// uniformly spaced in eta.
std::vector<StationaryState> ground_branch(const ModelParams& params, double eta_min, std::size_t n_points);

// Labeled (eta, Omega) dataset for the bifurcation diagram: the ground branch
// ("Omega0") plus the two arms of each detected fold ("Omega1+", "Omega1-",
// ...; "+" is the arm with the larger mean Omega).
struct BranchPoint {
    std::string label;
    double eta = 0.0;
    double Omega = 0.0;
    double p = 0.0;
    double lambda_prime = 0.0;
    int ell = 2;
};

std::vector<BranchPoint> eta_omega_dataset(const ModelParams& params, double eta_min = -110.0);

}  // namespace winter
