#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "winter/model.hpp"
#include "winter/wavefield.hpp"

namespace winter {

// One diagnostics sample along a trajectory. I_q_dot and I_q_ddot are the
// instantaneous identity values (first and second moment derivatives expressed
// through the field), not finite differences in time.
struct DiagnosticsRecord {
    double t = 0.0;
    double norm_sq = 0.0;
    double energy = 0.0;
    double I_q = 0.0;
    double I_q_dot = 0.0;
    double I_q_ddot = 0.0;
    double sup_norm = 0.0;
    double h1_norm = 0.0;
    double boundary_term_T = 0.0;
};

struct ObserverConfig {
    std::size_t stride = 1;   // sample diagnostics every `stride` accepted steps
    double q = 0.0;           // pivot for the moment diagnostics
    bool keep_fields = false; // snapshot the field at every sample
};

struct Trajectory {
    std::vector<DiagnosticsRecord> records;
    std::vector<WaveField> fields;  // parallel to records when keep_fields is set
    WaveField final_state;
    double t_reached = 0.0;
    double dt_final = 0.0;
    int dt_halvings = 0;
    bool halted = false;  // stopped early: dt underflow or H1 runaway; not an exception
};

// Conserved discrete energy of the splitting scheme:
// sum |forward difference|^2 dx + alpha |psi(a)|^2 + eta/(sigma+1) sum |psi|^(2 sigma + 2) dx.
double energy(const WaveField& psi, const ModelParams& params, const Nonlinearity& nl);

// I_q = sum (x - q)^2 |psi|^2 dx, q >= 0.
double moment_of_inertia(const WaveField& psi, double q);

// dI_q/dt expressed through the field: 4 Im int (x - q) conj(psi) psi' dx,
// with derivatives taken piecewise on [0, a] and [a, L].
double virial_first(const WaveField& psi, double q);

// Residual of the integration-by-parts identity
// 4 Re int (x - q) conj(psi) psi' dx + 2 ||psi||^2 = 0 (exact when psi(0) = psi(L) = 0).
double virial_real_identity_check(const WaveField& psi, double q);

// T = q |psi'(0+)|^2 - (a - q) (|psi'(a+)|^2 - |psi'(a-)|^2).
double virial_boundary_term(const WaveField& psi, double q, const ModelParams& params);

// d^2 I_q/dt^2 expressed through the field:
// 8 E - 4 alpha |psi(a)|^2 + 4 eta (sigma - 2)/(sigma + 1) ||psi||^(2 sigma + 2)_(2 sigma + 2) - 4 T,
// where E uses the same piecewise-centered kinetic term as T.
double virial_second(const WaveField& psi, double q, const ModelParams& params, const Nonlinearity& nl);

// Strang splitting: exact nonlinear phase half-steps around a Crank-Nicolson
// linear step with the shell lumped onto its grid node. Unitary in the discrete
// L2 norm. A step that grows the sup norm by more than 10% is rejected and dt
// halved. The run halts with a flag (no exception) when dt falls below 1e-12,
// or when an observation shows an H1 norm above 1e6 or the conserved energy
// drifting by more than 10% of max(1, |E0|), both signs that the grid has lost
// the solution. NaN in the field throws NumericalError.
Trajectory evolve(const WaveField& psi0, const ModelParams& params, const Nonlinearity& nl, double t_final,
                  double dt, const ObserverConfig& observers = {});

struct BlowupVerdict {
    std::string rule;  // behavioral class, e.g. "global:subcritical"
    double energy0 = 0.0;
    double virial_bound_at_zero = 0.0;  // d^2 I_0/dt^2 evaluated on the initial data
    bool probe_ran = false;
    bool numerical_blowup_detected = false;
    double T_max_estimate = std::numeric_limits<double>::infinity();
};

// Behavioral classification of the initial value problem. Sharp thresholds for
// the critical and supercritical constants are not known; those cases return
// "indeterminate:..." rules. Negative energy in the supercritical focusing case
// additionally runs a short adaptive probe looking for numerical collapse.
BlowupVerdict classify_blowup(const ModelParams& params, const Nonlinearity& nl, const WaveField& psi0);

}  // namespace winter
