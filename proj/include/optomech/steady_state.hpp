#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "optomech/params.hpp"

namespace optomech {

// Self-consistent classical mean values, in omega_m units.
struct ClassicalSteadyState {
    std::complex<double> alpha_c;  // <a_c>_ss after the phase rotation
    std::complex<double> alpha_a;  // <a_a>_ss after the phase rotation
    double q_ss = 0.0;             // <q>_ss (dimensionless); <p>_ss is exactly 0
    double x_ss = 0.0;             // <x>_ss in metres
    double delta_eff = 0.0;        // Delta = Delta_c - g0 <q>_ss
    double delta_c = 0.0;          // bare detuning Delta_c
    std::complex<double> coupling_g;  // G = g0 <a_c>_ss
    double phase = 0.0;            // rotation removed from both amplitudes
    double residual = 0.0;         // scaled fixed-point residual before rotation
    bool stable = false;
    double stability_margin = 0.0;  // max Re(eigenvalue) of the drift matrix
};

enum class RootPolicy {
    ContinuationFromZeroDrive,  // follow the branch from P_L = 0 up to P_L
    LowestDisplacement,
    HighestDisplacement,
};

struct SteadyStateOptions {
    RootPolicy policy = RootPolicy::ContinuationFromZeroDrive;
    // Rotate the global optical phase so that G is real and non-negative.
    bool apply_phase_gauge = true;
};

// Fixed-point residual target (scaled, dimensionless).
inline constexpr double kSteadyStateTolerance = 1e-10;

// Solves the classical steady state. In pinned mode the cubic is bypassed:
// amplitudes follow from the linear two-cavity problem at the given Delta and
// Delta_c is backed out. In self-consistent mode the cubic is solved and a
// root chosen by `options.policy`. An unstable selection is returned with
// `stable == false`.
ClassicalSteadyState solve_steady_state(const ScaledParams& params,
                                        const SteadyStateOptions& options = {});
ClassicalSteadyState solve_steady_state(const SystemParams& params,
                                        const SteadyStateOptions& options = {});

// Steady state for a prescribed mechanical shift y = g0 <q>_ss, i.e.
// Delta = Delta_c - y. Used to expand each cubic root into a full state.
ClassicalSteadyState steady_state_at_shift(const ScaledParams& params, double shift,
                                           bool apply_phase_gauge = true);

// Coefficients c[0..3] of c3 y^3 + c2 y^2 + c1 y + c0 = 0 for the shift
// y = g0 <q>_ss, obtained by eliminating both amplitudes. Uses `params.delta`
// as Delta_c regardless of the detuning mode.
std::array<double, 4> steady_state_cubic(const ScaledParams& params);

// Real roots (ascending) via companion-matrix eigenvalues, each polished by a
// Newton step.
std::vector<double> real_cubic_roots(const std::array<double, 4>& coeffs);

// |p(y)| normalised by the magnitude of its terms.
double cubic_residual(const std::array<double, 4>& coeffs, double y);

struct SteadyStateBranch {
    double x_ss = 0.0;  // m
    double q_ss = 0.0;
    double delta_eff = 0.0;
    bool stable = false;
    double stability_margin = 0.0;
};

struct BistabilityPoint {
    double power_left = 0.0;  // W
    std::vector<SteadyStateBranch> roots;  // sorted by x_ss
};

// All real steady states for each left drive power. The grid must be strictly
// increasing and non-negative. `params` is evaluated in self-consistent mode
// with `params.delta` taken as Delta_c.
std::vector<BistabilityPoint> bistability_scan(const SystemParams& params,
                                               std::span<const double> power_grid);

}  // namespace optomech
