#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "optomech/linear_dynamics.hpp"
#include "optomech/params.hpp"
#include "optomech/steady_state.hpp"

namespace optomech {

// Auxiliary quantities of the effective mechanical response at one Fourier
// frequency. beta_plus/minus and tau_plus/minus parametrise the two-cavity
// response; Pi, Phi, zeta, varphi combine them.
struct ResponseCoefficients {
    double beta_plus = 0.0;
    double beta_minus = 0.0;
    double tau_plus = 0.0;
    double tau_minus = 0.0;
    double pi = 0.0;
    double phi = 0.0;
    double zeta = 0.0;
    double varphi = 0.0;
};

ResponseCoefficients response_coefficients(const ScaledParams& params, double delta_eff,
                                           double omega);

struct MechanicalResponse {
    std::vector<double> omega_grid;
    std::vector<double> omega_eff_sq;  // Omega_eff^2; may go negative deep in the spring regime
    std::vector<double> omega_eff;     // sqrt(Omega_eff^2), 0 where Omega_eff^2 < 0
    std::vector<double> gamma_eff;
    std::vector<std::complex<double>> chi_eff;
    std::vector<double> gamma_cool;
    std::vector<std::size_t> flagged;  // grid indices where zeta == 0 (left at 0 in every field)
};

// Net optical cooling rate gamma_C(omega). Throws NumericError at a pole.
double net_cooling_rate(const ClassicalSteadyState& ss, const ScaledParams& params, double omega);

// Requires a stable steady state.
MechanicalResponse effective_response(const ClassicalSteadyState& ss, const ScaledParams& params,
                                      std::span<const double> omega_grid);

// Lambda = gamma_C(assisted) / gamma_C(unassisted) at Delta = omega = omega_m.
// Both configurations share every parameter of `base` except (J, P_R); the
// unassisted one has J = 0, P_R = 0.
double amplification_factor(const SystemParams& base, double j_over_omega_m, double power_right);

enum class ThermalNoise {
    Coth,   // gamma_m (omega/omega_m) coth(hbar omega / 2 k_B T)
    White,  // gamma_m (2 nbar + 1)
};

struct SpectrumOptions {
    ThermalNoise noise = ThermalNoise::Coth;
    double rel_tol = 1e-6;        // quadrature target
    int max_refinements = 4;      // grid-refinement cap before warning
};

struct SpectrumResult {
    std::vector<double> omega_grid;
    std::vector<double> s_q;
    std::vector<double> s_th;
    std::vector<double> s_rp;
    double var_q = 0.0;
    double var_p = 0.0;  // +inf in Coth mode (log-divergent)
    std::vector<std::string> warnings;
};

// S_q(omega) from the input-to-fluctuation transfer matrix; S_rp is the
// cavity-noise part divided by |chi_eff|^2. The grid must cover
// [-4, 4] omega_m. Variances are integrated adaptively, independent of the grid.
SpectrumResult position_spectrum(const ClassicalSteadyState& ss, const ScaledParams& params,
                                 std::span<const double> omega_grid,
                                 const SpectrumOptions& options = {});

// Thermal force spectrum at one frequency.
double thermal_spectrum(const ScaledParams& params, double omega, ThermalNoise noise);

// Grid on [-span, span] with points clustered around the mechanical peaks.
std::vector<double> spectrum_grid(const ClassicalSteadyState& ss, const ScaledParams& params,
                                  int points = 2001, double span = 4.0);

// Closed-form variances from the sixth-order spectral integrals.
struct AnalyticPhonon {
    double n_f = 0.0;
    double var_q = 0.0;
    double var_p = 0.0;
    double imag_residue = 0.0;  // |Im| of the two integrals relative to their size
};

AnalyticPhonon analytic_phonon(const ClassicalSteadyState& ss, const ScaledParams& params);
double phonon_number_analytic(const ClassicalSteadyState& ss, const ScaledParams& params);

// n_f from a Lyapunov covariance: V(q,q) and V(p,p) in the quadrature basis,
// V(b^+, b) - 1/2 in the complex-mode basis.
double phonon_number_numeric(const CovarianceMatrix& cov);

// Solves the Lyapunov equation in both bases and cross-checks them.
struct LyapunovPhonon {
    double quadrature = 0.0;
    double complex_mode = 0.0;
};

inline constexpr double kBasisAgreement = 1e-9;

LyapunovPhonon phonon_number_lyapunov(const ClassicalSteadyState& ss, const ScaledParams& params);

struct ImprovementRate {
    double chi = 0.0;  // (n_f,assisted - n_f,unassisted) / n_f,unassisted
    double magnitude = 0.0;
    double nf_assisted = 0.0;
    double nf_unassisted = 0.0;
};

// Same controlled comparison as amplification_factor.
ImprovementRate improvement_rate(const SystemParams& base, double j_over_omega_m,
                                 double power_right);

}  // namespace optomech
