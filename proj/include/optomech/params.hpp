#pragma once

#include <string_view>

namespace optomech {

inline constexpr double kHbar = 1.054571817e-34;         // J s
inline constexpr double kSpeedOfLight = 299792458.0;     // m/s
inline constexpr double kPi = 3.14159265358979323846;

// How the cooling-cavity detuning is specified.
//   Pinned:         `delta` is the effective detuning Delta; the bare detuning
//                   Delta_c is backed out from the mechanical shift.
//   SelfConsistent: `delta` is the bare detuning Delta_c; Delta follows from
//                   the classical steady state (cubic in <q>).
enum class DetuningMode { Pinned, SelfConsistent };

std::string_view to_string(DetuningMode mode);

// Physical scenario in SI units (angular frequencies and rates in rad/s).
struct SystemParams {
    double omega_m = 0.0;
    double kappa_c = 0.0;
    double kappa_a = 0.0;
    double gamma_m = 0.0;
    DetuningMode detuning_mode = DetuningMode::Pinned;
    double delta = 0.0;          // Delta (pinned) or Delta_c (self-consistent)
    double delta_a = 0.0;
    double tunneling_j = 0.0;
    double omega_c = 0.0;
    double cavity_length = 0.0;  // m
    double mass = 0.0;           // kg
    double power_left = 0.0;     // W
    double power_right = 0.0;    // W
    double wavelength = 0.0;     // m; sets omega_L = omega_R = 2 pi c / lambda
    double nbar = 0.0;
};

// Conversion factors between the dimensionless model and SI.
struct SiScale {
    double omega_m = 0.0;             // rad/s
    double drive_photon_energy = 0.0; // hbar * omega_L, J
    double displacement = 0.0;        // m per unit of q, sqrt(hbar / (m omega_m))
    double omega_c = 0.0;
    double cavity_length = 0.0;
    double mass = 0.0;
    double wavelength = 0.0;
};

// Everything in units of omega_m (omega_m == 1).
struct ScaledParams {
    double kappa_c = 0.0;
    double kappa_a = 0.0;
    double gamma_m = 0.0;
    DetuningMode detuning_mode = DetuningMode::Pinned;
    double delta = 0.0;
    double delta_a = 0.0;
    double tunneling_j = 0.0;
    double g0 = 0.0;           // single-photon coupling in q units
    double drive_left = 0.0;   // Omega_L
    double drive_right = 0.0;  // Omega_R
    double nbar = 0.0;
    SiScale si;
};

// Throws ParameterError naming the first offending field.
void validate(const SystemParams& params);

ScaledParams derive_dimensionless(const SystemParams& params);

// Inverse of derive_dimensionless.
SystemParams restore_si(const ScaledParams& scaled);

// Reference scenario: omega_m/2pi = 10 MHz, kappa_c = kappa_a = 0.1 omega_m,
// gamma_m = 1e-5 omega_m, Delta = omega_m (pinned), Delta_a = 0,
// omega_c = 2.817e7 omega_m, P_L = 30 mW, m = 250 ng, nbar = 1e3, L = 0.5 mm,
// lambda = 1064 nm. Unassisted: J = 0, P_R = 0.
SystemParams fig1_preset();

// Same scenario with the auxiliary cavity switched on.
// `j_over_omega_m` is J / omega_m, `power_right` in W.
SystemParams with_assist(SystemParams params, double j_over_omega_m, double power_right);

}  // namespace optomech
