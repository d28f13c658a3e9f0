#include "optomech/params.hpp"

#include <cmath>
#include <string>

#include "optomech/errors.hpp"

namespace optomech {

std::string_view to_string(DetuningMode mode) {
    return mode == DetuningMode::Pinned ? "pinned" : "self-consistent";
}

namespace {

void require(bool ok, const char* field, const std::string& why) {
    if (!ok) {
        throw ParameterError(std::string("parameter '") + field + "': " + why);
    }
}

void require_finite(double v, const char* field) {
    require(std::isfinite(v), field, "must be finite");
}

}  // namespace

void validate(const SystemParams& p) {
    require_finite(p.omega_m, "omega_m");
    require_finite(p.kappa_c, "kappa_c");
    require_finite(p.kappa_a, "kappa_a");
    require_finite(p.gamma_m, "gamma_m");
    require_finite(p.delta, "delta");
    require_finite(p.delta_a, "delta_a");
    require_finite(p.tunneling_j, "tunneling_j");
    require_finite(p.omega_c, "omega_c");
    require_finite(p.cavity_length, "cavity_length");
    require_finite(p.mass, "mass");
    require_finite(p.power_left, "power_left");
    require_finite(p.power_right, "power_right");
    require_finite(p.wavelength, "wavelength");
    require_finite(p.nbar, "nbar");

    require(p.omega_m > 0.0, "omega_m", "must be > 0");
    require(p.kappa_c > 0.0, "kappa_c", "must be > 0");
    require(p.kappa_a > 0.0, "kappa_a", "must be > 0");
    require(p.gamma_m >= 0.0, "gamma_m", "must be >= 0");
    require(p.mass > 0.0, "mass", "must be > 0");
    require(p.cavity_length > 0.0, "cavity_length", "must be > 0");
    require(p.omega_c > 0.0, "omega_c", "must be > 0");
    require(p.wavelength > 0.0, "wavelength", "must be > 0");
    require(p.power_left >= 0.0, "power_left", "must be >= 0");
    require(p.power_right >= 0.0, "power_right", "must be >= 0");
    require(p.nbar >= 0.0, "nbar", "must be >= 0");
    require(p.tunneling_j >= 0.0, "tunneling_j", "must be >= 0");
}

ScaledParams derive_dimensionless(const SystemParams& p) {
    validate(p);
    const double wm = p.omega_m;
    const double omega_drive = 2.0 * kPi * kSpeedOfLight / p.wavelength;

    ScaledParams s;
    s.kappa_c = p.kappa_c / wm;
    s.kappa_a = p.kappa_a / wm;
    s.gamma_m = p.gamma_m / wm;
    s.detuning_mode = p.detuning_mode;
    s.delta = p.delta / wm;
    s.delta_a = p.delta_a / wm;
    s.tunneling_j = p.tunneling_j / wm;
    s.nbar = p.nbar;

    s.si.omega_m = wm;
    s.si.drive_photon_energy = kHbar * omega_drive;
    s.si.displacement = std::sqrt(kHbar / (p.mass * wm));
    s.si.omega_c = p.omega_c;
    s.si.cavity_length = p.cavity_length;
    s.si.mass = p.mass;
    s.si.wavelength = p.wavelength;

    const double g = p.omega_c / p.cavity_length;
    s.g0 = g * s.si.displacement / wm;
    s.drive_left = std::sqrt(2.0 * p.power_left * p.kappa_c / s.si.drive_photon_energy) / wm;
    s.drive_right = std::sqrt(2.0 * p.power_right * p.kappa_a / s.si.drive_photon_energy) / wm;

    require(std::isfinite(s.g0) && s.g0 > 0.0, "omega_c", "derived g0 must be finite and > 0");
    require(std::isfinite(s.drive_left), "power_left", "derived Omega_L is not finite");
    require(std::isfinite(s.drive_right), "power_right", "derived Omega_R is not finite");
    return s;
}

SystemParams restore_si(const ScaledParams& s) {
    const double wm = s.si.omega_m;
    SystemParams p;
    p.omega_m = wm;
    p.kappa_c = s.kappa_c * wm;
    p.kappa_a = s.kappa_a * wm;
    p.gamma_m = s.gamma_m * wm;
    p.detuning_mode = s.detuning_mode;
    p.delta = s.delta * wm;
    p.delta_a = s.delta_a * wm;
    p.tunneling_j = s.tunneling_j * wm;
    p.omega_c = s.si.omega_c;
    p.cavity_length = s.si.cavity_length;
    p.mass = s.si.mass;
    p.wavelength = s.si.wavelength;
    p.nbar = s.nbar;
    // Omega^2 = 2 P kappa / (hbar omega_L)
    const double ol = s.drive_left * wm;
    const double orr = s.drive_right * wm;
    p.power_left = ol * ol * s.si.drive_photon_energy / (2.0 * p.kappa_c);
    p.power_right = orr * orr * s.si.drive_photon_energy / (2.0 * p.kappa_a);
    return p;
}

SystemParams fig1_preset() {
    SystemParams p;
    p.omega_m = 2.0 * kPi * 10e6;
    p.kappa_c = 0.1 * p.omega_m;
    p.kappa_a = 0.1 * p.omega_m;
    p.gamma_m = 1e-5 * p.omega_m;
    p.detuning_mode = DetuningMode::Pinned;
    p.delta = p.omega_m;
    p.delta_a = 0.0;
    p.tunneling_j = 0.0;
    p.omega_c = 2.817e7 * p.omega_m;
    p.cavity_length = 0.5e-3;
    p.mass = 250e-12;
    p.power_left = 30e-3;
    p.power_right = 0.0;
    p.wavelength = 1064e-9;
    p.nbar = 1e3;
    return p;
}

SystemParams with_assist(SystemParams p, double j_over_omega_m, double power_right) {
    p.tunneling_j = j_over_omega_m * p.omega_m;
    p.power_right = power_right;
    return p;
}

}  // namespace optomech
