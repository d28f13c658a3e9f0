#include "optomech/cooling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

void require_stable(const ClassicalSteadyState& ss, const char* who) {
    if (!ss.stable) {
        throw StabilityError(std::string(who) + ": steady state is dynamically unstable (margin " +
                                 std::to_string(ss.stability_margin) + ")",
                             ss.stability_margin);
    }
}

// Both configurations of the controlled comparison, pinned at Delta = omega_m.
struct Comparison {
    ScaledParams unassisted;
    ScaledParams assisted;
    ClassicalSteadyState ss_unassisted;
    ClassicalSteadyState ss_assisted;
};

Comparison compare(const SystemParams& base, double j_over_omega_m, double power_right,
                   const char* who) {
    SystemParams un = base;
    un.detuning_mode = DetuningMode::Pinned;
    un.delta = un.omega_m;
    un.tunneling_j = 0.0;
    un.power_right = 0.0;
    const SystemParams as = with_assist(un, j_over_omega_m, power_right);

    Comparison c;
    c.unassisted = derive_dimensionless(un);
    c.assisted = derive_dimensionless(as);
    c.ss_unassisted = solve_steady_state(c.unassisted);
    c.ss_assisted = solve_steady_state(c.assisted);
    require_stable(c.ss_unassisted, who);
    require_stable(c.ss_assisted, who);
    return c;
}

}  // namespace

ResponseCoefficients response_coefficients(const ScaledParams& p, double delta, double w) {
    const double kc = p.kappa_c;
    const double ka = p.kappa_a;
    const double da = p.delta_a;
    const double j2 = p.tunneling_j * p.tunneling_j;

    ResponseCoefficients r;
    r.beta_plus = j2 + kc * ka - (w + delta) * (w + da);
    r.beta_minus = -j2 - kc * ka + (w - delta) * (w - da);
    r.tau_plus = kc * (w + da) + ka * (w + delta);
    r.tau_minus = kc * (w - da) + ka * (w - delta);
    r.pi = r.beta_plus * r.beta_minus + r.tau_plus * r.tau_minus;
    r.phi = 2.0 * (kc * kc * ka + j2 * (kc + ka) + ka * (delta * delta - w * w) +
                   kc * (ka * ka - w * w + da * da));
    r.zeta = (r.beta_plus * r.beta_plus + r.tau_plus * r.tau_plus) *
             (r.beta_minus * r.beta_minus + r.tau_minus * r.tau_minus);
    r.varphi = j2 * da - delta * (ka * ka - w * w + da * da);
    return r;
}

double net_cooling_rate(const ClassicalSteadyState& ss, const ScaledParams& p, double w) {
    const auto r = response_coefficients(p, ss.delta_eff, w);
    if (r.zeta == 0.0) {
        throw NumericError("net_cooling_rate: response pole at omega = " + std::to_string(w));
    }
    const double g2 = std::norm(ss.coupling_g);
    return 2.0 * g2 * (2.0 * ss.delta_eff * p.kappa_a * r.pi - r.varphi * r.phi) / r.zeta;
}

MechanicalResponse effective_response(const ClassicalSteadyState& ss, const ScaledParams& p,
                                      std::span<const double> grid) {
    require_stable(ss, "effective_response");
    const double g2 = std::norm(ss.coupling_g);
    const double d = ss.delta_eff;
    const std::size_t n = grid.size();

    MechanicalResponse out;
    out.omega_grid.assign(grid.begin(), grid.end());
    out.omega_eff_sq.assign(n, 0.0);
    out.omega_eff.assign(n, 0.0);
    out.gamma_eff.assign(n, 0.0);
    out.chi_eff.assign(n, {0.0, 0.0});
    out.gamma_cool.assign(n, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const double w = grid[i];
        const auto r = response_coefficients(p, d, w);
        if (r.zeta == 0.0 || !std::isfinite(r.zeta)) {
            out.flagged.push_back(i);
            continue;
        }
        const double o2 = 1.0 - 2.0 * g2 * (r.varphi * r.pi + 2.0 * d * p.kappa_a * w * w * r.phi) / r.zeta;
        const double gc = 2.0 * g2 * (2.0 * d * p.kappa_a * r.pi - r.varphi * r.phi) / r.zeta;
        const double ge = p.gamma_m + gc;
        const std::complex<double> denom(o2 - w * w, -w * ge);
        if (!(std::isfinite(o2) && std::isfinite(gc)) || denom == 0.0) {
            out.flagged.push_back(i);
            continue;
        }
        out.omega_eff_sq[i] = o2;
        out.omega_eff[i] = o2 > 0.0 ? std::sqrt(o2) : 0.0;
        out.gamma_cool[i] = gc;
        out.gamma_eff[i] = ge;
        out.chi_eff[i] = 1.0 / denom;
    }
    return out;
}

double amplification_factor(const SystemParams& base, double j_over_omega_m, double power_right) {
    const auto c = compare(base, j_over_omega_m, power_right, "amplification_factor");
    const double un = net_cooling_rate(c.ss_unassisted, c.unassisted, 1.0);
    if (!(un > 0.0)) {
        throw NumericError("amplification_factor: unassisted cooling rate is not positive");
    }
    return net_cooling_rate(c.ss_assisted, c.assisted, 1.0) / un;
}

double phonon_number_numeric(const CovarianceMatrix& cov) {
    double nf = 0.0;
    if (cov.basis == Basis::Quadrature) {
        nf = 0.5 * (cov.v(4, 4).real() + cov.v(5, 5).real() - 1.0);
    } else {
        // V(b^+, b) = <b^+ b> + 1/2
        nf = cov.v(4, 1).real() - 0.5;
    }
    if (!std::isfinite(nf)) {
        throw NumericError("phonon_number_numeric: occupation is not finite");
    }
    if (nf < -1e-9) {
        throw IntegrityError("phonon_number_numeric: negative occupation " + std::to_string(nf));
    }
    return nf;
}

LyapunovPhonon phonon_number_lyapunov(const ClassicalSteadyState& ss, const ScaledParams& p) {
    LyapunovPhonon out;
    out.quadrature = phonon_number_numeric(solve_lyapunov(build_drift(ss, p, Basis::Quadrature)));
    out.complex_mode = phonon_number_numeric(solve_lyapunov(build_drift(ss, p, Basis::ComplexMode)));
    const double scale = std::max(1.0, std::abs(out.quadrature));
    if (std::abs(out.quadrature - out.complex_mode) > kBasisAgreement * scale) {
        throw IntegrityError("phonon_number_lyapunov: bases disagree (" +
                             std::to_string(out.quadrature) + " vs " +
                             std::to_string(out.complex_mode) + ")");
    }
    return out;
}

ImprovementRate improvement_rate(const SystemParams& base, double j_over_omega_m,
                                 double power_right) {
    const auto c = compare(base, j_over_omega_m, power_right, "improvement_rate");
    ImprovementRate r;
    r.nf_unassisted = phonon_number_numeric(
        solve_lyapunov(build_drift(c.ss_unassisted, c.unassisted, Basis::Quadrature)));
    r.nf_assisted = phonon_number_numeric(
        solve_lyapunov(build_drift(c.ss_assisted, c.assisted, Basis::Quadrature)));
    if (r.nf_unassisted == 0.0) {
        throw NumericError("improvement_rate: unassisted occupation is zero");
    }
    r.chi = (r.nf_assisted - r.nf_unassisted) / r.nf_unassisted;
    r.magnitude = std::abs(r.chi);
    return r;
}

}  // namespace optomech
