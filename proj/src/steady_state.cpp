#include "optomech/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "optomech/errors.hpp"
#include "optomech/linear_dynamics.hpp"

namespace optomech {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

struct Amplitudes {
    cd alpha_c;
    cd alpha_a;
};

// Linear two-cavity steady state at a fixed effective detuning.
Amplitudes amplitudes_at(const ScaledParams& p, double delta_eff) {
    const cd za{p.kappa_a, p.delta_a};
    const cd zc{p.kappa_c, delta_eff};
    const double j = p.tunneling_j;
    const cd num = -kI * p.drive_left * za - j * p.drive_right;
    const cd den = zc * za + j * j;
    Amplitudes a;
    a.alpha_c = num / den;
    a.alpha_a = -kI * (p.drive_right + j * a.alpha_c) / za;
    return a;
}

double scaled(double r, double scale) { return scale > 0.0 ? r / scale : r; }

double fixed_point_residual(const ScaledParams& p, const Amplitudes& a, double delta_c, double q) {
    const double delta = delta_c - p.g0 * q;
    const double j = p.tunneling_j;
    const cd zc{p.kappa_c, delta};
    const cd za{p.kappa_a, p.delta_a};
    const cd r1 = -zc * a.alpha_c - kI * j * a.alpha_a - kI * p.drive_left;
    const cd r2 = -za * a.alpha_a - kI * j * a.alpha_c - kI * p.drive_right;
    const double n_c = std::norm(a.alpha_c);
    const double r3 = -q + p.g0 * n_c;
    const double s1 = std::abs(zc) * std::abs(a.alpha_c) + j * std::abs(a.alpha_a) + p.drive_left;
    const double s2 = std::abs(za) * std::abs(a.alpha_a) + j * std::abs(a.alpha_c) + p.drive_right;
    const double s3 = std::abs(q) + p.g0 * n_c;
    return std::max({scaled(std::abs(r1), s1), scaled(std::abs(r2), s2), scaled(std::abs(r3), s3)});
}

ClassicalSteadyState assemble(const ScaledParams& p, double delta_eff, double delta_c,
                              const Amplitudes& a, double q, bool gauge) {
    ClassicalSteadyState ss;
    ss.delta_eff = delta_eff;
    ss.delta_c = delta_c;
    ss.q_ss = q;
    ss.x_ss = q * p.si.displacement;
    ss.residual = fixed_point_residual(p, a, delta_c, q);
    ss.phase = (gauge && std::abs(a.alpha_c) > 0.0) ? std::arg(a.alpha_c) : 0.0;
    const cd rot = std::polar(1.0, -ss.phase);
    ss.alpha_c = a.alpha_c * rot;
    ss.alpha_a = a.alpha_a * rot;
    if (gauge) {
        ss.alpha_c = cd(std::abs(a.alpha_c), 0.0);
    }
    ss.coupling_g = p.g0 * ss.alpha_c;

    const Mat6 drift = quadrature_drift(p, delta_eff, ss.coupling_g);
    const auto verdict = check_stability(DriftModel::from_matrices(
        Basis::Quadrature, drift.cast<cd>(), Mat6c::Zero()));
    ss.stable = verdict.stable;
    ss.stability_margin = verdict.margin;
    return ss;
}

std::vector<ClassicalSteadyState> all_self_consistent_states(const ScaledParams& p, bool gauge) {
    std::vector<ClassicalSteadyState> out;
    for (double y : real_cubic_roots(steady_state_cubic(p))) {
        out.push_back(steady_state_at_shift(p, y, gauge));
    }
    return out;
}

double continue_from_zero_drive(const ScaledParams& p) {
    constexpr int kSteps = 100;
    ScaledParams step = p;
    step.drive_left = 0.0;
    auto roots = real_cubic_roots(steady_state_cubic(step));
    if (roots.empty()) {
        throw NumericError("steady state: cubic has no real root at zero drive");
    }
    double y = *std::min_element(roots.begin(), roots.end(),
                                 [](double a, double b) { return std::abs(a) < std::abs(b); });
    for (int k = 1; k <= kSteps; ++k) {
        // uniform steps in power
        step.drive_left = p.drive_left * std::sqrt(static_cast<double>(k) / kSteps);
        roots = real_cubic_roots(steady_state_cubic(step));
        if (roots.empty()) {
            throw NumericError("steady state: cubic has no real root during continuation");
        }
        y = *std::min_element(roots.begin(), roots.end(), [y](double a, double b) {
            return std::abs(a - y) < std::abs(b - y);
        });
    }
    return y;
}

}  // namespace

std::array<double, 4> steady_state_cubic(const ScaledParams& p) {
    // y |den(Delta_c - y)|^2 = g0^2 |num|^2 with
    // den(D) = (kappa_c + i D)(kappa_a + i Delta_a) + J^2,
    // num = -i Omega_L (kappa_a + i Delta_a) - J Omega_R.
    const double j2 = p.tunneling_j * p.tunneling_j;
    const double c0 = p.kappa_c * p.kappa_a + j2;
    const double c1 = p.kappa_c * p.delta_a;
    const double p2 = p.delta_a * p.delta_a + p.kappa_a * p.kappa_a;
    const double p1 = 2.0 * (p.kappa_a * c1 - p.delta_a * c0);
    const double p0 = c0 * c0 + c1 * c1;
    const double d = p.delta;

    const double nr = p.drive_left * p.delta_a - p.tunneling_j * p.drive_right;
    const double ni = p.drive_left * p.kappa_a;
    const double k = p.g0 * p.g0 * (nr * nr + ni * ni);

    return {-k, p2 * d * d + p1 * d + p0, -2.0 * p2 * d - p1, p2};
}

double cubic_residual(const std::array<double, 4>& c, double y) {
    double value = 0.0;
    double magnitude = 0.0;
    double power = 1.0;
    for (double ck : c) {
        value += ck * power;
        magnitude += std::abs(ck * power);
        power *= y;
    }
    return magnitude > 0.0 ? std::abs(value) / magnitude : 0.0;
}

std::vector<double> real_cubic_roots(const std::array<double, 4>& c) {
    if (!(c[3] != 0.0)) {
        throw NumericError("real_cubic_roots: leading coefficient is zero");
    }
    const double a = c[3], b = c[2], cc = c[1], d = c[0];
    // Root count from the discriminant; companion eigenvalues for the values.
    const double disc = 18.0 * a * b * cc * d - 4.0 * b * b * b * d + b * b * cc * cc -
                        4.0 * a * cc * cc * cc - 27.0 * a * a * d * d;
    const std::size_t count = disc > 0.0 ? 3 : 1;

    Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
    companion(0, 0) = -b / a;
    companion(0, 1) = -cc / a;
    companion(0, 2) = -d / a;
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    Eigen::EigenSolver<Eigen::Matrix3d> solver(companion, false);
    if (solver.info() != Eigen::Success) {
        throw NumericError("real_cubic_roots: companion eigen-solver did not converge");
    }
    std::vector<std::complex<double>> eig(solver.eigenvalues().data(),
                                          solver.eigenvalues().data() + 3);
    std::sort(eig.begin(), eig.end(), [](const auto& x, const auto& y) {
        return std::abs(x.imag()) < std::abs(y.imag());
    });

    std::vector<double> roots;
    for (std::size_t i = 0; i < count; ++i) {
        double y = eig[i].real();
        const double f = ((a * y + b) * y + cc) * y + d;
        const double df = (3.0 * a * y + 2.0 * b) * y + cc;
        if (df != 0.0) {
            const double polished = y - f / df;
            if (std::isfinite(polished) &&
                cubic_residual(c, polished) <= cubic_residual(c, y)) {
                y = polished;
            }
        }
        roots.push_back(y);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

ClassicalSteadyState steady_state_at_shift(const ScaledParams& p, double shift, bool gauge) {
    const double delta_c = p.delta;
    const double delta_eff = delta_c - shift;
    const Amplitudes a = amplitudes_at(p, delta_eff);
    return assemble(p, delta_eff, delta_c, a, shift / p.g0, gauge);
}

ClassicalSteadyState solve_steady_state(const ScaledParams& p, const SteadyStateOptions& opt) {
    if (p.detuning_mode == DetuningMode::Pinned) {
        const Amplitudes a = amplitudes_at(p, p.delta);
        const double q = p.g0 * std::norm(a.alpha_c);
        const double delta_c = p.delta + p.g0 * q;
        return assemble(p, p.delta, delta_c, a, q, opt.apply_phase_gauge);
    }

    const auto coeffs = steady_state_cubic(p);
    const auto roots = real_cubic_roots(coeffs);
    if (roots.empty()) {
        throw NumericError("solve_steady_state: cubic returned no real root");
    }
    double y = 0.0;
    switch (opt.policy) {
        case RootPolicy::LowestDisplacement: y = roots.front(); break;
        case RootPolicy::HighestDisplacement: y = roots.back(); break;
        case RootPolicy::ContinuationFromZeroDrive: y = continue_from_zero_drive(p); break;
    }
    auto ss = steady_state_at_shift(p, y, opt.apply_phase_gauge);
    if (ss.residual > kSteadyStateTolerance) {
        throw NumericError("solve_steady_state: fixed-point residual " +
                           std::to_string(ss.residual) + " above tolerance");
    }
    return ss;
}

ClassicalSteadyState solve_steady_state(const SystemParams& params, const SteadyStateOptions& opt) {
    return solve_steady_state(derive_dimensionless(params), opt);
}

std::vector<BistabilityPoint> bistability_scan(const SystemParams& params,
                                               std::span<const double> power_grid) {
    for (std::size_t i = 0; i < power_grid.size(); ++i) {
        if (!(power_grid[i] >= 0.0) || !std::isfinite(power_grid[i])) {
            throw ParameterError("bistability_scan: powers must be finite and >= 0");
        }
        if (i > 0 && !(power_grid[i] > power_grid[i - 1])) {
            throw ParameterError("bistability_scan: power grid must be strictly increasing");
        }
    }
    std::vector<BistabilityPoint> out;
    out.reserve(power_grid.size());
    SystemParams sc = params;
    sc.detuning_mode = DetuningMode::SelfConsistent;
    for (double power : power_grid) {
        sc.power_left = power;
        const ScaledParams p = derive_dimensionless(sc);
        BistabilityPoint point;
        point.power_left = power;
        for (const auto& ss : all_self_consistent_states(p, true)) {
            point.roots.push_back({ss.x_ss, ss.q_ss, ss.delta_eff, ss.stable, ss.stability_margin});
        }
        std::sort(point.roots.begin(), point.roots.end(),
                  [](const auto& a, const auto& b) { return a.x_ss < b.x_ss; });
        out.push_back(std::move(point));
    }
    return out;
}

}  // namespace optomech
