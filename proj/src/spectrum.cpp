#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "optomech/cooling.hpp"
#include "optomech/errors.hpp"

namespace optomech {

namespace {

using cd = std::complex<double>;
using Vec6c = Eigen::Matrix<cd, 6, 1>;

constexpr int kQ = 4;
constexpr int kP = 5;
constexpr double kRefineChange = 1e-3;

struct Pole {
    double center;
    double width;
};

// (-i w - A) x = xi  =>  x(w) = T(w) xi. Poles at w = i lambda.
std::vector<Pole> drift_poles(const Mat6& a) {
    Eigen::EigenSolver<Mat6> solver(a, false);
    if (solver.info() != Eigen::Success) {
        throw NumericError("position_spectrum: eigen-solver failed on the drift matrix");
    }
    std::vector<Pole> poles;
    for (int i = 0; i < 6; ++i) {
        const cd l = solver.eigenvalues()(i);
        poles.push_back({-l.imag(), std::max(std::abs(l.real()), 1e-12)});
    }
    return poles;
}

// Row q of T(w).
Vec6c transfer_row(const Mat6& a, double w) {
    Mat6c m = -a.cast<cd>();
    m.diagonal().array() += cd(0.0, -w);
    Vec6c e = Vec6c::Zero();
    e(kQ) = 1.0;
    // row q of M^-1 solves M^T x = e_q
    return m.transpose().partialPivLu().solve(e);
}

struct SpectralParts {
    double cavity = 0.0;   // sum over optical inputs of |T_qk|^2 D_k
    double thermal = 0.0;  // |T_q,xi|^2 S_th
    cd chi;
};

SpectralParts spectral_parts(const Mat6& a, const ScaledParams& p, double w, ThermalNoise noise) {
    const Vec6c row = transfer_row(a, w);
    SpectralParts s;
    s.cavity = p.kappa_c * (std::norm(row(0)) + std::norm(row(1))) +
               p.kappa_a * (std::norm(row(2)) + std::norm(row(3)));
    s.chi = row(kP);
    s.thermal = std::norm(row(kP)) * thermal_spectrum(p, w, noise);
    return s;
}

std::vector<double> breakpoints(const std::vector<Pole>& poles) {
    std::vector<double> pts;
    for (const auto& pl : poles) {
        for (double f : {0.0, 1.0, 5.0, 50.0}) {
            pts.push_back(pl.center - f * pl.width);
            pts.push_back(pl.center + f * pl.width);
        }
    }
    std::sort(pts.begin(), pts.end());
    // Points much closer than the narrowest line would leave a sliver segment
    // on top of a peak where the error estimate never drops below tolerance.
    double narrowest = std::numeric_limits<double>::infinity();
    for (const auto& pl : poles) {
        if (pl.width > 0.0) narrowest = std::min(narrowest, pl.width);
    }
    const double merge = std::isfinite(narrowest) ? 1e-3 * narrowest : 0.0;
    std::vector<double> out;
    for (double x : pts) {
        if (out.empty() || x - out.back() > std::max(merge, 1e-12 * std::max(1.0, std::abs(x)))) out.push_back(x);
    }
    return out;
}

template <typename F>
double integrate_segments(F f, const std::vector<double>& pts, double rel_tol) {
    using boost::math::quadrature::gauss_kronrod;
    constexpr double kInf = std::numeric_limits<double>::infinity();
    double total = gauss_kronrod<double, 61>::integrate(f, -kInf, pts.front(), 15, rel_tol);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        total += gauss_kronrod<double, 61>::integrate(f, pts[i], pts[i + 1], 15, rel_tol);
    }
    total += gauss_kronrod<double, 61>::integrate(f, pts.back(), kInf, 15, rel_tol);
    return total;
}

std::vector<double> bisect(const std::vector<double>& pts) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        out.push_back(pts[i]);
        out.push_back(0.5 * (pts[i] + pts[i + 1]));
    }
    out.push_back(pts.back());
    return out;
}

// Integral over the real line, re-done on bisected breakpoints until two
// successive passes agree to 0.1% or the cap is hit.
template <typename F>
double refined_integral(F f, std::vector<double> pts, const SpectrumOptions& opt, const char* what,
                        std::vector<std::string>& warnings) {
    double prev = integrate_segments(f, pts, opt.rel_tol);
    for (int k = 0; k < opt.max_refinements; ++k) {
        pts = bisect(pts);
        const double next = integrate_segments(f, pts, opt.rel_tol);
        const double change = std::abs(next - prev) / std::max(std::abs(next), 1e-300);
        prev = next;
        if (change <= kRefineChange) return prev;
    }
    warnings.push_back(std::string(what) + ": integral still changing by more than 0.1% after " +
                       std::to_string(opt.max_refinements) + " refinements");
    return prev;
}

}  // namespace

double thermal_spectrum(const ScaledParams& p, double w, ThermalNoise noise) {
    if (noise == ThermalNoise::White || !(p.gamma_m > 0.0)) {
        return p.gamma_m * (2.0 * p.nbar + 1.0);
    }
    if (p.nbar == 0.0) return p.gamma_m * std::abs(w);
    // k_B T / (hbar omega_m) from nbar = 1 / (exp(1/T) - 1)
    const double temp = 1.0 / std::log1p(1.0 / p.nbar);
    const double x = w / (2.0 * temp);
    if (std::abs(x) < 1e-8) return p.gamma_m * 2.0 * temp;
    return p.gamma_m * w / std::tanh(x);
}

std::vector<double> spectrum_grid(const ClassicalSteadyState& ss, const ScaledParams& p, int points,
                                  double span) {
    if (points < 2 || !(span > 0.0)) {
        throw ParameterError("spectrum_grid: need at least 2 points and a positive span");
    }
    std::vector<double> grid;
    for (int i = 0; i < points; ++i) {
        grid.push_back(-span + 2.0 * span * i / (points - 1));
    }
    const Mat6 a = quadrature_drift(p, ss.delta_eff, ss.coupling_g);
    for (const auto& pl : drift_poles(a)) {
        if (std::abs(pl.center) > span) continue;
        grid.push_back(pl.center);
        for (int k = -16; k <= 24; ++k) {
            const double off = pl.width * std::pow(10.0, k / 8.0);
            for (double x : {pl.center - off, pl.center + off}) {
                if (std::abs(x) <= span) grid.push_back(x);
            }
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

SpectrumResult position_spectrum(const ClassicalSteadyState& ss, const ScaledParams& p,
                                 std::span<const double> grid, const SpectrumOptions& opt) {
    if (!ss.stable) {
        throw StabilityError("position_spectrum: steady state is dynamically unstable",
                             ss.stability_margin);
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw ParameterError("position_spectrum: frequency grid must be strictly increasing");
        }
    }
    if (grid.empty() || grid.front() > -4.0 || grid.back() < 4.0) {
        throw ParameterError("position_spectrum: frequency grid must cover [-4, 4] omega_m");
    }

    const Mat6 a = quadrature_drift(p, ss.delta_eff, ss.coupling_g);
    SpectrumResult out;
    out.omega_grid.assign(grid.begin(), grid.end());
    for (double w : grid) {
        const auto s = spectral_parts(a, p, w, opt.noise);
        out.s_q.push_back(s.cavity + s.thermal);
        out.s_th.push_back(thermal_spectrum(p, w, opt.noise));
        out.s_rp.push_back(s.cavity / std::norm(s.chi));
    }

    // Resolution check around the mechanical peak.
    const double w0 = 1.0;
    const double omega_peak = [&] {
        const double r = std::sqrt(std::max(0.0, effective_response(ss, p, std::span(&w0, 1)).omega_eff_sq[0]));
        return r > 0.0 ? r : 1.0;
    }();
    const double width = effective_response(ss, p, std::span(&w0, 1)).gamma_eff[0];
    double max_gap = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid[i] >= omega_peak - 2.0 * width && grid[i - 1] <= omega_peak + 2.0 * width) {
            max_gap = std::max(max_gap, grid[i] - grid[i - 1]);
        }
    }
    if (width > 0.0 && max_gap > width / 10.0) {
        out.warnings.push_back("frequency grid spacing near the mechanical peak exceeds Gamma_eff/10");
    }

    const auto pts = breakpoints(drift_poles(a));
    const auto s_q = [&](double w) {
        const auto s = spectral_parts(a, p, w, opt.noise);
        return s.cavity + s.thermal;
    };
    constexpr double kTwoPi = 2.0 * kPi;
    out.var_q = refined_integral(s_q, pts, opt, "var_q", out.warnings) / kTwoPi;
    if (opt.noise == ThermalNoise::Coth && p.gamma_m > 0.0) {
        out.var_p = std::numeric_limits<double>::infinity();
        out.warnings.push_back("var_p diverges logarithmically with coth thermal noise; use white noise");
    } else {
        const auto s_p = [&](double w) { return w * w * s_q(w); };
        out.var_p = refined_integral(s_p, pts, opt, "var_p", out.warnings) / kTwoPi;
    }
    return out;
}

}  // namespace optomech
