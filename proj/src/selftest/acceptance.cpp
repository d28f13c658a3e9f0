#include "optomech/selftest/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>

#include "optomech/cooling.hpp"
#include "optomech/entanglement.hpp"
#include "optomech/errors.hpp"
#include "optomech/figures.hpp"
#include "optomech/selftest/routh_hurwitz.hpp"
#include "optomech/steady_state.hpp"

namespace optomech::selftest {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

struct Solved {
    ScaledParams p;
    ClassicalSteadyState ss;
};

Solved solve(const SystemParams& sp) {
    Solved s{derive_dimensionless(sp), {}};
    s.ss = solve_steady_state(s.p);
    return s;
}

CovarianceMatrix quad_cov(const Solved& s) {
    return solve_lyapunov(build_drift(s.ss, s.p, Basis::Quadrature));
}

SystemParams assisted() { return with_assist(fig1_preset(), kAssistJ, kAssistPower); }

SystemParams entangle(SystemParams p) {
    p.kappa_a = kEntanglementKappaA * p.kappa_c;
    return p;
}

CriterionResult timed(int id, std::string title, const std::function<void(CriterionResult&)>& body) {
    CriterionResult r;
    r.id = id;
    r.title = std::move(title);
    const auto t0 = Clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail += std::string(r.detail.empty() ? "" : "; ") + "exception: " + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

CriterionResult c1() {
    return timed(1, "unassisted optimum phonon number", [](CriterionResult& r) {
        const auto t0 = Clock::now();
        const auto s = solve(fig1_preset());
        const double nf = phonon_number_numeric(quad_cov(s));
        const double dt = seconds_since(t0);
        r.pass = std::abs(nf - 0.15) <= 0.02 && dt < 1.0;
        r.detail = fmt("n_f = %.4f (want 0.15 +- 0.02)", nf) + fmt(", runtime %.3g s (< 1 s)", dt);
    });
}

CriterionResult c2() {
    return timed(2, "assisted optimum and improvement rate", [](CriterionResult& r) {
        const auto t0 = Clock::now();
        const auto ir = improvement_rate(fig1_preset(), kAssistJ, kAssistPower);
        const double dt = seconds_since(t0);
        r.pass = std::abs(ir.nf_assisted - 0.09) <= 0.02 && std::abs(ir.magnitude - 0.40) <= 0.10 && dt < 1.0;
        r.detail = fmt("n_f = %.4f (want 0.09 +- 0.02)", ir.nf_assisted) +
                   fmt(", |chi| = %.3f (want 0.40 +- 0.10)", ir.magnitude) +
                   fmt(", runtime %.3g s (< 1 s)", dt);
    });
}

CriterionResult c3() {
    return timed(3, "amplification map", [](CriterionResult& r) {
        FigureOptions opt;
        const auto t0 = Clock::now();
        const auto map = run_figure("fig2a", opt).front();
        const double dt = seconds_since(t0);
        const auto j = map.column("J");
        const auto lam = map.column("lambda");
        double best = -1.0;
        bool unit_at_zero = true;
        for (std::size_t i = 0; i < lam.size(); ++i) {
            if (map.status[i] != "ok") continue;
            best = std::max(best, lam[i]);
            if (j[i] == 0.0 && lam[i] != 1.0) unit_at_zero = false;
        }
        const auto row = run_figure("fig2b", opt).front();
        const auto rj = row.column("J");
        const auto rl = row.column("lambda_pr50mW");
        const auto arg = std::max_element(rl.begin(), rl.end()) - rl.begin();
        const double jbest = rj[arg];
        r.pass = best >= 12.0 && best <= 18.0 && unit_at_zero && jbest >= 0.20 && jbest <= 0.30 && dt < 30.0;
        r.detail = fmt("max Lambda = %.3f (want [12, 18])", best) +
                   (unit_at_zero ? ", Lambda(J=0) = 1 exactly" : ", Lambda(J=0) != 1") +
                   fmt(", argmax_J at 50 mW = %.3f (want [0.20, 0.30])", jbest) +
                   fmt(", 101x101 map %.3g s (< 30 s)", dt);
    });
}

CriterionResult c4() {
    return timed(4, "effective damping at omega_m", [](CriterionResult& r) {
        const double w[] = {1.0, -1.0};
        const auto u = solve(fig1_preset());
        const auto a = solve(assisted());
        const auto ru = effective_response(u.ss, u.p, w);
        const auto ra = effective_response(a.ss, a.p, w);
        const double gu = ru.gamma_eff[0] / u.p.gamma_m;
        const double ga = ra.gamma_eff[0] / a.p.gamma_m;
        const bool symmetric = std::abs(ru.gamma_eff[1] - ru.gamma_eff[0]) <= 1e-9 * ru.gamma_eff[0] &&
                               std::abs(ra.gamma_eff[1] - ra.gamma_eff[0]) <= 1e-9 * ra.gamma_eff[0];
        r.pass = gu >= 0.8e4 && gu <= 1.2e4 && ga >= 3.8e4 && ga <= 5.2e4 && symmetric;
        r.detail = fmt("Gamma_eff/gamma_m = %.4g unassisted (want [0.8, 1.2]e4), %.4g assisted (want [3.8, 5.2]e4)", gu, ga);
    });
}

CriterionResult c5() {
    return timed(5, "analytic vs Lyapunov phonon number", [](CriterionResult& r) {
        const auto t0 = Clock::now();
        const auto draws = random_stable_scenarios(200, 20240501);
        double worst = 0.0;
        for (const auto& sp : draws) {
            const auto s = solve(sp);
            const double num = phonon_number_numeric(quad_cov(s));
            const double ana = phonon_number_analytic(s.ss, s.p);
            worst = std::max(worst, std::abs(ana - num) / num);
        }
        const double dt = seconds_since(t0);
        r.pass = draws.size() >= 200 && worst < 1e-6 && dt < 60.0;
        r.detail = std::to_string(draws.size()) + " stable draws" +
                   fmt(", worst relative difference %.3g (< 1e-6)", worst) + fmt(", runtime %.3g s (< 60 s)", dt);
    });
}

CriterionResult c6() {
    return timed(6, "spectral integrals vs covariance", [](CriterionResult& r) {
        double worst = 0.0;
        for (const auto& sp : {fig1_preset(), assisted()}) {
            const auto s = solve(sp);
            const auto v = quad_cov(s).real();
            SpectrumOptions opt;
            opt.noise = ThermalNoise::White;
            const auto grid = spectrum_grid(s.ss, s.p);
            const auto spec = position_spectrum(s.ss, s.p, grid, opt);
            worst = std::max({worst, std::abs(spec.var_q - v(4, 4)) / v(4, 4),
                              std::abs(spec.var_p - v(5, 5)) / v(5, 5)});
        }
        r.pass = worst < 1e-4;
        r.detail = fmt("worst relative mismatch of <dq^2>, <dp^2> = %.3g (< 1e-4)", worst);
    });
}

CriterionResult c7() {
    return timed(7, "entanglement at zero thermal occupation", [](CriterionResult& r) {
        SystemParams un = entangle(fig1_preset());
        un.nbar = 0.0;
        SystemParams as = entangle(assisted());
        as.nbar = 0.0;
        const auto pair = [](const SystemParams& sp) {
            return log_negativity_1v1(extract_pair(quadrature_covariance(sp).real(), Mode::CoolingCavity, Mode::Mechanics));
        };
        const double eu = pair(un);
        const double ea = pair(as);
        r.pass = std::abs(ea - 0.17) <= 0.03 && std::abs(eu - 0.07) <= 0.02;
        r.detail = fmt("E_cb = %.4f assisted (want 0.17 +- 0.03), %.4f unassisted (want 0.07 +- 0.02)", ea, eu);
    });
}

CriterionResult c8() {
    return timed(8, "thermal robustness thresholds", [](CriterionResult& r) {
        std::vector<double> grid;
        for (int i = 0; i <= 800; ++i) grid.push_back(5.0 * i);
        const auto un = robustness_sweep(entangle(fig1_preset()), grid);
        const auto as = robustness_sweep(entangle(assisted()), grid);
        const auto& tu = un.thresholds[0];
        const auto& ta = as.thresholds[0];
        r.pass = tu && ta && *tu < 200.0 && std::abs(*ta - 900.0) <= 150.0;
        r.detail = std::string("E_cb dies at nbar = ") + (tu ? fmt("%.1f", *tu) : "beyond 4000") +
                   " unassisted (want < 200), " + (ta ? fmt("%.1f", *ta) : "beyond 4000") +
                   " assisted (want 900 +- 150), grid step 5";
    });
}

CriterionResult c9() {
    return timed(9, "tripartite entanglement gate", [](CriterionResult& r) {
        FigureOptions opt;
        const auto t = run_figure("fig9", opt).front();
        const auto zero = t.column("tripartite_j0");
        const auto off = t.column("tripartite_j0.15_pr0");
        const auto on = t.column("tripartite_j0.15_pr50mW");
        bool j0_zero = true;
        double peak_on = 0.0, peak_off = 0.0;
        std::size_t window = 0;
        for (std::size_t i = 0; i < zero.size(); ++i) {
            if (t.status[i] != "ok") continue;
            if (zero[i] != 0.0) j0_zero = false;
            peak_on = std::max(peak_on, on[i]);
            peak_off = std::max(peak_off, off[i]);
            if (on[i] > 0.0) ++window;
        }
        r.pass = j0_zero && window > 0 && peak_on > peak_off;
        r.detail = std::string(j0_zero ? "J=0 identically 0" : "J=0 not identically 0") + ", " +
                   std::to_string(window) + " grid points > 0 at P_R = 50 mW" +
                   fmt(", peaks %.3g (50 mW) vs %.3g (0 mW)", peak_on, peak_off);
    });
}

CriterionResult c10() {
    return timed(10, "bistability root counts", [](CriterionResult& r) {
        SystemParams p = with_assist(fig1_preset(), kAssistJ, 0.0);
        p.detuning_mode = DetuningMode::SelfConsistent;
        p.delta = p.omega_m;
        p.delta_a = -p.omega_m;
        const double powers[] = {20e-3, 50e-3};
        const auto scan = bistability_scan(p, powers);
        const auto& lo = scan[0].roots;
        const auto& hi = scan[1].roots;
        const bool middle_unstable = hi.size() == 3 && !hi[1].stable;
        r.pass = lo.size() == 1 && hi.size() == 3 && middle_unstable;
        r.detail = std::to_string(lo.size()) + " root(s) at 20 mW (want 1), " + std::to_string(hi.size()) +
                   " at 50 mW (want 3)" + (middle_unstable ? ", middle branch unstable" : ", middle branch not flagged");
    });
}

CriterionResult c11() {
    return timed(11, "property suite", [](CriterionResult& r) {
        // covariances: random draws plus the entanglement sweeps
        std::vector<SystemParams> cases = random_stable_scenarios(200, 77);
        for (int i = 0; i <= 80; ++i) {
            const double da = -2.0 + 0.05 * i;
            for (const auto& [j, pr] : {std::pair{0.0, 0.0}, std::pair{kAssistJ, 0.0}, std::pair{kAssistJ, kAssistPower}}) {
                for (double nbar : {0.0, 1000.0}) {
                    SystemParams p = entangle(with_assist(fig1_preset(), j, pr));
                    p.delta_a = da * p.omega_m;
                    p.nbar = nbar;
                    cases.push_back(p);
                }
            }
        }
        double worst_residual = 0.0, worst_floor = 0.0, worst_monogamy = 0.0;
        std::size_t used = 0, violations = 0;
        for (const auto& sp : cases) {
            const auto s = solve(sp);
            if (!s.ss.stable) continue;
            ++used;
            const auto cov = quad_cov(s);
            worst_residual = std::max(worst_residual, cov.residual);
            worst_floor = std::min(worst_floor, uncertainty_min_eigenvalue(cov.real()));
            const auto rep = residual_contangle(cov);
            for (double res : rep.residuals) worst_monogamy = std::min(worst_monogamy, res);
            if (!rep.monogamy_ok) ++violations;
        }
        const bool lyap = worst_residual < 1e-10;
        const bool psd = worst_floor >= -1e-9;
        const bool mono = violations == 0;

        double tmsv_err = 0.0;
        for (double sq : {0.1, 0.5, 1.0}) {
            BipartiteCM cm;
            cm.a_block = 0.5 * std::cosh(2 * sq) * Eigen::Matrix2d::Identity();
            cm.b_block = cm.a_block;
            cm.c_block = 0.5 * std::sinh(2 * sq) * Eigen::Vector2d(1.0, -1.0).asDiagonal();
            tmsv_err = std::max(tmsv_err, std::abs(log_negativity_1v1(cm) - 2 * sq));
        }
        const bool tmsv = tmsv_err < 1e-9;

        std::mt19937_64 rng(4242);
        std::size_t agree = 0, compared = 0, n_stable = 0;
        while (compared < 1000) {
            const auto sp = random_scenario(rng, true);
            const auto p = derive_dimensionless(sp);
            const auto pinned = solve_steady_state(p);
            const Mat6 a = quadrature_drift(p, pinned.delta_eff, pinned.coupling_g);
            const auto verdict = check_stability(DriftModel::from_matrices(Basis::Quadrature, a.cast<std::complex<double>>(), Mat6c::Zero()));
            if (std::abs(verdict.margin) <= 1e-8) continue;
            ++compared;
            n_stable += verdict.stable;
            const auto poly = characteristic_polynomial(a);
            if (routh_hurwitz_stable(poly) == verdict.stable) ++agree;
        }
        const bool rh = agree == compared;

        r.pass = lyap && psd && mono && tmsv && rh;
        r.detail = std::to_string(used) + " covariances" + fmt(": max Lyapunov residual %.2g", worst_residual) +
                   (lyap ? " ok" : " FAIL") + fmt("; min uncertainty eigenvalue %.2g", worst_floor) +
                   (psd ? " ok" : " FAIL") + "; monogamy " +
                   (mono ? "holds" : "violated on " + std::to_string(violations) + fmt(" (worst %.2g) FAIL", worst_monogamy)) +
                   fmt("; TMSV max error %.2g", tmsv_err) + (tmsv ? " ok" : " FAIL") + "; Routh-Hurwitz " +
                   std::to_string(agree) + "/" + std::to_string(compared) + " agree (" +
                   std::to_string(n_stable) + " stable)" + (rh ? " ok" : " FAIL");
    });
}

}  // namespace

SystemParams random_scenario(std::mt19937_64& rng, bool allow_blue) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto lin = [&](double a, double b) { return a + (b - a) * u(rng); };
    const auto lg = [&](double a, double b) { return a * std::pow(b / a, u(rng)); };
    SystemParams p = fig1_preset();
    const double wm = p.omega_m;
    p.kappa_c = lg(0.05, 1.0) * wm;
    p.kappa_a = lg(0.02, 1.0) * wm;
    p.gamma_m = lg(1e-6, 1e-3) * wm;
    p.delta = (allow_blue ? lin(-2.0, 2.0) : lin(0.3, 2.0)) * wm;
    p.delta_a = lin(-2.0, 2.0) * wm;
    p.tunneling_j = lin(0.0, 0.6) * wm;
    p.power_left = lin(0.0, 60e-3);
    p.power_right = lin(0.0, 150e-3);
    p.nbar = lin(0.0, 2000.0);
    return p;
}

std::vector<SystemParams> random_stable_scenarios(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<SystemParams> out;
    while (out.size() < count) {
        const auto p = random_scenario(rng);
        if (solve_steady_state(derive_dimensionless(p)).stable) out.push_back(p);
    }
    return out;
}

std::vector<CriterionResult> run_acceptance(std::span<const int> ids) {
    using Fn = CriterionResult (*)();
    static constexpr Fn all[] = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11};
    std::vector<CriterionResult> out;
    if (ids.empty()) {
        for (Fn f : all) out.push_back(f());
        return out;
    }
    for (int id : ids) {
        if (id < 1 || id > kCriterionCount) throw ParameterError(fmt("no acceptance criterion #%d", id));
        out.push_back(all[id - 1]());
    }
    return out;
}

bool print_results(std::ostream& out, const std::vector<CriterionResult>& results) {
    bool all = true;
    for (const auto& r : results) {
        char head[64];
        std::snprintf(head, sizeof head, "%s  #%-2d ", r.pass ? "PASS" : "FAIL", r.id);
        out << head << r.title << ": " << r.detail << fmt(" (%.2f s)", r.seconds) << '\n';
        all = all && r.pass;
    }
    std::size_t passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.pass; });
    out << passed << "/" << results.size() << " criteria passed\n";
    return all;
}

}  // namespace optomech::selftest
