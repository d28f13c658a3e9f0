#include "optomech/figures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "optomech/cooling.hpp"
#include "optomech/entanglement.hpp"
#include "optomech/errors.hpp"
#include "optomech/steady_state.hpp"
#include "optomech/sweep.hpp"

namespace optomech {

FigureOptions::FigureOptions() { base.params = fig1_preset(); base.preset = "fig1"; }

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double mW = 1e-3;

using Coords = std::vector<double>;
using Eval = std::function<std::vector<double>(const Coords&)>;

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(i == n - 1 ? b : a + (b - a) * i / (n - 1));
    return v;
}

std::vector<double> logspace(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(i == n - 1 ? b : a * std::pow(b / a, static_cast<double>(i) / (n - 1)));
    return v;
}

std::vector<Coords> grid1(const std::vector<double>& x) {
    std::vector<Coords> c;
    for (double v : x) c.push_back({v});
    return c;
}

std::vector<Coords> grid2(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<Coords> c;
    for (double a : x) {
        for (double b : y) c.push_back({a, b});
    }
    return c;
}

struct TableSpec {
    std::string name;
    std::vector<Column> axes;
    std::vector<Column> values;
    std::vector<Coords> coords;
    Eval eval;
};

ResultTable build(std::string_view tag, const TableSpec& spec, const FigureOptions& opt) {
    struct Cell {
        std::vector<double> values;
        std::string status;
    };
    const auto cells = parallel_map(spec.coords.size(), opt.jobs, [&](std::size_t i) {
        Cell c;
        try {
            c.values = spec.eval(spec.coords[i]);
            c.status = "ok";
        } catch (const StabilityError&) {
            c.values.assign(spec.values.size(), kNaN);
            c.status = "unstable";
        } catch (const IntegrityError&) {
            throw;
        } catch (const NumericError&) {
            c.values.assign(spec.values.size(), kNaN);
            c.status = "failed";
        }
        return c;
    });
    ResultTable t;
    t.name = spec.name;
    t.provenance = make_provenance(tag, opt.base);
    t.columns = spec.axes;
    t.columns.insert(t.columns.end(), spec.values.begin(), spec.values.end());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        Coords row = spec.coords[i];
        row.insert(row.end(), cells[i].values.begin(), cells[i].values.end());
        t.add_row(std::move(row), cells[i].status);
    }
    return t;
}

struct Solved {
    ScaledParams p;
    ClassicalSteadyState ss;
};

Solved solve(const SystemParams& sp) {
    Solved s{derive_dimensionless(sp), {}};
    s.ss = solve_steady_state(s.p);
    if (!s.ss.stable) throw StabilityError("unstable steady state", s.ss.stability_margin);
    return s;
}

double nf_numeric(const SystemParams& sp) {
    const auto s = solve(sp);
    return phonon_number_numeric(solve_lyapunov(build_drift(s.ss, s.p, Basis::Quadrature)));
}

double nf_analytic(const SystemParams& sp) {
    const auto s = solve(sp);
    return phonon_number_analytic(s.ss, s.p);
}

Mat6 covariance(const SystemParams& sp) {
    const auto s = solve(sp);
    return solve_lyapunov(build_drift(s.ss, s.p, Basis::Quadrature)).real();
}

double pair_negativity(const SystemParams& sp, Mode x, Mode y) {
    return log_negativity_1v1(extract_pair(covariance(sp), x, y));
}

SystemParams with(SystemParams p, std::string_view key, double si) {
    set_parameter(p, key, si);
    return p;
}

struct Context {
    const FigureOptions& opt;
    SystemParams base;
    SystemParams assisted;
    int n1;
    int n2;

    double wm() const { return base.omega_m; }
    SystemParams entangle(SystemParams p) const {
        p.kappa_a = kEntanglementKappaA * p.kappa_c;
        return p;
    }
};

std::vector<ResultTable> fig1bc(std::string_view tag, const Context& c) {
    const auto w = linspace(-2.0, 2.0, c.n1);
    const auto un = solve(c.base);
    const auto as = solve(c.assisted);
    const auto ru = effective_response(un.ss, un.p, w);
    const auto ra = effective_response(as.ss, as.p, w);
    ResultTable t;
    t.name = std::string(tag);
    t.provenance = make_provenance(tag, c.opt.base);
    t.columns = {{"omega", "wm"},
                 {"omega_eff_unassisted", "wm"},
                 {"gamma_eff_unassisted", "gamma_m"},
                 {"omega_eff_assisted", "wm"},
                 {"gamma_eff_assisted", "gamma_m"}};
    const auto flagged = [](const MechanicalResponse& r, std::size_t i) {
        return std::find(r.flagged.begin(), r.flagged.end(), i) != r.flagged.end();
    };
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (flagged(ru, i) || flagged(ra, i)) {
            t.add_row({w[i], kNaN, kNaN, kNaN, kNaN}, "skipped");
            continue;
        }
        t.add_row({w[i], ru.omega_eff[i], ru.gamma_eff[i] / un.p.gamma_m, ra.omega_eff[i],
                   ra.gamma_eff[i] / as.p.gamma_m});
    }
    t.provenance.notes.push_back("unassisted: J = 0, P_R = 0; assisted: J = 0.15 wm, P_R = 50 mW");
    return {t};
}

std::vector<ResultTable> run(std::string_view tag, const Context& c) {
    const FigureOptions& opt = c.opt;
    const SystemParams& b = c.base;
    const double wm = c.wm();
    const std::string name(tag);
    const auto lambda = [&](double j, double pr) { return amplification_factor(b, j, pr); };
    const auto triple_nf = [&](SystemParams assisted) {
        return std::vector<double>{nf_analytic(assisted), nf_numeric(assisted), nf_numeric(b)};
    };
    const std::vector<Column> triple_cols{{"nf_analytic", ""}, {"nf_numeric", ""}, {"nf_unassisted", ""}};

    if (tag == "fig1bc") return fig1bc(tag, c);
    if (tag == "fig2a") {
        TableSpec s{name, {{"J", "wm"}, {"P_R", "mW"}}, {{"lambda", ""}},
                    grid2(linspace(0.0, 0.6, c.n2), linspace(0.0, 150.0, c.n2)),
                    [&](const Coords& x) { return std::vector<double>{lambda(x[0], x[1] * mW)}; }};
        return {build(tag, s, opt)};
    }
    if (tag == "fig2b") {
        TableSpec s{name, {{"J", "wm"}}, {{"lambda_pr50mW", ""}, {"lambda_pr100mW", ""}},
                    grid1(linspace(0.0, 0.6, c.n1)),
                    [&](const Coords& x) {
                        return std::vector<double>{lambda(x[0], 50 * mW), lambda(x[0], 100 * mW)};
                    }};
        return {build(tag, s, opt)};
    }
    if (tag == "fig2c") {
        TableSpec s{name, {{"P_R", "mW"}}, {{"lambda_j0", ""}, {"lambda_j0.2", ""}},
                    grid1(linspace(0.0, 150.0, c.n1)),
                    [&](const Coords& x) {
                        return std::vector<double>{lambda(0.0, x[0] * mW), lambda(0.2, x[0] * mW)};
                    }};
        return {build(tag, s, opt)};
    }
    if (tag == "fig3a") {
        TableSpec s{name, {{"delta_a", "wm"}}, triple_cols, grid1(linspace(-2.0, 2.0, c.n1)),
                    [&](const Coords& x) {
                        auto p = with(c.assisted, "delta_a", x[0] * wm);
                        p.kappa_a = p.kappa_c;
                        return triple_nf(p);
                    }};
        return {build(tag, s, opt)};
    }
    if (tag == "fig3b") {
        TableSpec s{name, {{"kappa_a", "wm"}}, triple_cols, grid1(logspace(0.01, 1.0, c.n1)),
                    [&](const Coords& x) { return triple_nf(with(c.assisted, "kappa_a", x[0] * wm)); }};
        return {build(tag, s, opt)};
    }
    if (tag == "fig4a") {
        TableSpec s{name, {{"delta", "wm"}}, {{"nf_unassisted", ""}, {"nf_assisted", ""}},
                    grid1(linspace(0.0, 2.0, c.n1)),
                    [&](const Coords& x) {
                        return std::vector<double>{nf_numeric(with(b, "delta_pinned", x[0] * wm)),
                                                   nf_numeric(with(c.assisted, "delta_pinned", x[0] * wm))};
                    }};
        return {build(tag, s, opt)};
    }
    if (tag == "fig4b") {
        TableSpec s{name, {{"J", "wm"}, {"P_R", "mW"}}, {{"nf", ""}, {"chi", ""}, {"chi_abs", ""}},
                    grid2(linspace(0.0, 0.3, c.n2), linspace(0.0, 150.0, c.n2)),
                    [&](const Coords& x) {
                        const auto r = improvement_rate(b, x[0], x[1] * mW);
                        return std::vector<double>{r.nf_assisted, r.chi, r.magnitude};
                    }};
        return {build(tag, s, opt)};
    }
    if (tag == "fig4c") {
        TableSpec s{name, {{"P_R", "mW"}}, triple_cols, grid1(linspace(0.0, 150.0, c.n1)),
                    [&](const Coords& x) { return triple_nf(with(c.assisted, "power_right", x[0] * mW)); }};
        return {build(tag, s, opt)};
    }
    if (tag == "fig4d") {
        TableSpec s{name, {{"J", "wm"}}, triple_cols, grid1(linspace(0.0, 0.6, c.n1)),
                    [&](const Coords& x) { return triple_nf(with(c.assisted, "tunneling_j", x[0] * wm)); }};
        return {build(tag, s, opt)};
    }
    if (tag == "fig5a" || tag == "fig5b") {
        const bool gamma = tag == "fig5a";
        const std::string key = gamma ? "gamma_m" : "kappa_c";
        TableSpec s{name, {{key, "wm"}}, {{"nf_unassisted", ""}, {"nf_assisted", ""}},
                    grid1(gamma ? logspace(1e-7, 1e-3, c.n1) : logspace(0.05, 5.0, c.n1)),
                    [&, key](const Coords& x) {
                        return std::vector<double>{nf_numeric(with(b, key, x[0] * wm)),
                                                   nf_numeric(with(c.assisted, key, x[0] * wm))};
                    }};
        return {build(tag, s, opt)};
    }
    if (tag == "fig6") {
        TableSpec det{name + "_detuning", {{"delta_a", "wm"}, {"kappa_a", "wm"}},
                      {{"e_ab", ""}, {"e_cb", ""}, {"e_ac", ""}},
                      grid2(linspace(-2.0, 2.0, c.n2), linspace(0.01, 0.21, c.n2)),
                      [&](const Coords& x) {
                          auto p = with(c.assisted, "delta_a", x[0] * wm);
                          p.kappa_a = x[1] * wm;
                          const Mat6 v = covariance(p);
                          return std::vector<double>{
                              log_negativity_1v1(extract_pair(v, Mode::AuxiliaryCavity, Mode::Mechanics)),
                              log_negativity_1v1(extract_pair(v, Mode::CoolingCavity, Mode::Mechanics)),
                              log_negativity_1v1(extract_pair(v, Mode::AuxiliaryCavity, Mode::CoolingCavity))};
                      }};
        TableSpec drive{name + "_drive", {{"J", "wm"}, {"P_R", "mW"}},
                        {{"e_ab", ""}, {"e_cb", ""}, {"e_ac", ""}},
                        grid2(linspace(0.0, 0.6, c.n2), linspace(0.0, 150.0, c.n2)),
                        [&](const Coords& x) {
                            auto p = c.entangle(with_assist(b, x[0], x[1] * mW));
                            const auto blue = with(p, "delta_a", -wm);
                            const auto zero = with(p, "delta_a", 0.0);
                            return std::vector<double>{
                                pair_negativity(blue, Mode::AuxiliaryCavity, Mode::Mechanics),
                                pair_negativity(zero, Mode::CoolingCavity, Mode::Mechanics),
                                pair_negativity(blue, Mode::AuxiliaryCavity, Mode::CoolingCavity)};
                        }};
        auto t2 = build(tag, drive, opt);
        t2.provenance.notes.push_back("kappa_a = 0.5 kappa_c; e_ab and e_ac at delta_a = -1 wm, e_cb at delta_a = 0");
        return {build(tag, det, opt), t2};
    }
    if (tag == "fig7" || tag == "fig8") {
        const auto nbar = tag == "fig7" ? linspace(0.0, 200.0, c.n1) : linspace(0.0, 2000.0, c.n1);
        const auto un = robustness_sweep(c.entangle(b), nbar);
        const auto as = robustness_sweep(c.entangle(c.assisted), nbar);
        ResultTable t;
        t.name = name;
        t.provenance = make_provenance(tag, opt.base);
        t.columns = {{"nbar", ""},          {"e_cb_unassisted", ""}, {"e_ab_unassisted", ""},
                     {"e_ac_unassisted", ""}, {"e_cb_assisted", ""}, {"e_ab_assisted", ""},
                     {"e_ac_assisted", ""}};
        for (std::size_t i = 0; i < nbar.size(); ++i) {
            const auto& u = un.rows[i];
            const auto& a = as.rows[i];
            t.add_row({nbar[i], u.e_cb, u.e_ab, u.e_ac, a.e_cb, a.e_ab, a.e_ac});
        }
        const char* pairs[] = {"e_cb", "e_ab", "e_ac"};
        for (int k = 0; k < 3; ++k) {
            for (const auto& [label, sweep] : {std::pair{"unassisted", &un}, std::pair{"assisted", &as}}) {
                const auto& th = sweep->thresholds[k];
                t.provenance.notes.push_back(std::string("threshold ") + pairs[k] + " " + label + ": " +
                                             (th ? std::to_string(*th) : std::string("beyond grid")) +
                                             " (grid step " + std::to_string(sweep->grid_resolution) + ")");
            }
        }
        t.provenance.notes.push_back("kappa_a = 0.5 kappa_c, delta_a = 0");
        return {t};
    }
    if (tag == "fig9") {
        TableSpec s{name, {{"delta_a", "wm"}},
                    {{"tripartite_j0", ""}, {"tripartite_j0.15_pr0", ""}, {"tripartite_j0.15_pr50mW", ""}},
                    grid1(linspace(-2.0, 2.0, c.n1)),
                    [&](const Coords& x) {
                        std::vector<double> out;
                        for (const auto& [j, pr] : {std::pair{0.0, 0.0}, std::pair{kAssistJ, 0.0},
                                                    std::pair{kAssistJ, kAssistPower}}) {
                            const auto p = with(c.entangle(with_assist(b, j, pr)), "delta_a", x[0] * wm);
                            const auto s = solve(p);
                            out.push_back(residual_contangle(solve_lyapunov(build_drift(s.ss, s.p, Basis::Quadrature)))
                                              .tripartite);
                        }
                        return out;
                    }};
        auto t = build(tag, s, opt);
        t.provenance.notes.push_back("kappa_a = 0.5 kappa_c");
        return {t};
    }
    if (tag == "fig10") {
        SystemParams p = with_assist(b, kAssistJ, 0.0);
        p.detuning_mode = DetuningMode::SelfConsistent;
        p.delta = wm;
        p.delta_a = -wm;
        const auto powers = linspace(0.0, 400.0, c.n1);
        std::vector<double> si;
        for (double v : powers) si.push_back(v * mW);
        const auto scan = bistability_scan(p, si);
        ResultTable t;
        t.name = name;
        t.provenance = make_provenance(tag, opt.base);
        t.columns = {{"P_L", "mW"},      {"root_count", ""}, {"root_index", ""},
                     {"x_ss", "m"},      {"stable", ""},     {"stability_margin", "wm"}};
        for (std::size_t i = 0; i < scan.size(); ++i) {
            const auto& roots = scan[i].roots;
            for (std::size_t k = 0; k < roots.size(); ++k) {
                t.add_row({powers[i], static_cast<double>(roots.size()), static_cast<double>(k), roots[k].x_ss,
                           roots[k].stable ? 1.0 : 0.0, roots[k].stability_margin});
            }
        }
        t.provenance.notes.push_back("delta_c = 1 wm (self-consistent), delta_a = -1 wm, J = 0.15 wm, P_R = 0");
        return {t};
    }
    std::string known;
    for (auto k : kFigureTags) known += (known.empty() ? "" : ", ") + std::string(k);
    throw ParameterError("unknown figure tag '" + std::string(tag) + "' (known: " + known + ")");
}

}  // namespace

bool is_figure_tag(std::string_view tag) {
    return std::find(kFigureTags.begin(), kFigureTags.end(), tag) != kFigureTags.end();
}

std::vector<ResultTable> run_figure(std::string_view tag, const FigureOptions& opt) {
    if (opt.points_1d < 2 || opt.points_2d < 2) {
        throw ParameterError("figure grids need at least 2 points per axis");
    }
    validate(opt.base.params);
    const Context c{opt, opt.base.params, with_assist(opt.base.params, kAssistJ, kAssistPower),
                    opt.points_1d, opt.points_2d};
    auto tables = run(tag, c);
    for (const auto& t : tables) t.check();
    return tables;
}

}  // namespace optomech
