#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "optomech/config.hpp"
#include "optomech/errors.hpp"
#include "optomech/figures.hpp"
#include "optomech/result_table.hpp"
#include "optomech/selftest/acceptance.hpp"
#include "optomech/steady_state.hpp"
#include "optomech/sweep.hpp"

using namespace optomech;

namespace {

struct Flags {
    std::string config;
    std::string preset;
    std::string out;
    std::string format;
    int jobs = 0;
};

OutputFormat pick_format(const Flags& f, const ScenarioConfig& cfg) {
    if (f.format.empty()) return cfg.format;
    if (f.format == "csv") return OutputFormat::Csv;
    if (f.format == "json") return OutputFormat::Json;
    throw ParameterError("--format must be csv or json");
}

int pick_jobs(const Flags& f, const ScenarioConfig& cfg) {
    if (f.jobs < 0) throw ParameterError("--jobs must be >= 1");
    return f.jobs > 0 ? f.jobs : cfg.jobs;
}

void emit(const std::vector<ResultTable>& tables, const Flags& f, const ScenarioConfig& cfg) {
    const OutputFormat format = pick_format(f, cfg);
    const std::string dir = f.out.empty() ? cfg.out_dir : f.out;
    for (std::size_t i = 0; i < tables.size(); ++i) {
        if (dir.empty()) {
            if (i) std::cout << '\n';
            std::cout << render(tables[i], format);
        } else {
            std::cerr << "wrote " << write_table(tables[i], dir, format).string() << '\n';
        }
    }
}

ScenarioConfig base_config(const Flags& f) {
    if (!f.config.empty()) return load_config(f.config, f.preset);
    return parse_config("", "<preset>", f.preset.empty() ? "fig1" : f.preset);
}

void report_check(const ScenarioConfig& cfg) {
    const ScaledParams p = derive_dimensionless(cfg.params);
    const auto ss = solve_steady_state(p);
    std::printf("detuning mode: %s\n", std::string(to_string(p.detuning_mode)).c_str());
    std::printf("delta_eff [wm]: %.10g\n", ss.delta_eff);
    std::printf("delta_c [wm]: %.10g\n", ss.delta_c);
    std::printf("|G| [wm]: %.10g\n", std::abs(ss.coupling_g));
    std::printf("x_ss [m]: %.10g\n", ss.x_ss);
    std::printf("fixed-point residual: %.3g\n", ss.residual);
    std::printf("stability margin [wm]: %.10g\n", ss.stability_margin);
    std::printf("stable: %s\n", ss.stable ? "yes" : "no");

    SystemParams sc = cfg.params;
    sc.detuning_mode = DetuningMode::SelfConsistent;
    sc.delta = ss.delta_c * cfg.params.omega_m;
    const double power[] = {cfg.params.power_left};
    const auto scan = bistability_scan(sc, power);
    const auto& roots = scan.front().roots;
    std::printf("steady states at P_L = %.6g W, delta_c = %.10g wm: %zu\n", cfg.params.power_left,
                ss.delta_c, roots.size());
    for (std::size_t k = 0; k < roots.size(); ++k) {
        std::printf("  root %zu: x_ss = %.10g m, delta_eff = %.10g wm, %s (margin %.3g)\n", k,
                    roots[k].x_ss, roots[k].delta_eff, roots[k].stable ? "stable" : "unstable",
                    roots[k].stability_margin);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optomech: steady states, cooling and entanglement of a two-cavity optomechanical system"};
    app.require_subcommand(1);
    app.fallthrough();

    Flags f;
    app.add_option("--config", f.config, "scenario config (key = value), or a result table to re-run");
    app.add_option("--preset", f.preset, "defaults for missing keys (fig1)");
    app.add_option("--out", f.out, "output directory (default: stdout)");
    app.add_option("--format", f.format, "csv or json");
    app.add_option("--jobs", f.jobs, "worker threads");

    std::string tag;
    auto* figure = app.add_subcommand("figure", "emit the data of one figure");
    figure->add_option("tag", tag, "figure tag")->required();

    std::string sweep_path;
    auto* sweep = app.add_subcommand("sweep", "run the sweep axes of a config");
    sweep->add_option("config", sweep_path, "config file")->required();

    std::string check_path;
    auto* check = app.add_subcommand("check", "stability and bistability report for a config");
    check->add_option("config", check_path, "config file")->required();

    auto* selftest = app.add_subcommand("selftest", "run the acceptance criteria");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*figure) {
            if (!is_figure_tag(tag)) run_figure(tag);  // throws with the list of tags
            FigureOptions opt;
            opt.base = base_config(f);
            opt.jobs = pick_jobs(f, opt.base);
            emit(run_figure(tag, opt), f, opt.base);
        } else if (*sweep) {
            const auto cfg = load_config(sweep_path, f.preset);
            emit({run_sweep(cfg, pick_jobs(f, cfg))}, f, cfg);
        } else if (*check) {
            report_check(load_config(check_path, f.preset));
        } else if (*selftest) {
            return selftest::print_results(std::cout, selftest::run_acceptance()) ? 0 : 1;
        }
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const StabilityError& e) {
        std::cerr << "stability error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
