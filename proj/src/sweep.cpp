#include "optomech/sweep.hpp"

#include "optomech/errors.hpp"

namespace optomech {

std::vector<Quantity> default_sweep_outputs() {
    return {Quantity::Nf, Quantity::GammaEff, Quantity::Ecb, Quantity::Eab, Quantity::Eac,
            Quantity::StabilityMargin};
}

std::string si_unit(std::string_view key) {
    if (key == "cavity_length" || key == "wavelength") return "m";
    if (key == "mass") return "kg";
    if (key == "power_left" || key == "power_right") return "W";
    if (key == "nbar") return "";
    if (is_parameter_key(key)) return "rad/s";
    throw ParameterError("unknown parameter '" + std::string(key) + "'");
}

ResultTable run_sweep(const ScenarioConfig& cfg, int jobs) {
    std::vector<Quantity> quantities;
    for (const auto& name : cfg.outputs) quantities.push_back(parse_quantity(name));
    if (quantities.empty()) quantities = default_sweep_outputs();

    std::vector<std::vector<double>> axis_values;
    for (const auto& ax : cfg.axes) {
        if (ax.points < 1) throw ParameterError("sweep axis '" + ax.parameter + "' has no points");
        axis_values.push_back(ax.values());
    }

    // grid points, first axis slowest
    std::vector<std::vector<double>> coords{{}};
    for (const auto& vals : axis_values) {
        std::vector<std::vector<double>> next;
        for (const auto& c : coords) {
            for (double v : vals) {
                auto e = c;
                e.push_back(v);
                next.push_back(std::move(e));
            }
        }
        coords = std::move(next);
    }

    const auto results = parallel_map(coords.size(), jobs, [&](std::size_t i) {
        SystemParams p = cfg.params;
        for (std::size_t k = 0; k < cfg.axes.size(); ++k) {
            set_parameter(p, cfg.axes[k].parameter, coords[i][k] * cfg.axes[k].to_si);
        }
        return evaluate_point(p, quantities);
    });

    ResultTable t;
    t.name = "sweep";
    t.provenance = make_provenance("sweep", cfg);
    for (const auto& ax : cfg.axes) {
        t.columns.push_back({ax.parameter, ax.unit.empty() ? si_unit(ax.parameter) : ax.unit});
    }
    for (Quantity q : quantities) {
        const auto& info = quantity_info(q);
        t.columns.push_back({std::string(info.name), std::string(info.unit)});
    }
    std::size_t ok = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        std::vector<double> row = coords[i];
        row.insert(row.end(), results[i].values.begin(), results[i].values.end());
        t.add_row(std::move(row), results[i].status);
        if (results[i].status == kStatusOk) ++ok;
    }
    if (ok == 0) {
        throw StabilityError("sweep: no point produced a result (every point unstable or failed: " +
                                 results.front().message + ")",
                             0.0);
    }
    return t;
}

}  // namespace optomech
