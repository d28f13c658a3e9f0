#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "optomech/config.hpp"
#include "optomech/result_table.hpp"

namespace optomech {

inline constexpr std::array<std::string_view, 17> kFigureTags{
    "fig1bc", "fig2a", "fig2b", "fig2c", "fig3a", "fig3b", "fig4a", "fig4b", "fig4c",
    "fig4d",  "fig5a", "fig5b", "fig6",  "fig7",  "fig8",  "fig9",  "fig10"};

struct FigureOptions {
    ScenarioConfig base;  // baseline scenario; params default to fig1_preset()
    int jobs = 1;
    int points_1d = 201;
    int points_2d = 101;  // per axis

    FigureOptions();
};

// Assisted reference configuration used across figures.
inline constexpr double kAssistJ = 0.15;         // J / omega_m
inline constexpr double kAssistPower = 50e-3;    // P_R, W
inline constexpr double kEntanglementKappaA = 0.5;  // kappa_a / kappa_c

bool is_figure_tag(std::string_view tag);

// Tables for one figure, named "<tag>" or "<tag>_<panel>". Unstable points
// are kept as rows with status "unstable" and NaN values.
std::vector<ResultTable> run_figure(std::string_view tag, const FigureOptions& options = {});

}  // namespace optomech
