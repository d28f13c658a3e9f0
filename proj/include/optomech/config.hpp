#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "optomech/params.hpp"

namespace optomech {

enum class SweepScale { Linear, Log };
enum class OutputFormat { Csv, Json };

struct SweepAxis {
    std::string parameter;  // config key, e.g. "tunneling_j"
    double start = 0.0;     // in `unit`
    double stop = 0.0;
    int points = 0;
    SweepScale scale = SweepScale::Linear;
    std::string unit;       // as written; empty means the SI base unit
    double to_si = 1.0;     // multiply a grid value by this to get SI

    // Grid values in `unit`.
    std::vector<double> values() const;
};

struct ScenarioConfig {
    std::string preset;  // "fig1" or empty
    SystemParams params;
    std::vector<SweepAxis> axes;       // at most two
    std::vector<std::string> outputs;  // quantity names, see quantity_catalog()
    std::string out_dir;
    OutputFormat format = OutputFormat::Csv;
    int jobs = 1;
};

// Parses the key-value format:
//   key = value [unit]      # comment
//   sweep = <key> <start> <stop> <points> [linear|log] [unit]
// Errors are ParameterError with "<origin>:<line>: " context.
// `default_preset` applies when the text has no `preset` line.
ScenarioConfig parse_config(std::string_view text, std::string_view origin = "<config>",
                            std::string_view default_preset = "");

// Reads a config file, or the embedded config of a CSV/JSON result table.
ScenarioConfig load_config(const std::filesystem::path& path, std::string_view default_preset = "");

// Config text that parses back to the same scenario (SI values, %.17g).
// Output location, format and job count are left out: they do not change results.
std::string canonical_config(const ScenarioConfig& config);

// Sets the physical parameter behind a config key from an SI value.
void set_parameter(SystemParams& params, std::string_view key, double value_si);

bool is_parameter_key(std::string_view key);

// Multiplier from `unit` to SI for `key`; throws ParameterError on a mismatch.
double unit_factor(std::string_view key, std::string_view unit, double omega_m);

}  // namespace optomech
