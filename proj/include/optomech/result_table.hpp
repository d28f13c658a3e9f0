#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "optomech/config.hpp"

namespace optomech {

inline constexpr std::string_view kCodeVersion = "0.1.0";

struct Column {
    std::string name;
    std::string unit;  // empty for dimensionless
};

struct Provenance {
    std::string figure_tag;   // figure tag, or "sweep"
    std::string config_hash;  // 16 hex digits, FNV-1a 64 of config_text
    std::string code_version{kCodeVersion};
    std::string config_text;  // canonical config
    std::vector<std::string> notes;
};

// Rectangular table with a status per row. NaN is only allowed in rows
// whose status is not "ok".
struct ResultTable {
    std::string name;  // file stem
    std::vector<Column> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> status;
    Provenance provenance;

    void add_row(std::vector<double> values, std::string row_status = "ok");
    std::size_t column_index(std::string_view column) const;  // throws ParameterError
    std::vector<double> column(std::string_view column) const;

    // Throws IntegrityError on a ragged table or a NaN in an ok row.
    void check() const;

    std::string to_csv() const;
    std::string to_json() const;
};

std::uint64_t fnv1a64(std::string_view data);
std::string config_hash(std::string_view canonical_text);

// Fills provenance from a config (hash + canonical text).
Provenance make_provenance(std::string_view tag, const ScenarioConfig& config);

// Writes <dir>/<table.name>.csv|json and returns the path.
std::filesystem::path write_table(const ResultTable& table, const std::filesystem::path& dir,
                                  OutputFormat format);

std::string render(const ResultTable& table, OutputFormat format);

}  // namespace optomech
