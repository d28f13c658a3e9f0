#include "optomech/result_table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "optomech/errors.hpp"

namespace optomech {

namespace {

std::string number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string header_name(const Column& c) {
    return c.unit.empty() ? c.name : c.name + "[" + c.unit + "]";
}

}  // namespace

void ResultTable::add_row(std::vector<double> values, std::string row_status) {
    rows.push_back(std::move(values));
    status.push_back(std::move(row_status));
}

std::size_t ResultTable::column_index(std::string_view col) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].name == col) return i;
    }
    throw ParameterError("table '" + name + "' has no column '" + std::string(col) + "'");
}

std::vector<double> ResultTable::column(std::string_view col) const {
    const std::size_t k = column_index(col);
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r[k]);
    return out;
}

void ResultTable::check() const {
    if (status.size() != rows.size()) {
        throw IntegrityError("table '" + name + "': status column does not match row count");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != columns.size()) {
            throw IntegrityError("table '" + name + "': row " + std::to_string(i) + " has " +
                                 std::to_string(rows[i].size()) + " values, expected " +
                                 std::to_string(columns.size()));
        }
        if (status[i] != "ok") continue;
        for (double v : rows[i]) {
            if (std::isnan(v)) {
                throw IntegrityError("table '" + name + "': NaN in row " + std::to_string(i) +
                                     " without a skip flag");
            }
        }
    }
}

std::string ResultTable::to_csv() const {
    check();
    std::ostringstream out;
    out << "# optomech " << provenance.code_version << '\n';
    out << "# figure: " << provenance.figure_tag << '\n';
    out << "# table: " << name << '\n';
    out << "# config_hash: " << provenance.config_hash << '\n';
    std::istringstream cfg(provenance.config_text);
    for (std::string line; std::getline(cfg, line);) out << "# config: " << line << '\n';
    for (const auto& n : provenance.notes) out << "# note: " << n << '\n';
    out << "status";
    for (const auto& c : columns) out << ',' << header_name(c);
    out << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << status[i];
        for (double v : rows[i]) out << ',' << number(v);
        out << '\n';
    }
    return out.str();
}

std::string ResultTable::to_json() const {
    check();
    nlohmann::ordered_json j;
    j["provenance"] = {{"code_version", provenance.code_version},
                       {"figure", provenance.figure_tag},
                       {"table", name},
                       {"config_hash", provenance.config_hash},
                       {"config", provenance.config_text},
                       {"notes", provenance.notes}};
    auto cols = nlohmann::ordered_json::array();
    for (const auto& c : columns) cols.push_back({{"name", c.name}, {"unit", c.unit}});
    j["columns"] = cols;
    auto rs = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto vals = nlohmann::ordered_json::array();
        for (double v : rows[i]) {
            if (std::isfinite(v)) vals.push_back(v);
            else vals.push_back(nullptr);
        }
        rs.push_back({{"status", status[i]}, {"values", vals}});
    }
    j["rows"] = rs;
    return j.dump(2) + "\n";
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash(std::string_view text) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
    return buf;
}

Provenance make_provenance(std::string_view tag, const ScenarioConfig& config) {
    Provenance p;
    p.figure_tag = tag;
    p.config_text = canonical_config(config);
    p.config_hash = config_hash(p.config_text);
    return p;
}

std::string render(const ResultTable& table, OutputFormat format) {
    return format == OutputFormat::Json ? table.to_json() : table.to_csv();
}

std::filesystem::path write_table(const ResultTable& table, const std::filesystem::path& dir,
                                  OutputFormat format) {
    std::filesystem::create_directories(dir);
    const auto path = dir / (table.name + (format == OutputFormat::Json ? ".json" : ".csv"));
    const std::string text = render(table, format);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParameterError("cannot write " + path.string());
    f << text;
    return path;
}

}  // namespace optomech
