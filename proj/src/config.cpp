#include "optomech/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "json.hpp"

#include "optomech/errors.hpp"
#include "optomech/evaluate.hpp"

namespace optomech {

namespace {

enum class Kind { Frequency, Rate, Length, Mass, Power, Count };

struct KeyInfo {
    std::string_view key;
    Kind kind;
};

constexpr KeyInfo kKeys[] = {
    {"omega_m", Kind::Frequency},     {"kappa_c", Kind::Rate},      {"kappa_a", Kind::Rate},
    {"gamma_m", Kind::Rate},          {"delta_pinned", Kind::Rate}, {"delta_c", Kind::Rate},
    {"delta_a", Kind::Rate},          {"tunneling_j", Kind::Rate},  {"omega_c", Kind::Rate},
    {"cavity_length", Kind::Length},  {"mass", Kind::Mass},         {"power_left", Kind::Power},
    {"power_right", Kind::Power},     {"wavelength", Kind::Length}, {"nbar", Kind::Count},
};

const KeyInfo* find_key(std::string_view key) {
    for (const auto& k : kKeys) {
        if (k.key == key) return &k;
    }
    return nullptr;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

std::optional<double> to_double(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Located {
    std::string origin;
    int line = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParameterError(origin + ":" + std::to_string(line) + ": " + msg);
    }
};

struct RawValue {
    double value = 0.0;
    std::string unit;
    Located where;
};

}  // namespace

bool is_parameter_key(std::string_view key) { return find_key(key) != nullptr; }

double unit_factor(std::string_view key, std::string_view unit, double omega_m) {
    const KeyInfo* info = find_key(key);
    if (!info) throw ParameterError("unknown parameter '" + std::string(key) + "'");
    const auto mismatch = [&]() -> double {
        throw ParameterError("unit '" + std::string(unit) + "' does not fit parameter '" +
                             std::string(key) + "'");
    };
    constexpr double tau = 2.0 * kPi;
    switch (info->kind) {
        case Kind::Frequency:
        case Kind::Rate:
            if (unit.empty() || unit == "rad/s") return 1.0;
            if (unit == "2pi*Hz") return tau;
            if (unit == "2pi*kHz") return tau * 1e3;
            if (unit == "2pi*MHz") return tau * 1e6;
            if (unit == "2pi*GHz") return tau * 1e9;
            if (unit == "wm" && info->kind == Kind::Rate) return omega_m;
            return mismatch();
        case Kind::Length:
            if (unit.empty() || unit == "m") return 1.0;
            if (unit == "mm") return 1e-3;
            if (unit == "um") return 1e-6;
            if (unit == "nm") return 1e-9;
            return mismatch();
        case Kind::Mass:
            if (unit.empty() || unit == "kg") return 1.0;
            if (unit == "g") return 1e-3;
            if (unit == "mg") return 1e-6;
            if (unit == "ug") return 1e-9;
            if (unit == "ng") return 1e-12;
            if (unit == "pg") return 1e-15;
            return mismatch();
        case Kind::Power:
            if (unit.empty() || unit == "W") return 1.0;
            if (unit == "mW") return 1e-3;
            if (unit == "uW") return 1e-6;
            return mismatch();
        case Kind::Count:
            if (unit.empty()) return 1.0;
            return mismatch();
    }
    return mismatch();
}

void set_parameter(SystemParams& p, std::string_view key, double v) {
    if (key == "omega_m") p.omega_m = v;
    else if (key == "kappa_c") p.kappa_c = v;
    else if (key == "kappa_a") p.kappa_a = v;
    else if (key == "gamma_m") p.gamma_m = v;
    else if (key == "delta_pinned") { p.delta = v; p.detuning_mode = DetuningMode::Pinned; }
    else if (key == "delta_c") { p.delta = v; p.detuning_mode = DetuningMode::SelfConsistent; }
    else if (key == "delta_a") p.delta_a = v;
    else if (key == "tunneling_j") p.tunneling_j = v;
    else if (key == "omega_c") p.omega_c = v;
    else if (key == "cavity_length") p.cavity_length = v;
    else if (key == "mass") p.mass = v;
    else if (key == "power_left") p.power_left = v;
    else if (key == "power_right") p.power_right = v;
    else if (key == "wavelength") p.wavelength = v;
    else if (key == "nbar") p.nbar = v;
    else throw ParameterError("unknown parameter '" + std::string(key) + "'");
}

std::vector<double> SweepAxis::values() const {
    std::vector<double> out;
    for (int i = 0; i < points; ++i) {
        const double t = points > 1 ? static_cast<double>(i) / (points - 1) : 0.0;
        if (i == points - 1 && points > 1) {
            out.push_back(stop);
        } else if (scale == SweepScale::Log) {
            out.push_back(start * std::pow(stop / start, t));
        } else {
            out.push_back(start + (stop - start) * t);
        }
    }
    return out;
}

ScenarioConfig parse_config(std::string_view text, std::string_view origin,
                            std::string_view default_preset) {
    ScenarioConfig cfg;
    std::map<std::string, RawValue> values;
    std::vector<std::pair<std::vector<std::string>, Located>> sweeps;
    std::map<std::string, int> seen;

    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const Located here{std::string(origin), lineno};
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) here.fail("expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view rhs = trim(line.substr(eq + 1));
        if (key.empty()) here.fail("missing key");
        if (rhs.empty()) here.fail("missing value for '" + key + "'");
        if (key != "sweep" && seen.count(key)) {
            here.fail("duplicate key '" + key + "' (first on line " + std::to_string(seen[key]) + ")");
        }
        seen[key] = lineno;

        if (key == "preset") {
            if (rhs != "fig1") here.fail("unknown preset '" + std::string(rhs) + "' (known: fig1)");
            cfg.preset = rhs;
        } else if (key == "sweep") {
            sweeps.emplace_back(split_ws(rhs), here);
        } else if (key == "outputs") {
            std::string list(rhs);
            std::replace(list.begin(), list.end(), ',', ' ');
            for (const auto& name : split_ws(list)) {
                try {
                    parse_quantity(name);
                } catch (const ParameterError& e) {
                    here.fail(e.what());
                }
                cfg.outputs.push_back(name);
            }
        } else if (key == "out_dir") {
            cfg.out_dir = rhs;
        } else if (key == "format") {
            if (rhs == "csv") cfg.format = OutputFormat::Csv;
            else if (rhs == "json") cfg.format = OutputFormat::Json;
            else here.fail("format must be csv or json");
        } else if (key == "jobs") {
            const auto v = to_double(rhs);
            if (!v || *v < 1 || *v != std::floor(*v)) here.fail("jobs must be a positive integer");
            cfg.jobs = static_cast<int>(*v);
        } else if (is_parameter_key(key)) {
            const auto toks = split_ws(rhs);
            if (toks.size() > 2) here.fail("expected '" + key + " = <value> [unit]'");
            const auto v = to_double(toks[0]);
            if (!v) here.fail("'" + toks[0] + "' is not a number");
            values[key] = {*v, toks.size() == 2 ? toks[1] : "", here};
        } else {
            here.fail("unknown key '" + key + "'");
        }
    }

    if (cfg.preset.empty() && !default_preset.empty()) {
        if (default_preset != "fig1") {
            throw ParameterError("unknown preset '" + std::string(default_preset) + "' (known: fig1)");
        }
        cfg.preset = default_preset;
    }
    if (values.count("delta_pinned") && values.count("delta_c")) {
        values["delta_c"].where.fail("delta_pinned and delta_c are mutually exclusive");
    }
    if (cfg.preset == "fig1") {
        cfg.params = fig1_preset();
    } else {
        for (const auto& k : kKeys) {
            if (k.key == "delta_pinned" || k.key == "delta_c") continue;
            if (!values.count(std::string(k.key))) {
                throw ParameterError(std::string(origin) + ": missing required field '" +
                                     std::string(k.key) + "' (or set preset = fig1)");
            }
        }
        if (!values.count("delta_pinned") && !values.count("delta_c")) {
            throw ParameterError(std::string(origin) +
                                 ": missing required field 'delta_pinned' or 'delta_c'");
        }
    }

    // omega_m first: "wm" units depend on it.
    if (auto it = values.find("omega_m"); it != values.end()) {
        try {
            cfg.params.omega_m = it->second.value * unit_factor("omega_m", it->second.unit, 0.0);
        } catch (const ParameterError& e) {
            it->second.where.fail(e.what());
        }
    }
    for (const auto& [key, rv] : values) {
        if (key == "omega_m") continue;
        try {
            set_parameter(cfg.params, key, rv.value * unit_factor(key, rv.unit, cfg.params.omega_m));
        } catch (const ParameterError& e) {
            rv.where.fail(e.what());
        }
    }
    try {
        validate(cfg.params);
    } catch (const ParameterError& e) {
        // point at the offending line when there is one
        const std::string msg = e.what();
        for (const auto& [key, rv] : values) {
            const std::string field = key == "delta_pinned" || key == "delta_c" ? "delta" : key;
            if (msg.find("'" + field + "'") != std::string::npos) rv.where.fail(msg);
        }
        throw ParameterError(std::string(origin) + ": " + msg);
    }

    if (sweeps.size() > 2) sweeps[2].second.fail("at most two sweep axes are supported");
    for (const auto& [toks, where] : sweeps) {
        if (toks.size() < 4 || toks.size() > 6) {
            where.fail("expected 'sweep = <param> <start> <stop> <points> [linear|log] [unit]'");
        }
        SweepAxis ax;
        ax.parameter = toks[0];
        if (!is_parameter_key(ax.parameter)) where.fail("sweep references unknown parameter '" + ax.parameter + "'");
        const auto s = to_double(toks[1]);
        const auto e = to_double(toks[2]);
        const auto n = to_double(toks[3]);
        if (!s || !e || !n) where.fail("sweep start, stop and points must be numbers");
        if (*n < 1 || *n != std::floor(*n)) where.fail("sweep needs a positive integer number of points");
        ax.start = *s;
        ax.stop = *e;
        ax.points = static_cast<int>(*n);
        std::size_t next = 4;
        if (toks.size() > next && (toks[next] == "linear" || toks[next] == "log")) {
            ax.scale = toks[next] == "log" ? SweepScale::Log : SweepScale::Linear;
            ++next;
        }
        if (toks.size() > next) ax.unit = toks[next++];
        if (toks.size() > next) where.fail("trailing tokens in sweep line");
        if (ax.points > 1 && ax.start == ax.stop) where.fail("degenerate sweep range");
        if (ax.scale == SweepScale::Log && !(ax.start > 0.0 && ax.stop > 0.0)) {
            where.fail("log sweep needs positive endpoints");
        }
        if (ax.parameter == "delta_pinned" && cfg.params.detuning_mode != DetuningMode::Pinned) {
            where.fail("sweep of delta_pinned needs a pinned detuning (config sets delta_c)");
        }
        if (ax.parameter == "delta_c" && cfg.params.detuning_mode != DetuningMode::SelfConsistent) {
            where.fail("sweep of delta_c needs a self-consistent detuning (config sets delta_pinned)");
        }
        for (const auto& other : cfg.axes) {
            if (other.parameter == ax.parameter) where.fail("parameter swept twice");
        }
        try {
            ax.to_si = unit_factor(ax.parameter, ax.unit, cfg.params.omega_m);
            for (double end : {ax.start, ax.stop}) {
                SystemParams probe = cfg.params;
                set_parameter(probe, ax.parameter, end * ax.to_si);
                validate(probe);
            }
        } catch (const ParameterError& err) {
            where.fail(err.what());
        }
        cfg.axes.push_back(ax);
    }
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path, std::string_view default_preset) {
    std::ifstream f(path);
    if (!f) throw ParameterError(path.string() + ": cannot open config");
    std::stringstream buf;
    buf << f.rdbuf();
    const std::string text = buf.str();

    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ParameterError(path.string() + ": invalid JSON: " + e.what());
        }
        if (!j.contains("provenance") || !j["provenance"].contains("config")) {
            throw ParameterError(path.string() + ": JSON table has no embedded config");
        }
        return parse_config(j["provenance"]["config"].get<std::string>(), path.string(), default_preset);
    }

    constexpr std::string_view tag = "# config: ";
    std::string embedded;
    bool found = false;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (line.rfind(tag, 0) == 0) {
            embedded += line.substr(tag.size()) + "\n";
            found = true;
        }
    }
    if (found) return parse_config(embedded, path.string() + " (embedded)", default_preset);
    return parse_config(text, path.string(), default_preset);
}

std::string canonical_config(const ScenarioConfig& cfg) {
    const SystemParams& p = cfg.params;
    std::ostringstream out;
    const auto kv = [&](std::string_view k, double v, std::string_view unit) {
        out << k << " = " << fmt17(v);
        if (!unit.empty()) out << ' ' << unit;
        out << '\n';
    };
    kv("omega_m", p.omega_m, "rad/s");
    kv("kappa_c", p.kappa_c, "rad/s");
    kv("kappa_a", p.kappa_a, "rad/s");
    kv("gamma_m", p.gamma_m, "rad/s");
    kv(p.detuning_mode == DetuningMode::Pinned ? "delta_pinned" : "delta_c", p.delta, "rad/s");
    kv("delta_a", p.delta_a, "rad/s");
    kv("tunneling_j", p.tunneling_j, "rad/s");
    kv("omega_c", p.omega_c, "rad/s");
    kv("cavity_length", p.cavity_length, "m");
    kv("mass", p.mass, "kg");
    kv("power_left", p.power_left, "W");
    kv("power_right", p.power_right, "W");
    kv("wavelength", p.wavelength, "m");
    kv("nbar", p.nbar, "");
    for (const auto& ax : cfg.axes) {
        out << "sweep = " << ax.parameter << ' ' << fmt17(ax.start) << ' ' << fmt17(ax.stop) << ' '
            << ax.points << ' ' << (ax.scale == SweepScale::Log ? "log" : "linear");
        if (!ax.unit.empty()) out << ' ' << ax.unit;
        out << '\n';
    }
    if (!cfg.outputs.empty()) {
        out << "outputs = ";
        for (std::size_t i = 0; i < cfg.outputs.size(); ++i) out << (i ? ", " : "") << cfg.outputs[i];
        out << '\n';
    }
    return out.str();
}

}  // namespace optomech
