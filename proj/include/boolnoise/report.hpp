/*
 * report.hpp: experiment reports and flat config files.
 *
 * CSV reports open with a block of `#` lines (tool version, config echo,
 * seed), then one column line and the data rows. Floats use 17 significant
 * digits so they re-parse to the same double. JSON reports carry the same
 * content with keys in a fixed order.
 */

#pragma once

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "boolnoise/common.hpp"
#include "boolnoise/noise.hpp"
#include "boolnoise/table_io.hpp"

namespace boolnoise {

inline constexpr const char* kToolVersion = "boolnoise 1.0.0";

using Cell = std::variant<std::int64_t, double, std::string>;

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_cell(const Cell& c) {
    if (auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    if (auto* d = std::get_if<double>(&c)) return format_g17(*d);
    return std::get<std::string>(c);
}

enum class Format { csv, json };

inline Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw ContractError("unknown format '" + s + "' (expected csv or json)");
}

struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;
    std::uint64_t seed = kDefaultSeed;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row) {
        require(row.size() == columns.size(), "report row has " + std::to_string(row.size()) +
                                                  " cells, expected " + std::to_string(columns.size()));
        rows.push_back(std::move(row));
    }
};

inline void write_csv(std::ostream& os, const Report& r) {
    os << "# tool: " << kToolVersion << '\n';
    os << "# command: " << r.command << '\n';
    for (const auto& [k, v] : r.config) os << "# " << k << '=' << v << '\n';
    os << "# seed=" << r.seed << '\n';
    for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
    os << '\n';
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
        os << '\n';
    }
}

inline void write_json(std::ostream& os, const Report& r) {
    nlohmann::ordered_json j;
    j["tool"] = kToolVersion;
    j["command"] = r.command;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.config) cfg[k] = v;
    j["config"] = cfg;
    j["seed"] = r.seed;
    j["columns"] = r.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::visit([&](const auto& v) { obj[r.columns[i]] = v; }, row[i]);
        }
        rows.push_back(std::move(obj));
    }
    j["rows"] = rows;
    os << j.dump(2) << '\n';
}

inline void emit_report(std::ostream& os, const Report& r, Format f) {
    if (f == Format::csv) write_csv(os, r);
    else write_json(os, r);
}

inline void emit_report(const std::string& path, const Report& r, Format f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report " + path);
    emit_report(out, r, f);
    if (!out) throw std::runtime_error("write failed for report " + path);
}

struct CsvTable {
    std::vector<std::string> header;  // `#` lines without the marker
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

inline std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    bool have_columns = false;
    while (std::getline(is, line)) {
        if (!have_columns && !line.empty() && line[0] == '#') {
            t.header.push_back(line.size() > 2 ? line.substr(2) : "");
            continue;
        }
        if (!have_columns) {
            t.columns = split_commas(line);
            have_columns = true;
            continue;
        }
        if (line.empty()) continue;
        t.rows.push_back(split_commas(line));
    }
    return t;
}

// Flat `key=value` lines; blank lines and `#` comments are skipped.
inline std::vector<std::pair<std::string, std::string>> parse_config(std::istream& is) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    while (std::getline(is, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ContractError("config line " + std::to_string(lineno) + ": expected key=value");
        }
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

inline std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ContractError("cannot open config file " + path);
    return parse_config(in);
}

// Accepts `bernoulli:0.1`, `fixed:3`, or the braced form `{bernoulli: 0.1}`.
inline NoiseModel parse_noise(std::string s) {
    std::string compact;
    for (char c : s) {
        if (c != ' ' && c != '{' && c != '}') compact += c;
    }
    const auto colon = compact.find(':');
    if (colon == std::string::npos) throw ContractError("noise model '" + s + "': expected kind:value");
    const auto kind = compact.substr(0, colon);
    const auto value = compact.substr(colon + 1);
    try {
        std::size_t used = 0;
        if (kind == "bernoulli") {
            const double eps = std::stod(value, &used);
            if (used == value.size()) return Bernoulli{eps};
        } else if (kind == "fixed") {
            const int q = std::stoi(value, &used);
            if (used == value.size()) return FixedSize{q};
        }
    } catch (const std::logic_error&) {
    }
    throw ContractError("noise model '" + s + "': expected bernoulli:<eps> or fixed:<q>");
}

// One real per line; blank lines and `#` comments are skipped.
inline std::vector<double> read_weights(std::istream& is) {
    std::vector<double> w;
    std::string line;
    while (std::getline(is, line)) {
        const auto a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos || line[a] == '#') continue;
        const auto b = line.find_last_not_of(" \t\r");
        w.push_back(parse_double(std::string_view(line).substr(a, b - a + 1)));
    }
    require(!w.empty(), "weights file is empty");
    return w;
}

}  // namespace boolnoise
