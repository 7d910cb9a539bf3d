/*
 * table_io.hpp: text format for truth tables and spectra.
 *
 *   n=<int> kind=<indicator|signed|real|spectrum>
 *   v_0
 *   v_1
 *   ...                       (2^n values in index order)
 *
 * Values are written in shortest round-trip form, so reading a file back
 * reproduces every double bit for bit.
 */

#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <variant>

#include "boolnoise/function.hpp"

namespace boolnoise {

inline std::string format_shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ContractError("cannot parse number '" + std::string(s) + "'");
    }
    return v;
}

namespace detail {
inline void write_values(std::ostream& os, std::span<const double> v) {
    for (double x : v) os << format_shortest(x) << '\n';
}

struct TableHeader {
    int n = 0;
    std::string kind;
};

inline TableHeader read_header(std::istream& is) {
    std::string line;
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") != std::string::npos) break;
    }
    std::istringstream ls(line);
    TableHeader h;
    std::string tok;
    bool have_n = false;
    while (ls >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw ContractError("table header: malformed token '" + tok + "'");
        auto key = tok.substr(0, eq);
        auto val = tok.substr(eq + 1);
        if (key == "n") {
            h.n = std::stoi(val);
            have_n = true;
        } else if (key == "kind") {
            h.kind = val;
        } else {
            throw ContractError("table header: unknown key '" + key + "'");
        }
    }
    if (!have_n || h.kind.empty()) throw ContractError("table header must carry n= and kind=");
    require(h.n >= 1, "table header: n must be at least 1");
    require_table_size(h.n, max_n(), "read_table");
    return h;
}

inline std::vector<double> read_values(std::istream& is, int n) {
    std::vector<double> v;
    v.reserve(std::size_t{1} << n);
    std::string tok;
    while (is >> tok) v.push_back(parse_double(tok));
    if (v.size() != (std::size_t{1} << n)) {
        throw ContractError("table body has " + std::to_string(v.size()) + " values, expected 2^" +
                            std::to_string(n));
    }
    return v;
}
}  // namespace detail

inline void write_table(std::ostream& os, const BooleanFunction& f) {
    os << "n=" << f.n() << " kind=" << kind_name(f.kind()) << '\n';
    detail::write_values(os, f.table());
}

inline void write_spectrum(std::ostream& os, const Spectrum& sp) {
    os << "n=" << sp.n() << " kind=spectrum\n";
    detail::write_values(os, sp.coeffs());
}

using TableFile = std::variant<BooleanFunction, Spectrum>;

inline TableFile read_table_file(std::istream& is) {
    auto h = detail::read_header(is);
    auto v = detail::read_values(is, h.n);
    if (h.kind == "spectrum") return Spectrum(h.n, std::move(v));
    return BooleanFunction(h.n, std::move(v), parse_kind(h.kind));
}

inline BooleanFunction read_table(std::istream& is) {
    auto file = read_table_file(is);
    if (auto* f = std::get_if<BooleanFunction>(&file)) return std::move(*f);
    throw ContractError("expected a truth table, found a spectrum");
}

inline BooleanFunction read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_table(in);
}

inline void save(const std::string& path, const BooleanFunction& f) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_table(out, f);
}

inline void save(const std::string& path, const Spectrum& sp) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_spectrum(out, sp);
}

}  // namespace boolnoise
