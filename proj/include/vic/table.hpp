#pragma once

// Rectangular result table with a metadata block, written as CSV with
// '#'-prefixed metadata lines, plus a gnuplot companion script.

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vic/error.hpp"

namespace vic {

inline constexpr const char* kVersion = "vic 1.0.0";

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;

    void add_row(std::vector<double> row) {
        if (row.size() != columns.size()) {
            throw InvalidState("row has " + std::to_string(row.size()) + " values but table has " +
                               std::to_string(columns.size()) + " columns");
        }
        rows.push_back(std::move(row));
    }

    void meta(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }

    std::size_t column(const std::string& name) const {
        for (std::size_t k = 0; k < columns.size(); ++k)
            if (columns[k] == name) return k;
        throw InvalidState("no column named '" + name + "'");
    }

    std::vector<double> column_values(const std::string& name) const {
        const std::size_t c = column(name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r[c]);
        return out;
    }
};

namespace detail {

inline std::string shortest(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace detail

inline void write_csv(std::ostream& out, const ResultTable& t) {
    for (const auto& [k, v] : t.metadata) {
        std::string flat = v;
        for (auto& c : flat)
            if (c == '\n') c = ' ';
        out << "# " << k << ": " << flat << '\n';
    }
    for (std::size_t k = 0; k < t.columns.size(); ++k) out << (k ? "," : "") << t.columns[k];
    out << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t k = 0; k < r.size(); ++k) out << (k ? "," : "") << detail::shortest(r[k]);
        out << '\n';
    }
}

inline std::string to_csv(const ResultTable& t) {
    std::ostringstream s;
    write_csv(s, t);
    return s.str();
}

/// Strict reader for the format written above: metadata lines first, then
/// one header row, then rows with exactly as many numeric fields.
inline ResultTable read_csv(std::istream& in) {
    ResultTable t;
    std::string line;
    bool header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') throw InvalidState("line " + std::to_string(lineno) + ": CR line ending");
        if (!header && line.rfind("# ", 0) == 0) {
            const auto colon = line.find(": ");
            if (colon == std::string::npos) throw InvalidState("line " + std::to_string(lineno) + ": bad metadata");
            t.meta(line.substr(2, colon - 2), line.substr(colon + 2));
            continue;
        }
        std::vector<std::string> fields;
        std::size_t from = 0;
        while (true) {
            const auto at = line.find(',', from);
            fields.push_back(line.substr(from, at == std::string::npos ? std::string::npos : at - from));
            if (at == std::string::npos) break;
            from = at + 1;
        }
        if (!header) {
            t.columns = fields;
            header = true;
            continue;
        }
        if (fields.size() != t.columns.size()) {
            throw InvalidState("line " + std::to_string(lineno) + ": expected " + std::to_string(t.columns.size()) +
                               " fields, got " + std::to_string(fields.size()));
        }
        std::vector<double> row;
        for (const auto& f : fields) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
                throw InvalidState("line " + std::to_string(lineno) + ": not a number: '" + f + "'");
            }
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    if (!header) throw InvalidState("no header row");
    return t;
}

/// gnuplot script plotting every column against the first one.
inline std::string gnuplot_script(const ResultTable& t, const std::string& csv_path, const std::string& title) {
    std::ostringstream g;
    g << "# " << title << "\n";
    g << "set datafile separator ','\n";
    g << "set datafile commentschars '#'\n";
    g << "set key autotitle columnhead\n";
    g << "set xlabel '" << (t.columns.empty() ? "" : t.columns.front()) << "'\n";
    g << "set title '" << title << "'\n";
    g << "plot ";
    for (std::size_t k = 1; k < t.columns.size(); ++k) {
        g << (k > 1 ? ", \\\n     " : "") << "'" << csv_path << "' using 1:" << k + 1 << " with lines";
    }
    g << "\n";
    return g.str();
}

}  // namespace vic
