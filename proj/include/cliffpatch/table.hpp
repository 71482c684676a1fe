// Copyright 2026 The cliffpatch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cctype>
#include <cerrno>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cliffpatch/errors.hpp"

namespace cliffpatch {

using Cell = std::variant<int64_t, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    Table() = default;
    explicit Table(std::vector<std::string> cols) : columns(std::move(cols)) {
    }

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns.size()) throw DimensionError("row width does not match table header");
        rows.push_back(std::move(row));
    }

    std::size_t column(const std::string &name) const {
        for (std::size_t i = 0; i < columns.size(); i++) {
            if (columns[i] == name) return i;
        }
        throw InvalidArgument("no column '" + name + "'");
    }

    double number(std::size_t row, const std::string &name) const {
        const Cell &c = rows.at(row).at(column(name));
        if (auto *i = std::get_if<int64_t>(&c)) return static_cast<double>(*i);
        if (auto *d = std::get_if<double>(&c)) return *d;
        throw InvalidArgument("column '" + name + "' is not numeric");
    }

    bool operator==(const Table &o) const {
        if (columns != o.columns || rows.size() != o.rows.size()) return false;
        for (std::size_t r = 0; r < rows.size(); r++) {
            for (std::size_t c = 0; c < columns.size(); c++) {
                const Cell &a = rows[r][c], &b = o.rows[r][c];
                if (a.index() != b.index()) return false;
                if (auto *x = std::get_if<double>(&a)) {
                    double y = std::get<double>(b);
                    if (!(*x == y || (std::isnan(*x) && std::isnan(y)))) return false;
                } else if (a != b) {
                    return false;
                }
            }
        }
        return true;
    }
};

struct CsvMeta {
    std::string config_hash;
    uint64_t seed = 0;
    std::string version;
};

/// 64-bit FNV-1a, rendered as 16 hex digits.
inline std::string fnv1a_hex(const std::string &s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

namespace detail {

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    // Keep doubles distinguishable from integers on re-read.
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

inline Cell parse_cell(const std::string &s, bool quoted);

inline std::string quote_field(const std::string &s) {
    // Strings that would re-read as numbers ("nan", "12") are quoted too.
    if (s.find_first_of(",\"\n\r") == std::string::npos && !s.empty() &&
        std::holds_alternative<std::string>(parse_cell(s, false))) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string format_cell(const Cell &c) {
    if (auto *i = std::get_if<int64_t>(&c)) return std::to_string(*i);
    if (auto *d = std::get_if<double>(&c)) return format_double(*d);
    return quote_field(std::get<std::string>(c));
}

inline Cell parse_cell(const std::string &s, bool quoted) {
    if (quoted) return s;
    if (!s.empty()) {
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        bool digits = i < s.size();
        for (std::size_t j = i; j < s.size(); j++) digits = digits && std::isdigit(static_cast<unsigned char>(s[j]));
        if (digits) {
            errno = 0;
            long long v = std::strtoll(s.c_str(), nullptr, 10);
            if (errno == 0) return static_cast<int64_t>(v);
        }
        char *end = nullptr;
        double d = std::strtod(s.c_str(), &end);
        if (end == s.c_str() + s.size()) return d;
    }
    return s;
}

// Splits one CSV record starting at pos; advances pos past the line ending.
inline std::vector<std::pair<std::string, bool>> split_record(const std::string &text, std::size_t &pos) {
    std::vector<std::pair<std::string, bool>> fields;
    std::string cur;
    bool quoted = false, in_quotes = false;
    while (pos < text.size()) {
        char c = text[pos++];
        if (in_quotes) {
            if (c == '"') {
                if (pos < text.size() && text[pos] == '"') {
                    cur += '"';
                    pos++;
                } else {
                    in_quotes = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            in_quotes = quoted = true;
        } else if (c == ',') {
            fields.push_back({cur, quoted});
            cur.clear();
            quoted = false;
        } else if (c == '\n') {
            break;
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back({cur, quoted});
    return fields;
}

}  // namespace detail

inline std::string to_csv(const Table &t, const CsvMeta &meta) {
    std::ostringstream out;
    out << "# config_hash=" << meta.config_hash << ", seed=" << meta.seed << ", version=" << meta.version << "\n";
    for (std::size_t i = 0; i < t.columns.size(); i++) out << (i ? "," : "") << detail::quote_field(t.columns[i]);
    out << "\n";
    for (const auto &row : t.rows) {
        for (std::size_t i = 0; i < row.size(); i++) out << (i ? "," : "") << detail::format_cell(row[i]);
        out << "\n";
    }
    return out.str();
}

inline void emit_csv(const Table &t, const std::string &path, const CsvMeta &meta) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << to_csv(t, meta);
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

inline Table parse_csv(const std::string &text, CsvMeta *meta = nullptr) {
    Table t;
    std::size_t pos = 0;
    bool have_header = false;
    while (pos < text.size()) {
        if (text[pos] == '#') {
            std::size_t end = text.find('\n', pos);
            std::string line = text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
            pos = end == std::string::npos ? text.size() : end + 1;
            if (meta) {
                auto grab = [&](const std::string &key) -> std::string {
                    auto k = line.find(key + "=");
                    if (k == std::string::npos) return "";
                    auto v = k + key.size() + 1;
                    auto e = line.find(',', v);
                    return line.substr(v, e == std::string::npos ? std::string::npos : e - v);
                };
                meta->config_hash = grab("config_hash");
                auto s = grab("seed");
                meta->seed = s.empty() ? 0 : std::stoull(s);
                meta->version = grab("version");
            }
            continue;
        }
        auto fields = detail::split_record(text, pos);
        if (!have_header) {
            for (auto &[f, q] : fields) t.columns.push_back(f);
            have_header = true;
            continue;
        }
        std::vector<Cell> row;
        for (auto &[f, q] : fields) row.push_back(detail::parse_cell(f, q));
        t.add_row(std::move(row));
    }
    return t;
}

/// The CSV text after the leading comment block.
inline std::string csv_body(const std::string &text) {
    std::size_t pos = 0;
    while (pos < text.size() && text[pos] == '#') {
        std::size_t end = text.find('\n', pos);
        pos = end == std::string::npos ? text.size() : end + 1;
    }
    return text.substr(pos);
}

}  // namespace cliffpatch
