// Copyright 2026 The vqalab Authors
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

#ifndef VQALAB_EXPERIMENTS_CSV_HPP
#define VQALAB_EXPERIMENTS_CSV_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

namespace vqalab::experiments {

/// Shortest round-trip decimal form; locale independent.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

inline std::string format_count(std::uint64_t x) { return std::to_string(x); }

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) {
        if (row.size() != header.size()) throw std::logic_error("CsvTable: row width differs from header");
        rows.push_back(std::move(row));
    }

    std::size_t column(const std::string &name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw std::out_of_range("CsvTable: no column '" + name + "'");
    }
};

inline std::string escape_field(const std::string &f) {
    if (f.find_first_of(",\"\n") == std::string::npos) return f;
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline void write_csv(std::ostream &os, const CsvTable &t) {
    auto line = [&](const std::vector<std::string> &fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) os << ',';
            os << escape_field(fields[i]);
        }
        os << '\n';
    };
    line(t.header);
    for (const auto &r : t.rows) line(r);
}

inline std::string to_csv_string(const CsvTable &t) {
    std::ostringstream os;
    write_csv(os, t);
    return os.str();
}

inline void write_csv_file(const std::string &path, const CsvTable &t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    write_csv(out, t);
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace vqalab::experiments

#endif  // VQALAB_EXPERIMENTS_CSV_HPP
