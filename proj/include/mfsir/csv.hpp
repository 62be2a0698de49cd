#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mfsir/error.hpp"

namespace mfsir::csv {

// Shortest round-trip decimal representation, always with '.' separator.
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // trim digits while the value still round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(shorter, "%lf", &back);
        if (back == v) return shorter;
    }
    return buf;
}

inline std::string fmt(int v) { return std::to_string(v); }
inline std::string fmt(std::uint64_t v) { return std::to_string(v); }
inline std::string fmt(const std::string& v) { return v; }

class Writer {
public:
    explicit Writer(const std::string& path) : out_(path) {
        if (!out_) throw data_error("cannot open for writing: " + path);
    }

    template <typename... Ts>
    void row(const Ts&... cells) {
        bool first = true;
        ((out_ << (first ? "" : ","), first = false, out_ << fmt(cells)), ...);
        out_ << '\n';
    }

    void raw_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        throw data_error("csv column not found: " + name);
    }
};

// Reads CSVs this library writes: no quoting, first row is the header.
inline Table read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open: " + path);
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    if (first) throw data_error("empty csv: " + path);
    return t;
}

}  // namespace mfsir::csv
