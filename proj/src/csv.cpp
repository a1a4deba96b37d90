#include "glmpss/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "glmpss/errors.hpp"

namespace glmpss {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        cells.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == ',') {
        cells.push_back("");
    }
    return cells;
}

}  // namespace

RawTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IngestError("cannot open '" + path + "'");
    }
    RawTable table;
    std::string line;
    long data_row = 0;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        if (table.columns.empty()) {
            table.columns = split_line(t);
            continue;
        }
        ++data_row;
        auto cells = split_line(t);
        if (cells.size() != table.columns.size()) {
            throw IngestError("'" + path + "': row " + std::to_string(data_row) +
                              " has " + std::to_string(cells.size()) +
                              " cells, expected " +
                              std::to_string(table.columns.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    if (table.columns.empty()) {
        throw IngestError("'" + path + "' contains no header row");
    }
    return table;
}

int column_index(const RawTable& table, const std::string& name) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (table.columns[i] == name) {
            return static_cast<int>(i);
        }
    }
    std::string available;
    for (const auto& c : table.columns) {
        available += (available.empty() ? "" : ", ") + c;
    }
    throw IngestError("column '" + name + "' not found (available: " +
                      available + ")");
}

std::vector<double> numeric_column(const RawTable& table,
                                   const std::string& name) {
    const int idx = column_index(table, name);
    std::vector<double> out;
    out.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::string& cell = table.rows[r][idx];
        double v = 0;
        const char* first = cell.data();
        const char* last = first + cell.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || cell.empty()) {
            throw IngestError("non-numeric cell '" + cell + "' at row " +
                              std::to_string(r + 1) + ", column '" + name +
                              "'");
        }
        out.push_back(v);
    }
    return out;
}

std::string format_full(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }
    return std::string(buf, ptr);
}

std::string format_human(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ConfigError("cannot write '" + tmp + "'");
        }
        out << content;
        out.flush();
        if (!out) {
            std::remove(tmp.c_str());
            throw ConfigError("failed while writing '" + tmp + "'");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw ConfigError("cannot move '" + tmp + "' to '" + path + "'");
    }
}

}  // namespace glmpss
