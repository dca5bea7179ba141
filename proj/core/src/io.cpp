#include "vbwave/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "vbwave/error.hpp"

namespace vbwave {

std::string format_double(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        fs::create_directories(target.parent_path());
    }
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot open " + tmp.string() + " for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, target);
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<double>& values) {
    if (values.size() != columns_.size()) {
        throw InvalidArgument("CSV row has " + std::to_string(values.size()) + " values, expected " +
                              std::to_string(columns_.size()));
    }
    rows_.push_back(values);
}

std::string CsvTable::str() const {
    std::string out;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        out += (i ? "," : "") + columns_[i];
    }
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

const std::vector<double>& CsvData::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) {
            return values[i];
        }
    }
    throw ConfigError("CSV has no column '" + name + "'");
}

CsvData read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open " + path);
    }
    CsvData data;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const auto b = cell.find_first_not_of(" \t");
            const auto e = cell.find_last_not_of(" \t");
            cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
        }
        if (data.columns.empty()) {
            data.columns = cells;
            data.values.resize(cells.size());
            continue;
        }
        if (cells.size() != data.columns.size()) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected " +
                              std::to_string(data.columns.size()) + " fields");
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            double v = 0.0;
            const char* first = cells[i].data();
            const char* last = first + cells[i].size();
            if (!cells[i].empty() && *first == '+') {
                ++first;
            }
            const auto res = std::from_chars(first, last, v);
            if (res.ec != std::errc() || res.ptr != last) {
                throw ConfigError(path + ":" + std::to_string(lineno) + ": not a number: '" + cells[i] + "'");
            }
            data.values[i].push_back(v);
        }
    }
    if (data.columns.empty()) {
        throw ConfigError(path + ": empty CSV");
    }
    return data;
}

}  // namespace vbwave
