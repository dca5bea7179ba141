#pragma once

// Output helpers: round-trip number formatting and all-or-nothing file writes.

#include <string>
#include <vector>

namespace vbwave {

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

/// Writes `content` to a temporary file next to `path` and renames it into
/// place, so readers never observe a partial file. Creates parent directories.
void write_file_atomic(const std::string& path, const std::string& content);

/// Simple CSV builder: one header row, then rows of doubles.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);
    void add_row(const std::vector<double>& values);
    [[nodiscard]] std::string str() const;
    void write(const std::string& path) const { write_file_atomic(path, str()); }
    [[nodiscard]] std::size_t rows() const noexcept { return rows_.size(); }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

/// Reads a CSV of numbers with a header row; returns columns by header name order.
struct CsvData {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> values;  // values[column][row]
    [[nodiscard]] const std::vector<double>& column(const std::string& name) const;
};
CsvData read_csv(const std::string& path);

}  // namespace vbwave
