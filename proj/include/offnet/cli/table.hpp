#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace offnet::cli {

using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

/// Homogeneous records: every row has one cell per column.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

/// Nine significant digits, '.' decimal separator, no locale dependence.
std::string format_number(double v);

std::string format_cell(const Cell &c);

/// RFC 4180 quoting: fields containing comma, quote, CR or LF are quoted.
std::string csv_escape(const std::string &field);

std::string to_csv(const Table &table);

/// Writes the table with a header row and LF line endings. Throws OutputError.
void emit_csv(const Table &table, const std::filesystem::path &path);

/// Aligned plain-text rendering for terminals.
void print_table(const Table &table, std::ostream &os);

} // namespace offnet::cli
