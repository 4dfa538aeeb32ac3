#include "offnet/cli/table.hpp"

#include "offnet/cli/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>

namespace offnet::cli {

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw OutputError("table row does not match its columns");
    rows.push_back(std::move(row));
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // also folds -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string format_cell(const Cell &c) {
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(double v) const { return format_number(v); }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(const std::string &v) const { return v; }
    };
    return std::visit(Visitor{}, c);
}

std::string csv_escape(const std::string &field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

std::string to_csv(const Table &table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(table.columns[i]);
    }
    out += '\n';
    for (const auto &row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_escape(format_cell(row[i]));
        }
        out += '\n';
    }
    return out;
}

void emit_csv(const Table &table, const std::filesystem::path &path) {
    for (const auto &row : table.rows)
        if (row.size() != table.columns.size()) throw OutputError("records do not match the schema");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw OutputError("cannot write " + path.string());
    const std::string text = to_csv(table);
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!os) throw OutputError("failed writing " + path.string());
}

void print_table(const Table &table, std::ostream &os) {
    std::vector<std::size_t> width(table.columns.size());
    std::vector<std::vector<std::string>> text;
    for (std::size_t i = 0; i < table.columns.size(); ++i) width[i] = table.columns[i].size();
    for (const auto &row : table.rows) {
        auto &t = text.emplace_back();
        for (std::size_t i = 0; i < row.size(); ++i) {
            t.push_back(format_cell(row[i]));
            width[i] = std::max(width[i], t.back().size());
        }
    }
    auto line = [&](const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << "  ";
            os << std::setw(static_cast<int>(width[i])) << cells[i];
        }
        os << '\n';
    };
    line(table.columns);
    for (const auto &t : text) line(t);
}

} // namespace offnet::cli
