#pragma once

// Column-oriented result tables with CSV, JSON and SVG emitters. Floats are
// printed with 17 significant digits so a table round-trips exactly.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace uavg {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

/// "%.17g", with "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double v);

class Table {
public:
    Table() = default;
    explicit Table(std::vector<std::string> columns);

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }
    const std::vector<std::pair<std::string, std::string>>& notes() const { return notes_; }

    /// Throws std::invalid_argument when the width does not match.
    void add_row(std::vector<Cell> row);
    /// Trailing `# key,value` line in CSV, "notes" object in JSON.
    void add_note(std::string key, std::string value);

    int column_index(const std::string& name) const;  // -1 when absent
    std::size_t size() const { return rows_.size(); }

    void write_csv(std::ostream& os) const;
    void write_json(std::ostream& os) const;
    std::string to_csv() const;
    std::string to_json() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<std::pair<std::string, std::string>> notes_;
};

std::string cell_to_string(const Cell& c);

struct ChartSpec {
    std::string x;
    std::string y;
    std::string series;  // optional grouping column
    std::string title;
    bool log_x = false;
    bool log_y = false;
};

/// Minimal SVG line chart of numeric columns, one polyline per series value.
std::string svg_line_chart(const Table& table, const ChartSpec& spec);

}  // namespace uavg
