// SPDX-License-Identifier: Apache-2.0
//
// Tabular experiment output (CSV with a '#' metadata preamble) and
// self-contained SVG line plots.

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace oamcapa {

struct Column {
    std::string name;
    std::string unit; // "1" for dimensionless
    bool text = false;

    // "<name>_<unit>", or just the name for text columns
    std::string header() const;
};

using Cell = std::variant<double, std::string>;

class ResultTable {
public:
    explicit ResultTable(std::vector<Column> columns);

    const std::vector<Column>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }
    const std::vector<std::pair<std::string, std::string>>& metadata() const { return metadata_; }

    // Throws std::invalid_argument when the row length or a cell type does
    // not match the column layout.
    void add_row(std::vector<Cell> row);
    void add_metadata(std::string key, std::string value);

    // Matches the full header ("distance_m") first, then the bare name.
    int column_index(const std::string& name) const;
    double number(std::size_t row, const std::string& column) const;
    const std::string& text(std::size_t row, const std::string& column) const;

    void write_csv(std::ostream& os) const;

private:
    std::vector<Column> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<std::pair<std::string, std::string>> metadata_;
};

// Shortest round-trip decimal representation.
std::string format_number(double value);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    std::vector<PlotSeries> series;
};

void write_svg(const PlotSpec& plot, std::ostream& os);

} // namespace oamcapa
