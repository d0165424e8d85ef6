// SPDX-License-Identifier: Apache-2.0

#include "oamcapa/result_table.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace oamcapa {

std::string Column::header() const { return text ? name : name + "_" + unit; }

ResultTable::ResultTable(std::vector<Column> columns) : columns_(std::move(columns))
{
    if (columns_.empty())
        throw std::invalid_argument("result table needs at least one column");
}

void ResultTable::add_row(std::vector<Cell> row)
{
    if (row.size() != columns_.size())
        throw std::invalid_argument("row has " + std::to_string(row.size()) +
                                    " cells, table has " + std::to_string(columns_.size()) +
                                    " columns");
    for (std::size_t i = 0; i < row.size(); ++i) {
        const bool is_text = std::holds_alternative<std::string>(row[i]);
        if (is_text != columns_[i].text)
            throw std::invalid_argument("cell type mismatch in column " + columns_[i].name);
    }
    rows_.push_back(std::move(row));
}

void ResultTable::add_metadata(std::string key, std::string value)
{
    metadata_.emplace_back(std::move(key), std::move(value));
}

int ResultTable::column_index(const std::string& name) const
{
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].header() == name)
            return static_cast<int>(i);
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].name == name)
            return static_cast<int>(i);
    throw std::out_of_range("no column named " + name);
}

double ResultTable::number(std::size_t row, const std::string& column) const
{
    return std::get<double>(rows_.at(row)[static_cast<std::size_t>(column_index(column))]);
}

const std::string& ResultTable::text(std::size_t row, const std::string& column) const
{
    return std::get<std::string>(rows_.at(row)[static_cast<std::size_t>(column_index(column))]);
}

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc())
        throw std::runtime_error("format_number: conversion failed");
    return std::string(buf.data(), end);
}

namespace {

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

// Round step to 1, 2 or 5 times a power of ten.
double nice_step(double span, int target_ticks)
{
    const double raw = span / std::max(1, target_ticks);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    const double nice = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
    return nice * mag;
}

std::string tick_label(double v)
{
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

} // namespace

void ResultTable::write_csv(std::ostream& os) const
{
    for (const auto& [key, value] : metadata_)
        os << "# " << key << " = " << value << "\r\n";
    for (std::size_t i = 0; i < columns_.size(); ++i)
        os << (i ? "," : "") << csv_field(columns_[i].header());
    os << "\r\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "");
            if (const auto* d = std::get_if<double>(&row[i]))
                os << format_number(*d);
            else
                os << csv_field(std::get<std::string>(row[i]));
        }
        os << "\r\n";
    }
}

void write_svg(const PlotSpec& plot, std::ostream& os)
{
    constexpr double width = 720, height = 480;
    constexpr double left = 80, right = 200, top = 40, bottom = 60;
    constexpr std::array<const char*, 8> palette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

    auto tx = [&](double x) { return plot.log_x ? std::log10(x) : x; };

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : plot.series)
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.y[i]) || (plot.log_x && !(s.x[i] > 0)))
                continue;
            x_lo = std::min(x_lo, tx(s.x[i]));
            x_hi = std::max(x_hi, tx(s.x[i]));
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
        }
    if (!std::isfinite(x_lo)) {
        x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
    }
    if (x_hi == x_lo)
        x_hi = x_lo + 1;
    if (y_hi == y_lo)
        y_hi = y_lo + 1;
    const double y_pad = 0.05 * (y_hi - y_lo);
    y_lo -= y_pad;
    y_hi += y_pad;

    const double pw = width - left - right, ph = height - top - bottom;
    auto px = [&](double x) { return left + (tx(x) - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) { return top + (1.0 - (y - y_lo) / (y_hi - y_lo)) * ph; };

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\" "
       << "font-family=\"sans-serif\" font-size=\"12\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
       << xml_escape(plot.title) << "</text>\n"
       << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    // y ticks
    const double ys = nice_step(y_hi - y_lo, 6);
    for (double y = std::ceil(y_lo / ys) * ys; y <= y_hi; y += ys) {
        os << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << py(y)
           << "\" y2=\"" << py(y) << "\" stroke=\"#ddd\"/>\n"
           << "<text x=\"" << left - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">"
           << tick_label(std::abs(y) < 1e-12 * ys ? 0.0 : y) << "</text>\n";
    }
    // x ticks; decades on log axes
    if (plot.log_x) {
        for (double e = std::ceil(x_lo); e <= x_hi + 1e-9; e += 1.0) {
            const double sx = left + (e - x_lo) / (x_hi - x_lo) * pw;
            os << "<line x1=\"" << sx << "\" x2=\"" << sx << "\" y1=\"" << top << "\" y2=\""
               << top + ph << "\" stroke=\"#ddd\"/>\n"
               << "<text x=\"" << sx << "\" y=\"" << top + ph + 18
               << "\" text-anchor=\"middle\">1e" << static_cast<int>(e) << "</text>\n";
        }
    } else {
        const double xs = nice_step(x_hi - x_lo, 8);
        for (double x = std::ceil(x_lo / xs) * xs; x <= x_hi + 1e-9 * xs; x += xs) {
            os << "<line x1=\"" << px(x) << "\" x2=\"" << px(x) << "\" y1=\"" << top
               << "\" y2=\"" << top + ph << "\" stroke=\"#ddd\"/>\n"
               << "<text x=\"" << px(x) << "\" y=\"" << top + ph + 18
               << "\" text-anchor=\"middle\">" << tick_label(std::abs(x) < 1e-12 * xs ? 0.0 : x)
               << "</text>\n";
        }
    }
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15
       << "\" text-anchor=\"middle\">" << xml_escape(plot.x_label) << "</text>\n"
       << "<text transform=\"translate(20," << top + ph / 2
       << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(plot.y_label) << "</text>\n";

    for (std::size_t i = 0; i < plot.series.size(); ++i) {
        const auto& s = plot.series[i];
        const char* colour = palette[i % palette.size()];
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.8\" points=\"";
        for (std::size_t j = 0; j < s.x.size() && j < s.y.size(); ++j) {
            if (!std::isfinite(s.y[j]) || (plot.log_x && !(s.x[j] > 0)))
                continue;
            os << px(s.x[j]) << ',' << py(s.y[j]) << ' ';
        }
        os << "\"/>\n";
        const double ly = top + 14 + 18 * static_cast<double>(i);
        os << "<line x1=\"" << left + pw + 12 << "\" x2=\"" << left + pw + 36 << "\" y1=\"" << ly
           << "\" y2=\"" << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n"
           << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly + 4 << "\">"
           << xml_escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
}

} // namespace oamcapa
