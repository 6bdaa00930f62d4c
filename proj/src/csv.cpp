#include "rcet/csv.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rcet::csv {

namespace {

const std::vector<std::string> kSeriesHeader = {"t", "rho11", "rho22", "re_rho12", "im_rho12", "eta"};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

double parse_number(const std::string& cell, std::size_t line_no) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(cell, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != cell.size()) {
        throw std::runtime_error("csv line " + std::to_string(line_no) + ": not a number: '" + cell + "'");
    }
    return x;
}

void write_line(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << cells[i];
    }
    out << '\n';
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    return out;
}

}  // namespace

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_series(std::ostream& out, const TimeSeries& series) {
    std::vector<std::string> header = kSeriesHeader;
    const bool errors = series.has_errors();
    if (errors) {
        header.emplace_back("se_rho11");
        header.emplace_back("se_rho22");
    }
    write_line(out, header);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const DensityMatrix2& rho = series.states[i];
        std::vector<std::string> cells = {format_number(series.t[i]),          format_number(rho.rho11),
                                          format_number(rho.rho22),            format_number(rho.rho12.real()),
                                          format_number(rho.rho12.imag()),     format_number(series.eta[i])};
        if (errors) {
            cells.push_back(format_number(series.se_rho11[i]));
            cells.push_back(format_number(series.se_rho22[i]));
        }
        write_line(out, cells);
    }
}

TimeSeries read_series(std::istream& in) {
    const Table table = read_table(in);
    const bool errors = table.header.size() == kSeriesHeader.size() + 2;
    std::vector<std::string> expected = kSeriesHeader;
    if (errors) {
        expected.emplace_back("se_rho11");
        expected.emplace_back("se_rho22");
    }
    if (table.header != expected) {
        throw std::runtime_error("csv: unexpected time-series header");
    }
    TimeSeries series;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        std::vector<double> x;
        for (const auto& cell : row) {
            x.push_back(parse_number(cell, r + 2));
        }
        series.push(x[0], {x[1], x[2], {x[3], x[4]}}, x[5]);
        if (errors) {
            series.se_rho11.push_back(x[6]);
            series.se_rho22.push_back(x[7]);
        }
    }
    return series;
}

void Table::add_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (const double x : values) {
        cells.push_back(format_number(x));
    }
    add_row(std::move(cells));
}

void Table::add_row(std::vector<std::string> cells) {
    if (cells.size() != header.size()) {
        throw std::invalid_argument("Table: row width does not match header");
    }
    rows.push_back(std::move(cells));
}

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw std::out_of_range("Table: no column '" + name + "'");
}

double Table::value(std::size_t row, const std::string& name) const {
    return parse_number(rows.at(row).at(column(name)), row + 2);
}

void write_table(std::ostream& out, const Table& table) {
    write_line(out, table.header);
    for (const auto& row : table.rows) {
        write_line(out, row);
    }
}

Table read_table(std::istream& in) {
    Table table;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("csv: missing header");
    }
    table.header = split(line);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto cells = split(line);
        if (cells.size() != table.header.size()) {
            throw std::runtime_error("csv line " + std::to_string(line_no) + ": wrong number of fields");
        }
        table.rows.push_back(std::move(cells));
    }
    return table;
}

void save(const std::filesystem::path& path, const TimeSeries& series) {
    std::ofstream out = open_for_write(path);
    write_series(out, series);
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

void save(const std::filesystem::path& path, const Table& table) {
    std::ofstream out = open_for_write(path);
    write_table(out, table);
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

}  // namespace rcet::csv
