// csv.hpp - CSV export of time series and generic numeric tables

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rcet/timeseries.hpp"

namespace rcet::csv {

// 12 significant digits, shortest of fixed/scientific (printf %.12g).
std::string format_number(double x);

// Header t,rho11,rho22,re_rho12,im_rho12,eta and, when the series carries
// standard errors, se_rho11,se_rho22.
void write_series(std::ostream& out, const TimeSeries& series);

// Inverse of write_series; grid information is not stored and stays default.
// Throws std::runtime_error on a malformed header or row.
TimeSeries read_series(std::istream& in);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(const std::vector<double>& values);
    void add_row(std::vector<std::string> cells);
    // Column index by name; throws std::out_of_range if absent.
    std::size_t column(const std::string& name) const;
    double value(std::size_t row, const std::string& name) const;
};

void write_table(std::ostream& out, const Table& table);
Table read_table(std::istream& in);

// Opens path for writing (creating parent directories) and writes.
// Throws std::runtime_error on I/O failure.
void save(const std::filesystem::path& path, const TimeSeries& series);
void save(const std::filesystem::path& path, const Table& table);

}  // namespace rcet::csv
