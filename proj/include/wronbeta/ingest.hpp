#pragma once

#include <compare>
#include <filesystem>
#include <string>
#include <vector>

#include "wronbeta/errors.hpp"

namespace wronbeta {

/// Calendar date, ISO-8601 (YYYY-MM-DD).
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    static Date parse(const std::string& text); // throws ParseError
    std::string iso() const;
    auto operator<=>(const Date&) const = default;
};

struct PriceRecord {
    Date date;
    double value = 0.0; // > 0
};

/// Date-sorted positive price observations for one instrument.
struct Dataset {
    std::string name;
    std::vector<PriceRecord> records;
};

/// Loads `column` from a comma-separated file with a header row and a `date`
/// column. Rows must be strictly increasing in date; values positive and
/// finite. Diagnostics carry 1-based row numbers.
Dataset load_csv(const std::filesystem::path& path, const std::string& column);

/// Writes date,<name> rows; values rendered with 12 significant digits so
/// load_csv(write_csv(d)) reproduces d for 12-digit-clean data.
void write_csv(const Dataset& dataset, const std::filesystem::path& path);

/// Inner join of several datasets on date.
struct AlignedTable {
    std::vector<Date> dates;                    // common dates, ascending
    std::vector<std::string> names;             // per input dataset
    std::vector<std::vector<double>> columns;   // columns[k][i]: dataset k at dates[i]
    std::vector<std::size_t> dropped;           // rows dropped per input dataset
};

AlignedTable align(const std::vector<Dataset>& datasets);

/// 12-significant-digit rendering used for every numeric output.
std::string format_value(double v);

} // namespace wronbeta
