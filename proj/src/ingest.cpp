#include "wronbeta/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace wronbeta {

namespace {

int days_in_month(int year, int month)
{
    static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2) {
        const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return days[month - 1];
}

std::string trim(const std::string& s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_row(const std::string& line)
{
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ','))
        fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',')
        fields.emplace_back();
    return fields;
}

double parse_number(const std::string& text, std::size_t row, const std::string& column)
{
    if (text.empty())
        throw ParseError("row " + std::to_string(row) + ": missing value in column '" + column +
                         "'");
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + text.size())
        throw ParseError("row " + std::to_string(row) + ": '" + text +
                         "' is not a number in column '" + column + "'");
    if (!std::isfinite(v))
        throw ParseError("row " + std::to_string(row) + ": non-finite value in column '" + column +
                         "'");
    return v;
}

} // namespace

Date Date::parse(const std::string& text)
{
    const auto fail = [&] { throw ParseError("'" + text + "' is not an ISO-8601 date"); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        fail();
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            fail();
    }
    Date d;
    d.year = std::stoi(text.substr(0, 4));
    d.month = std::stoi(text.substr(5, 2));
    d.day = std::stoi(text.substr(8, 2));
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month))
        fail();
    return d;
}

std::string Date::iso() const
{
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

std::string format_value(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

Dataset load_csv(const std::filesystem::path& path, const std::string& column)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line))
        throw ParseError("'" + path.string() + "' is empty");
    const std::vector<std::string> header = split_row(line);

    std::size_t date_col = header.size(), value_col = header.size();
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "date")
            date_col = c;
        if (header[c] == column)
            value_col = c;
    }
    if (date_col == header.size())
        throw ParseError("'" + path.string() + "' has no 'date' column");
    if (value_col == header.size())
        throw ParseError("'" + path.string() + "' has no '" + column + "' column");

    Dataset ds;
    ds.name = path.stem().string();
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty())
            continue;
        const std::vector<std::string> fields = split_row(line);
        if (fields.size() != header.size())
            throw ParseError("row " + std::to_string(row) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        PriceRecord rec;
        try {
            rec.date = Date::parse(fields[date_col]);
        } catch (const ParseError& e) {
            throw ParseError("row " + std::to_string(row) + ": " + e.what());
        }
        rec.value = parse_number(fields[value_col], row, column);
        if (!(rec.value > 0.0))
            throw NonPositivePrice("row " + std::to_string(row) + ": non-positive value " +
                                   fields[value_col]);
        if (!ds.records.empty() && !(ds.records.back().date < rec.date))
            throw NonMonotonicDates("row " + std::to_string(row) + ": date " + rec.date.iso() +
                                    " does not increase");
        ds.records.push_back(rec);
    }
    return ds;
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out << "date," << (dataset.name.empty() ? "value" : dataset.name) << "\n";
    for (const auto& rec : dataset.records)
        out << rec.date.iso() << "," << format_value(rec.value) << "\n";
}

AlignedTable align(const std::vector<Dataset>& datasets)
{
    if (datasets.size() < 2)
        throw Error("align: need at least two datasets");

    std::vector<Date> common;
    common.reserve(datasets[0].records.size());
    for (const auto& rec : datasets[0].records)
        common.push_back(rec.date);
    for (std::size_t k = 1; k < datasets.size(); ++k) {
        std::vector<Date> dates;
        dates.reserve(datasets[k].records.size());
        for (const auto& rec : datasets[k].records)
            dates.push_back(rec.date);
        std::vector<Date> next;
        std::set_intersection(common.begin(), common.end(), dates.begin(), dates.end(),
                              std::back_inserter(next));
        common = std::move(next);
    }
    if (common.empty())
        throw EmptyIntersection("align: no common dates");

    AlignedTable table;
    table.dates = common;
    for (const auto& ds : datasets) {
        table.names.push_back(ds.name);
        std::vector<double> col;
        col.reserve(common.size());
        auto it = ds.records.begin();
        for (const Date& d : common) {
            while (it != ds.records.end() && it->date < d)
                ++it;
            col.push_back(it->value); // d is present in every dataset
            ++it;
        }
        table.dropped.push_back(ds.records.size() - col.size());
        table.columns.push_back(std::move(col));
    }
    return table;
}

} // namespace wronbeta
