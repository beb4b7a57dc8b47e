#pragma once

#include <algorithm>
#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "tscast/errors.hpp"
#include "tscast/series.hpp"

namespace tscast {

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

inline double parse_double_field(std::string_view field, std::size_t line_no, const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw RowError(line_no, std::string("unparseable ") + what + " field '" + std::string(field) + "'");
    return v;
}

inline std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

}  // namespace detail

inline constexpr std::string_view kOhlcvHeader = "Date,Open,High,Low,Close,Adj Close,Volume";

/// Parses Yahoo-style OHLCV CSV. Rows are sorted ascending by date;
/// duplicate dates are rejected.
inline OhlcvSeries parse_ohlcv_csv(std::string_view content, std::string symbol) {
    OhlcvSeries series;
    series.symbol = std::move(symbol);

    std::size_t pos = 0;
    std::size_t line_no = 0;
    auto next_line = [&](std::string_view& line) {
        if (pos >= content.size()) return false;
        const std::size_t nl = content.find('\n', pos);
        if (nl == std::string_view::npos) {
            line = content.substr(pos);
            pos = content.size();
        } else {
            line = content.substr(pos, nl - pos);
            pos = nl + 1;
        }
        line = detail::strip_cr(line);
        ++line_no;
        return true;
    };

    std::string_view line;
    if (!next_line(line) || line != kOhlcvHeader)
        throw FormatError("expected header '" + std::string(kOhlcvHeader) + "'");

    while (next_line(line)) {
        if (line.empty()) continue;
        const auto fields = detail::split_fields(line);
        if (fields.size() != 7) throw RowError(line_no, "expected 7 fields, got " + std::to_string(fields.size()));
        OhlcvRow row;
        try {
            row.date = parse_date(fields[0]);
        } catch (const FormatError& e) {
            throw RowError(line_no, e.what());
        }
        row.open = detail::parse_double_field(fields[1], line_no, "Open");
        row.high = detail::parse_double_field(fields[2], line_no, "High");
        row.low = detail::parse_double_field(fields[3], line_no, "Low");
        row.close = detail::parse_double_field(fields[4], line_no, "Close");
        row.adj_close = detail::parse_double_field(fields[5], line_no, "Adj Close");
        row.volume = detail::parse_double_field(fields[6], line_no, "Volume");
        if (row.volume < 0.0) throw RowError(line_no, "negative volume");
        series.rows.push_back(row);
    }

    std::stable_sort(series.rows.begin(), series.rows.end(),
                     [](const OhlcvRow& a, const OhlcvRow& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < series.rows.size(); ++i) {
        if (series.rows[i].date == series.rows[i - 1].date)
            throw DuplicateDateError("duplicate date " + series.rows[i].date.to_string());
    }
    return series;
}

/// Two-column `date,value` CSV used for cleaned series files.
inline UnivariateSeries parse_series_csv(std::string_view content) {
    UnivariateSeries series;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < content.size()) {
        const std::size_t nl = content.find('\n', pos);
        std::string_view line = (nl == std::string_view::npos) ? content.substr(pos)
                                                               : content.substr(pos, nl - pos);
        pos = (nl == std::string_view::npos) ? content.size() : nl + 1;
        line = detail::strip_cr(line);
        ++line_no;
        if (line_no == 1) {
            if (line != "date,value") throw FormatError("expected header 'date,value'");
            continue;
        }
        if (line.empty()) continue;
        const auto fields = detail::split_fields(line);
        if (fields.size() != 2) throw RowError(line_no, "expected 2 fields");
        series.dates.push_back(parse_date(fields[0]));
        series.values.push_back(detail::parse_double_field(fields[1], line_no, "value"));
    }
    return series;
}

}  // namespace tscast
