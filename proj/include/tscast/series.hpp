#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tscast/date.hpp"
#include "tscast/errors.hpp"

namespace tscast {

struct OhlcvRow {
    Date date;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double adj_close = 0.0;
    double volume = 0.0;
};

/// Daily bars for one symbol, dates strictly increasing.
struct OhlcvSeries {
    std::string symbol;
    std::vector<OhlcvRow> rows;
};

/// Dated real-valued series; dates strictly increasing, values finite after clean().
struct UnivariateSeries {
    std::vector<Date> dates;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const { return values.size(); }
    [[nodiscard]] bool empty() const { return values.empty(); }
};

inline UnivariateSeries extract_open(const OhlcvSeries& series) {
    if (series.rows.empty()) throw EmptySeriesError("cannot extract open price from empty series");
    UnivariateSeries out;
    out.dates.reserve(series.rows.size());
    out.values.reserve(series.rows.size());
    for (const auto& row : series.rows) {
        out.dates.push_back(row.date);
        out.values.push_back(row.open);
    }
    return out;
}

/// Drops rows whose value is non-finite or non-positive. Idempotent.
inline UnivariateSeries clean(const UnivariateSeries& series) {
    UnivariateSeries out;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double v = series.values[i];
        if (std::isfinite(v) && v > 0.0) {
            out.dates.push_back(series.dates[i]);
            out.values.push_back(v);
        }
    }
    if (out.empty()) throw EmptySeriesError("all rows dropped by clean()");
    return out;
}

/// Keep only rows with first ≤ date ≤ last.
inline UnivariateSeries slice_by_date(const UnivariateSeries& series, Date first, Date last) {
    UnivariateSeries out;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series.dates[i] >= first && series.dates[i] <= last) {
            out.dates.push_back(series.dates[i]);
            out.values.push_back(series.values[i]);
        }
    }
    return out;
}

}  // namespace tscast
