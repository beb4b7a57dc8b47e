#pragma once

#include <cmath>
#include <cstddef>

#include "tscast/errors.hpp"
#include "tscast/series.hpp"

namespace tscast {

/// Defaults encode "last 10% is test, remainder split 8:2 train:validation".
struct SplitRatios {
    double train = 0.72;
    double validation = 0.18;
    double test = 0.10;

    [[nodiscard]] bool valid() const {
        return train > 0.0 && validation > 0.0 && test > 0.0 &&
               std::abs(train + validation + test - 1.0) < 1e-9;
    }
};

struct DataSplit {
    UnivariateSeries train;
    UnivariateSeries validation;
    UnivariateSeries test;
};

namespace detail {

inline UnivariateSeries subrange(const UnivariateSeries& s, std::size_t begin, std::size_t end) {
    UnivariateSeries out;
    out.dates.assign(s.dates.begin() + static_cast<std::ptrdiff_t>(begin),
                     s.dates.begin() + static_cast<std::ptrdiff_t>(end));
    out.values.assign(s.values.begin() + static_cast<std::ptrdiff_t>(begin),
                      s.values.begin() + static_cast<std::ptrdiff_t>(end));
    return out;
}

}  // namespace detail

/// Chronological split. The test block is the last floor(test_ratio*N) points;
/// the remainder goes train-first with train = floor(train/(train+validation) * M).
inline DataSplit split(const UnivariateSeries& series, SplitRatios ratios = {}) {
    if (!ratios.valid()) throw Error("split ratios must be positive and sum to 1");
    const std::size_t n = series.size();
    if (n < 10) throw TooShortError("need at least 10 points to split, got " + std::to_string(n));

    const auto n_test = static_cast<std::size_t>(std::floor(ratios.test * static_cast<double>(n)));
    const std::size_t m = n - n_test;
    const double train_frac = ratios.train / (ratios.train + ratios.validation);
    const auto n_train = static_cast<std::size_t>(std::floor(train_frac * static_cast<double>(m)));

    DataSplit out;
    out.train = detail::subrange(series, 0, n_train);
    out.validation = detail::subrange(series, n_train, m);
    out.test = detail::subrange(series, m, n);
    return out;
}

}  // namespace tscast
