#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "tscast/errors.hpp"
#include "tscast/series.hpp"

namespace tscast {

/// Min-max rescaler: x -> (x - x_min) / x_range. Fit on the training split
/// only; later splits may legitimately map outside [0, 1].
struct MinMaxScaler {
    double x_min = 0.0;
    double x_range = 1.0;

    [[nodiscard]] double scale(double x) const { return (x - x_min) / x_range; }
    [[nodiscard]] double unscale(double y) const { return y * x_range + x_min; }

    [[nodiscard]] std::vector<double> scale(const std::vector<double>& xs) const {
        std::vector<double> out(xs.size());
        std::transform(xs.begin(), xs.end(), out.begin(), [&](double x) { return scale(x); });
        return out;
    }

    [[nodiscard]] std::vector<double> unscale(const std::vector<double>& ys) const {
        std::vector<double> out(ys.size());
        std::transform(ys.begin(), ys.end(), out.begin(), [&](double y) { return unscale(y); });
        return out;
    }
};

inline std::pair<UnivariateSeries, MinMaxScaler> fit_rescale(const UnivariateSeries& series) {
    if (series.size() < 2) throw TooShortError("rescaling needs at least 2 values");
    const auto [lo, hi] = std::minmax_element(series.values.begin(), series.values.end());
    if (*lo == *hi) throw ZeroRangeError("constant series cannot be rescaled");
    MinMaxScaler scaler{*lo, *hi - *lo};
    UnivariateSeries scaled;
    scaled.dates = series.dates;
    scaled.values = scaler.scale(series.values);
    return {std::move(scaled), scaler};
}

inline std::vector<double> inverse_rescale(const std::vector<double>& scaled, const MinMaxScaler& scaler) {
    return scaler.unscale(scaled);
}

}  // namespace tscast
