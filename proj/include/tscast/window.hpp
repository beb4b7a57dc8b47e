#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tscast/errors.hpp"

namespace tscast {

/// Supervised lookback windows: inputs[k] = source[k .. k+z), targets[k] = source[k+z].
struct WindowSet {
    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;
    std::size_t lookback = 0;

    [[nodiscard]] std::size_t size() const { return targets.size(); }
};

inline WindowSet make_windows(const std::vector<double>& values, std::size_t lookback) {
    if (lookback < 1) throw Error("lookback must be >= 1");
    if (values.size() <= lookback)
        throw TooShortError("series of length " + std::to_string(values.size()) +
                            " yields no windows at lookback " + std::to_string(lookback));
    WindowSet ws;
    ws.lookback = lookback;
    const std::size_t n = values.size() - lookback;
    ws.inputs.reserve(n);
    ws.targets.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        ws.inputs.emplace_back(values.begin() + static_cast<std::ptrdiff_t>(k),
                               values.begin() + static_cast<std::ptrdiff_t>(k + lookback));
        ws.targets.push_back(values[k + lookback]);
    }
    return ws;
}

}  // namespace tscast
