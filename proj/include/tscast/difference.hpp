#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tscast/errors.hpp"

namespace tscast {

/// (1-B)^d (1-B^m)^D differencing. The seasonal operator is applied first,
/// then the regular one; integrate() relies on that fixed order.
struct DifferenceSpec {
    std::size_t d = 0;
    std::size_t D = 0;
    std::size_t m = 1;

    [[nodiscard]] std::size_t lost() const { return d + D * m; }
};

namespace detail {

inline std::vector<double> diff_once(const std::vector<double>& v, std::size_t lag) {
    std::vector<double> out(v.size() - lag);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = v[i + lag] - v[i];
    return out;
}

inline std::vector<double> diff_times(std::vector<double> v, std::size_t lag, std::size_t times) {
    for (std::size_t k = 0; k < times; ++k) v = diff_once(v, lag);
    return v;
}

inline std::vector<double> integrate_once(const std::vector<double>& y, const std::vector<double>& head) {
    const std::size_t lag = head.size();
    std::vector<double> x(head.size() + y.size());
    for (std::size_t i = 0; i < lag; ++i) x[i] = head[i];
    for (std::size_t i = lag; i < x.size(); ++i) x[i] = y[i - lag] + x[i - lag];
    return x;
}

}  // namespace detail

inline std::vector<double> difference(const std::vector<double>& values, DifferenceSpec spec) {
    if (values.size() <= spec.lost())
        throw TooShortError("series of length " + std::to_string(values.size()) +
                            " too short for differencing losing " + std::to_string(spec.lost()));
    auto v = detail::diff_times(values, spec.m, spec.D);
    return detail::diff_times(std::move(v), 1, spec.d);
}

/// Exact inverse of difference(). `head` is the first d + D*m values of the
/// original series; intermediate stage heads are re-derived from it.
inline std::vector<double> integrate(const std::vector<double>& diffed, DifferenceSpec spec,
                                     const std::vector<double>& head) {
    if (head.size() != spec.lost())
        throw HeadLengthError("expected head of length " + std::to_string(spec.lost()) +
                              ", got " + std::to_string(head.size()));

    // First d values of the seasonally differenced series.
    const auto seasonal_head = detail::diff_times(head, spec.m, spec.D);

    auto cur = diffed;
    for (std::size_t j = spec.d; j-- > 0;) {
        const auto stage = detail::diff_times(seasonal_head, 1, j);
        cur = detail::integrate_once(cur, {stage.front()});
    }
    for (std::size_t j = spec.D; j-- > 0;) {
        auto stage = detail::diff_times(head, spec.m, j);
        stage.resize(spec.m);
        cur = detail::integrate_once(cur, stage);
    }
    return cur;
}

}  // namespace tscast
