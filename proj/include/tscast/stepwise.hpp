#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "tscast/difference.hpp"
#include "tscast/errors.hpp"
#include "tscast/sarima.hpp"
#include "tscast/series.hpp"

namespace tscast {

enum class Criterion { aic, bic };

struct TraceRow {
    SarimaOrder order;
    double aic = 0.0;
    double bic = 0.0;
};

namespace detail {

inline double sample_variance(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double mu = sample_mean(v);
    double s = 0.0;
    for (double x : v) s += (x - mu) * (x - mu);
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace detail

/// Picks (d, D) by a variance-ratio rule: apply a differencing step while it
/// cuts the sample variance by more than half (seasonal step first, then
/// regular), capped at D <= 1 and d <= 2. The strict "difference while
/// variance decreases at all" rule over-differences stationary AR series with
/// strong positive autocorrelation, so the threshold is 0.5.
inline std::pair<std::size_t, std::size_t> choose_differencing(const std::vector<double>& values,
                                                               std::size_t m) {
    constexpr double kRatio = 0.5;
    std::size_t D = 0;
    std::vector<double> cur = values;
    if (m >= 2 && cur.size() > 3 * m) {
        const auto seasonal = detail::diff_once(cur, m);
        if (detail::sample_variance(seasonal) < kRatio * detail::sample_variance(cur)) {
            D = 1;
            cur = seasonal;
        }
    }
    std::size_t d = 0;
    while (d < 2 && cur.size() > 10) {
        const auto next = detail::diff_once(cur, 1);
        if (detail::sample_variance(next) < kRatio * detail::sample_variance(cur)) {
            ++d;
            cur = next;
        } else {
            break;
        }
    }
    return {d, D};
}

struct StepwiseResult {
    SarimaModel best;
    std::vector<TraceRow> trace;
};

/// Hill-climbing order search: d and D fixed by choose_differencing, then
/// neighbors of (p, q, P, Q) explored one step at a time from the best of a
/// small starter set, ranked by the chosen criterion.
inline StepwiseResult stepwise_select(const UnivariateSeries& series, std::size_t m,
                                      Criterion criterion = Criterion::aic) {
    const auto [d, D] = choose_differencing(series.values, m);
    const bool allow_seasonal = m >= 2;

    struct Candidate {
        SarimaModel model;
        double aic = 0.0;
        double bic = 0.0;
        double score = std::numeric_limits<double>::infinity();
    };
    std::map<SarimaOrder, std::optional<Candidate>> evaluated;

    auto evaluate = [&](SarimaOrder order) -> const std::optional<Candidate>& {
        auto [it, inserted] = evaluated.try_emplace(order);
        if (!inserted) return it->second;
        try {
            Candidate c;
            c.model = fit(series, order);
            c.aic = c.model.aic_value();
            c.bic = c.model.bic_value();
            c.score = (criterion == Criterion::aic) ? c.aic : c.bic;
            if (std::isfinite(c.score)) it->second = std::move(c);
        } catch (const Error&) {
            // failed candidates stay unevaluated in the trace
        }
        return it->second;
    };

    auto make_order = [&](std::size_t p, std::size_t q, std::size_t P, std::size_t Q) {
        SarimaOrder o{p, d, q, allow_seasonal ? P : 0, allow_seasonal ? D : 0,
                      allow_seasonal ? Q : 0, m};
        return o;
    };

    const SarimaOrder starters[] = {
        make_order(2, 2, 1, 1),
        make_order(0, 0, 0, 0),
        make_order(1, 0, 1, 0),
        make_order(0, 1, 0, 1),
    };

    SarimaOrder current{};
    double current_score = std::numeric_limits<double>::infinity();
    for (const auto& o : starters) {
        if (!o.valid()) continue;
        const auto& c = evaluate(o);
        if (c && c->score < current_score) {
            current = o;
            current_score = c->score;
        }
    }
    if (!std::isfinite(current_score)) throw SelectionError("every candidate fit failed");

    constexpr std::size_t kMaxNonSeasonal = 5;
    constexpr std::size_t kMaxSeasonal = 2;
    bool improved = true;
    while (improved) {
        improved = false;
        std::vector<SarimaOrder> neighbors;
        auto push = [&](long p, long q, long P, long Q) {
            if (p < 0 || q < 0 || P < 0 || Q < 0) return;
            if (p > static_cast<long>(kMaxNonSeasonal) || q > static_cast<long>(kMaxNonSeasonal))
                return;
            if (P > static_cast<long>(kMaxSeasonal) || Q > static_cast<long>(kMaxSeasonal)) return;
            auto o = make_order(static_cast<std::size_t>(p), static_cast<std::size_t>(q),
                                static_cast<std::size_t>(P), static_cast<std::size_t>(Q));
            if (o.valid()) neighbors.push_back(o);
        };
        const long p = static_cast<long>(current.p), q = static_cast<long>(current.q);
        const long P = static_cast<long>(current.P), Q = static_cast<long>(current.Q);
        push(p - 1, q, P, Q);
        push(p + 1, q, P, Q);
        push(p, q - 1, P, Q);
        push(p, q + 1, P, Q);
        if (allow_seasonal) {
            push(p, q, P - 1, Q);
            push(p, q, P + 1, Q);
            push(p, q, P, Q - 1);
            push(p, q, P, Q + 1);
        }
        SarimaOrder best_neighbor = current;
        double best_score = current_score;
        for (const auto& o : neighbors) {
            const auto& c = evaluate(o);
            if (c && c->score < best_score) {
                best_neighbor = o;
                best_score = c->score;
            }
        }
        if (best_score < current_score) {
            current = best_neighbor;
            current_score = best_score;
            improved = true;
        }
    }

    StepwiseResult result;
    result.best = evaluated.at(current)->model;
    for (const auto& [order, cand] : evaluated) {
        if (cand) result.trace.push_back({order, cand->aic, cand->bic});
    }
    // std::map keys are already in canonical (order-tuple) order.
    return result;
}

/// Argmin of a criterion over externally supplied trace rows (ties broken by
/// the canonical order tuple).
inline TraceRow best_by(const std::vector<TraceRow>& rows, Criterion criterion) {
    if (rows.empty()) throw SelectionError("empty trace");
    return *std::min_element(rows.begin(), rows.end(), [&](const TraceRow& a, const TraceRow& b) {
        const double ka = (criterion == Criterion::aic) ? a.aic : a.bic;
        const double kb = (criterion == Criterion::aic) ? b.aic : b.bic;
        if (ka != kb) return ka < kb;
        return a.order < b.order;
    });
}

}  // namespace tscast
