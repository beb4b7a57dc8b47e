#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tscast/difference.hpp"
#include "tscast/errors.hpp"
#include "tscast/nelder_mead.hpp"
#include "tscast/series.hpp"

namespace tscast {

struct SarimaOrder {
    std::size_t p = 0, d = 0, q = 0;
    std::size_t P = 0, D = 0, Q = 0;
    std::size_t m = 1;

    [[nodiscard]] DifferenceSpec diff_spec() const { return {d, D, m}; }
    [[nodiscard]] std::size_t n_coeffs() const { return p + q + P + Q; }
    // Parameter count for AIC/BIC; the innovation variance counts as one.
    [[nodiscard]] std::size_t k() const { return n_coeffs() + 1; }
    [[nodiscard]] bool seasonal() const { return P + D + Q > 0; }

    [[nodiscard]] bool valid(std::size_t complexity_cap = 10) const {
        if (seasonal() && m < 2) return false;
        return n_coeffs() <= complexity_cap;
    }

    [[nodiscard]] std::string label() const {
        return "SARIMA(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q) +
               ")(" + std::to_string(P) + "," + std::to_string(D) + "," + std::to_string(Q) + "){" +
               std::to_string(m) + "}";
    }

    auto operator<=>(const SarimaOrder&) const = default;
};

enum class AicConvention { standard, normalized };

/// Eq-style information criteria. `standard` is -2*LL + 2k; `normalized`
/// divides both terms by N.
inline double aic(double loglik, std::size_t n, std::size_t k,
                  AicConvention convention = AicConvention::standard) {
    if (n == 0) throw Error("aic requires n > 0");
    if (convention == AicConvention::normalized)
        return (-2.0 * loglik + 2.0 * static_cast<double>(k)) / static_cast<double>(n);
    return -2.0 * loglik + 2.0 * static_cast<double>(k);
}

inline double bic(double loglik, std::size_t n, std::size_t k) {
    if (n < 2) throw Error("bic requires n > 1");
    return -2.0 * loglik + std::log(static_cast<double>(n)) * static_cast<double>(k);
}

struct SarimaModel {
    SarimaOrder order;
    std::vector<double> ar;   // phi
    std::vector<double> ma;   // theta
    std::vector<double> sar;  // Phi
    std::vector<double> sma;  // Theta
    double mean = 0.0;        // intercept on the differenced scale; 0 when d + D > 0
    double sigma2 = 0.0;
    double loglik = 0.0;
    std::size_t n_obs = 0;  // effective observations (differenced length)
    std::vector<double> values;  // training series at level scale
    std::vector<double> head;    // first d + D*m level values, kept for integrate()

    [[nodiscard]] double aic_value(AicConvention c = AicConvention::standard) const {
        return aic(loglik, n_obs, order.k(), c);
    }
    [[nodiscard]] double bic_value() const { return bic(loglik, n_obs, order.k()); }
};

struct ForecastResult {
    std::vector<double> mean;
    std::vector<double> lower95;
    std::vector<double> upper95;
};

namespace detail {

// Coefficients of (1 - sum phi_i B^i)(1 - sum sphi_j B^{jm}), index = lag.
inline std::vector<double> expand_ar_poly(const std::vector<double>& phi,
                                          const std::vector<double>& sphi, std::size_t m) {
    std::vector<double> a(phi.size() + sphi.size() * m + 1, 0.0);
    a[0] = 1.0;
    for (std::size_t i = 0; i < phi.size(); ++i) a[i + 1] = -phi[i];
    if (!sphi.empty()) {
        std::vector<double> b(a.size(), 0.0);
        for (std::size_t j = 0; j <= sphi.size(); ++j) {
            const double c = (j == 0) ? 1.0 : -sphi[j - 1];
            for (std::size_t i = 0; i <= phi.size(); ++i) {
                const double base = (i == 0) ? 1.0 : -phi[i - 1];
                b[i + j * m] += c * base;
            }
        }
        a = std::move(b);
    }
    return a;
}

// Coefficients of (1 + sum theta_i B^i)(1 + sum stheta_j B^{jm}).
inline std::vector<double> expand_ma_poly(const std::vector<double>& theta,
                                          const std::vector<double>& stheta, std::size_t m) {
    std::vector<double> neg_t(theta.size()), neg_s(stheta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) neg_t[i] = -theta[i];
    for (std::size_t j = 0; j < stheta.size(); ++j) neg_s[j] = -stheta[j];
    return expand_ar_poly(neg_t, neg_s, m);
}

/// Schur-Cohn step-down test: all roots of 1 - sum a_i z^i outside the unit
/// circle iff every reflection coefficient has |k| < 1.
inline bool roots_outside_unit_circle(std::vector<double> a, double margin) {
    while (!a.empty() && a.back() == 0.0) a.pop_back();
    while (!a.empty()) {
        const double k = a.back();
        if (std::abs(k) > 1.0 - margin) return false;
        const std::size_t p = a.size() - 1;
        std::vector<double> next(p);
        const double denom = 1.0 - k * k;
        for (std::size_t i = 0; i < p; ++i) next[i] = (a[i] + k * a[p - 1 - i]) / denom;
        a = std::move(next);
    }
    return true;
}

inline bool ma_invertible(const std::vector<double>& theta, double margin) {
    std::vector<double> neg(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) neg[i] = -theta[i];
    return roots_outside_unit_circle(neg, margin);
}

struct PackedCoeffs {
    std::vector<double> ar, ma, sar, sma;
};

inline PackedCoeffs unpack_coeffs(const SarimaOrder& order, const std::vector<double>& coeffs) {
    if (coeffs.size() != order.n_coeffs())
        throw ShapeError("expected " + std::to_string(order.n_coeffs()) + " coefficients");
    PackedCoeffs c;
    auto it = coeffs.begin();
    c.ar.assign(it, it + static_cast<std::ptrdiff_t>(order.p));
    it += static_cast<std::ptrdiff_t>(order.p);
    c.ma.assign(it, it + static_cast<std::ptrdiff_t>(order.q));
    it += static_cast<std::ptrdiff_t>(order.q);
    c.sar.assign(it, it + static_cast<std::ptrdiff_t>(order.P));
    it += static_cast<std::ptrdiff_t>(order.P);
    c.sma.assign(it, it + static_cast<std::ptrdiff_t>(order.Q));
    return c;
}

inline constexpr double kRootMargin = 1e-3;
inline constexpr double kPenalty = 1e12;

inline bool coeffs_admissible(const PackedCoeffs& c) {
    return roots_outside_unit_circle(c.ar, kRootMargin) &&
           roots_outside_unit_circle(c.sar, kRootMargin) &&
           ma_invertible(c.ma, kRootMargin) && ma_invertible(c.sma, kRootMargin);
}

/// One-step residuals e_t = sum_k a_k z_{t-k} - sum_{k>=1} b_k e_{t-k},
/// pre-sample z and e zeroed.
inline std::vector<double> css_residuals(const std::vector<double>& z,
                                         const std::vector<double>& ar_poly,
                                         const std::vector<double>& ma_poly) {
    std::vector<double> e(z.size());
    for (std::size_t t = 0; t < z.size(); ++t) {
        double v = z[t];
        for (std::size_t k = 1; k < ar_poly.size() && k <= t; ++k) v += ar_poly[k] * z[t - k];
        for (std::size_t k = 1; k < ma_poly.size() && k <= t; ++k) v -= ma_poly[k] * e[t - k];
        e[t] = v;
    }
    return e;
}

inline double sample_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace detail

struct CssResult {
    double sse = 0.0;
    std::vector<double> residuals;
};

/// Conditional sum of squares of one-step residuals. `diffed` is the series
/// after the order's differencing; coeffs are packed [phi, theta, Phi, Theta].
/// When include_mean is set the sample mean is removed first (the intercept
/// is concentrated out). Inadmissible coefficients get a large finite sse.
inline CssResult css_objective(const SarimaOrder& order, const std::vector<double>& coeffs,
                               const std::vector<double>& diffed,
                               bool include_mean = true) {
    const auto c = detail::unpack_coeffs(order, coeffs);
    if (!detail::coeffs_admissible(c)) return {detail::kPenalty, {}};

    std::vector<double> z = diffed;
    if (include_mean) {
        const double mu = detail::sample_mean(diffed);
        for (double& v : z) v -= mu;
    }
    const auto ar_poly = detail::expand_ar_poly(c.ar, c.sar, order.m);
    const auto ma_poly = detail::expand_ma_poly(c.ma, c.sma, order.m);
    CssResult r;
    r.residuals = detail::css_residuals(z, ar_poly, ma_poly);
    for (double e : r.residuals) r.sse += e * e;
    if (!std::isfinite(r.sse)) return {detail::kPenalty, {}};
    return r;
}

/// Fits a SARIMA model by simplex descent on the CSS objective from the
/// deterministic start [0.1, -0.1, 0.1, ...]. The intercept is included only
/// for undifferenced models (d + D = 0).
inline SarimaModel fit(const UnivariateSeries& series, const SarimaOrder& order) {
    if (!order.valid()) throw Error("invalid order " + order.label());
    const auto spec = order.diff_spec();
    const std::size_t max_lag =
        std::max({order.p, order.q, order.P * order.m, order.Q * order.m});
    if (series.size() <= spec.lost() + max_lag + 10)
        throw TooShortError("series of length " + std::to_string(series.size()) +
                            " too short to fit " + order.label());

    const auto diffed = difference(series.values, spec);
    const bool include_mean = (order.d + order.D == 0);

    std::vector<double> start(order.n_coeffs());
    for (std::size_t i = 0; i < start.size(); ++i) start[i] = (i % 2 == 0) ? 0.1 : -0.1;

    auto objective = [&](const std::vector<double>& coeffs) {
        return css_objective(order, coeffs, diffed, include_mean).sse;
    };

    NelderMeadOptions opts;
    opts.max_iterations = 500 * order.k();
    opts.relative_tolerance = 1e-8;
    const auto nm = nelder_mead(objective, start, opts);
    if (nm.fx >= detail::kPenalty)
        throw ConvergenceError("optimizer stuck in the inadmissible region for " + order.label());
    if (!nm.converged)
        throw ConvergenceError("simplex did not converge for " + order.label() +
                               " (best sse " + std::to_string(nm.fx) + ")");

    const auto css = css_objective(order, nm.x, diffed, include_mean);
    const auto c = detail::unpack_coeffs(order, nm.x);
    const auto n_eff = diffed.size();

    SarimaModel model;
    model.order = order;
    model.ar = c.ar;
    model.ma = c.ma;
    model.sar = c.sar;
    model.sma = c.sma;
    model.mean = include_mean ? detail::sample_mean(diffed) : 0.0;
    model.sigma2 = css.sse / static_cast<double>(n_eff);
    if (!(model.sigma2 > 0.0)) model.sigma2 = 1e-300;
    model.loglik = -0.5 * static_cast<double>(n_eff) *
                   (std::log(2.0 * M_PI * model.sigma2) + 1.0);
    model.n_obs = n_eff;
    model.values = series.values;
    model.head.assign(series.values.begin(),
                      series.values.begin() + static_cast<std::ptrdiff_t>(spec.lost()));
    return model;
}

/// Recursive mean forecasts on the differenced scale, integrated back to
/// levels; variance from the psi-weights of the integrated process.
inline ForecastResult forecast(const SarimaModel& model, std::size_t horizon) {
    if (horizon < 1) throw Error("forecast horizon must be >= 1");
    const auto& order = model.order;
    const auto spec = order.diff_spec();
    const auto diffed = difference(model.values, spec);

    std::vector<double> z(diffed.size() + horizon);
    for (std::size_t t = 0; t < diffed.size(); ++t) z[t] = diffed[t] - model.mean;

    const auto ar_poly = detail::expand_ar_poly(model.ar, model.sar, order.m);
    const auto ma_poly = detail::expand_ma_poly(model.ma, model.sma, order.m);

    std::vector<double> e(z.size(), 0.0);
    for (std::size_t t = 0; t < diffed.size(); ++t) {
        double v = z[t];
        for (std::size_t k = 1; k < ar_poly.size() && k <= t; ++k) v += ar_poly[k] * z[t - k];
        for (std::size_t k = 1; k < ma_poly.size() && k <= t; ++k) v -= ma_poly[k] * e[t - k];
        e[t] = v;
    }
    for (std::size_t t = diffed.size(); t < z.size(); ++t) {
        double v = 0.0;
        for (std::size_t k = 1; k < ar_poly.size() && k <= t; ++k) v -= ar_poly[k] * z[t - k];
        for (std::size_t k = 1; k < ma_poly.size() && k <= t; ++k) v += ma_poly[k] * e[t - k];
        z[t] = v;  // e[t] = 0 for future innovations
    }

    std::vector<double> diffed_path(diffed);
    diffed_path.reserve(diffed.size() + horizon);
    for (std::size_t i = 0; i < horizon; ++i)
        diffed_path.push_back(z[diffed.size() + i] + model.mean);
    const auto levels = integrate(diffed_path, spec, model.head);

    // Psi-weights of the ARMA part, then divided by the differencing operator
    // to get the integrated process' moving-average weights.
    std::vector<double> psi(horizon, 0.0);
    psi[0] = 1.0;
    for (std::size_t j = 1; j < horizon; ++j) {
        double v = (j < ma_poly.size()) ? ma_poly[j] : 0.0;
        for (std::size_t i = 1; i < ar_poly.size() && i <= j; ++i) v -= ar_poly[i] * psi[j - i];
        psi[j] = v;
    }
    // Expansion of (1-B)^d (1-B^m)^D.
    std::vector<double> s_poly{1.0};
    auto convolve_diff = [&](std::size_t lag) {
        std::vector<double> next(s_poly.size() + lag, 0.0);
        for (std::size_t i = 0; i < s_poly.size(); ++i) {
            next[i] += s_poly[i];
            next[i + lag] -= s_poly[i];
        }
        s_poly = std::move(next);
    };
    for (std::size_t i = 0; i < spec.D; ++i) convolve_diff(spec.m);
    for (std::size_t i = 0; i < spec.d; ++i) convolve_diff(1);
    std::vector<double> big_psi(horizon, 0.0);
    for (std::size_t j = 0; j < horizon; ++j) {
        double v = psi[j];
        for (std::size_t k = 1; k < s_poly.size() && k <= j; ++k) v -= s_poly[k] * big_psi[j - k];
        big_psi[j] = v;
    }

    ForecastResult out;
    out.mean.assign(levels.end() - static_cast<std::ptrdiff_t>(horizon), levels.end());
    double var_acc = 0.0;
    for (std::size_t i = 0; i < horizon; ++i) {
        var_acc += big_psi[i] * big_psi[i];
        const double half_width = 1.959963984540054 * std::sqrt(model.sigma2 * var_acc);
        out.lower95.push_back(out.mean[i] - half_width);
        out.upper95.push_back(out.mean[i] + half_width);
    }
    return out;
}

}  // namespace tscast
