#include <doctest.h>

#include <cmath>
#include <vector>

#include <json.hpp>

#include "support/sim.hpp"
#include "tscast/json_io.hpp"
#include "tscast/sarima.hpp"
#include "tscast/stepwise.hpp"

using namespace tscast;

TEST_CASE("aic and bic closed forms") {
    CHECK(aic(0.0, 100, 0) == 0.0);
    CHECK(aic(0.0, 100, 0, AicConvention::normalized) == 0.0);
    CHECK(aic(-50.0, 100, 2, AicConvention::normalized) == doctest::Approx(1.04).epsilon(1e-12));
    CHECK(aic(-50.0, 100, 2) == doctest::Approx(104.0).epsilon(1e-12));
    CHECK(bic(0.0, 100, 0) == 0.0);
    CHECK(bic(-50.0, 100, 2) == doctest::Approx(100.0 + 2.0 * std::log(100.0)).epsilon(1e-12));
    // ln(N) >= 2 for N >= 8, so bic >= standard aic at equal fit
    for (std::size_t n : {8u, 50u, 5000u})
        CHECK(bic(-10.0, n, 3) >= aic(-10.0, n, 3));
}

TEST_CASE("css_objective with no coefficients demeans the series") {
    const SarimaOrder order{0, 0, 0, 0, 0, 0, 1};
    const std::vector<double> x{1.0, 2.0, 6.0};
    const auto r = css_objective(order, {}, x);
    const double mean = 3.0;
    double expect = 0.0;
    for (double v : x) expect += (v - mean) * (v - mean);
    CHECK(r.sse == doctest::Approx(expect).epsilon(1e-14));
    CHECK(r.residuals[0] == doctest::Approx(1.0 - mean));
}

TEST_CASE("css_objective AR(1) with phi=0 returns the demeaned series") {
    const SarimaOrder order{1, 0, 0, 0, 0, 0, 1};
    const auto x = sim::white_noise(50, 5);
    const auto r = css_objective(order, {0.0}, x);
    const double mu = sim::mean_of(x);
    for (std::size_t t = 0; t < x.size(); ++t)
        CHECK(r.residuals[t] == doctest::Approx(x[t] - mu).epsilon(1e-12));
}

TEST_CASE("css_objective AR(1) hand recursion, mean disabled") {
    const SarimaOrder order{1, 0, 0, 0, 0, 0, 1};
    const auto r = css_objective(order, {0.5}, {1.0, 2.0, 3.0}, /*include_mean=*/false);
    REQUIRE(r.residuals.size() == 3);
    CHECK(r.residuals[0] == doctest::Approx(1.0));
    CHECK(r.residuals[1] == doctest::Approx(1.5));
    CHECK(r.residuals[2] == doctest::Approx(2.0));
    CHECK(r.sse == doctest::Approx(7.25));
}

TEST_CASE("css_objective penalizes non-stationary coefficients") {
    const SarimaOrder order{1, 0, 0, 0, 0, 0, 1};
    const auto r = css_objective(order, {1.2}, {1.0, 2.0, 3.0});
    CHECK(r.sse >= 1e11);
}

TEST_CASE("fit on white noise recovers the sample variance") {
    const auto x = sim::white_noise(2000, 42, 1.3);
    const auto model = fit(sim::make_series(x), {0, 0, 0, 0, 0, 0, 1});
    CHECK(model.sigma2 == doctest::Approx(sim::variance_of(x)).epsilon(0.10));
    CHECK(model.mean == doctest::Approx(sim::mean_of(x)).epsilon(1e-9));
}

TEST_CASE("fit recovers an AR(1) coefficient") {
    const auto x = sim::ar1(2000, 0.7, 99);
    const auto series = sim::make_series(x);
    const auto model = fit(series, {1, 0, 0, 0, 0, 0, 1});
    REQUIRE(model.ar.size() == 1);
    CHECK(model.ar[0] > 0.62);
    CHECK(model.ar[0] < 0.78);

    // closed-form cross-check: lag-1 least squares on the demeaned series
    const double mu = sim::mean_of(x);
    double num = 0.0, den = 0.0;
    for (std::size_t t = 1; t < x.size(); ++t) {
        num += (x[t] - mu) * (x[t - 1] - mu);
        den += (x[t - 1] - mu) * (x[t - 1] - mu);
    }
    CHECK(model.ar[0] == doctest::Approx(num / den).epsilon(0.03));

    // descent: fitted CSS no worse than the deterministic start
    const auto diffed = series.values;
    const double at_start = css_objective(model.order, {0.1}, diffed).sse;
    const double at_fit = css_objective(model.order, {model.ar[0]}, diffed).sse;
    CHECK(at_fit <= at_start);

    // determinism
    const auto again = fit(series, {1, 0, 0, 0, 0, 0, 1});
    CHECK(again.ar[0] == model.ar[0]);
    CHECK(again.loglik == model.loglik);
}

TEST_CASE("fit recovers seasonal MA coefficients") {
    const auto x = sim::sarima_011_011(600, 12, 0.4, 0.6, 77);
    const auto model = fit(sim::make_series(x), {0, 1, 1, 0, 1, 1, 12});
    REQUIRE(model.ma.size() == 1);
    REQUIRE(model.sma.size() == 1);
    CHECK(std::abs(model.ma[0] - 0.4) < 0.15);
    CHECK(std::abs(model.sma[0] - 0.6) < 0.15);
}

TEST_CASE("fit rejects too-short series") {
    CHECK_THROWS_AS(fit(sim::make_series(std::vector<double>(8, 1.0)), {1, 0, 0, 0, 0, 0, 1}),
                    TooShortError);
}

TEST_CASE("white-noise forecast is flat with constant interval width") {
    const auto x = sim::white_noise(500, 21);
    const auto model = fit(sim::make_series(x), {0, 0, 0, 0, 0, 0, 1});
    const auto fc = forecast(model, 5);
    const double expected_width = 2.0 * 1.959963984540054 * std::sqrt(model.sigma2);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(fc.mean[i] == doctest::Approx(model.mean).epsilon(1e-12));
        CHECK(fc.upper95[i] - fc.lower95[i] == doctest::Approx(expected_width).epsilon(1e-12));
    }
}

TEST_CASE("random-walk forecast repeats the last value and widens like sqrt(h)") {
    const auto x = sim::random_walk(800, 33, 1.0, 500.0);
    const auto model = fit(sim::make_series(x), {0, 1, 0, 0, 0, 0, 1});
    const auto fc = forecast(model, 10);
    const double sd = std::sqrt(model.sigma2);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(fc.mean[i] == doctest::Approx(x.back()).epsilon(1e-12));
        const double width = fc.upper95[i] - fc.lower95[i];
        const double expected = 2.0 * 1.959963984540054 * sd * std::sqrt(static_cast<double>(i + 1));
        CHECK(width == doctest::Approx(expected).epsilon(0.01));
    }
}

TEST_CASE("AR(1) forecast matches the hand recursion") {
    const auto x = sim::ar1(1200, 0.6, 55);
    const auto series = sim::make_series(x);
    const auto model = fit(series, {1, 0, 0, 0, 0, 0, 1});
    const double phi = model.ar[0];
    const auto fc = forecast(model, 3);

    const double z_last = x.back() - model.mean;
    double acc = z_last;
    double var = 0.0, psi = 1.0;
    for (std::size_t i = 0; i < 3; ++i) {
        acc *= phi;
        CHECK(fc.mean[i] == doctest::Approx(model.mean + acc).epsilon(1e-10));
        var += psi * psi;
        const double hw = 1.959963984540054 * std::sqrt(model.sigma2 * var);
        CHECK(fc.upper95[i] - fc.mean[i] == doctest::Approx(hw).epsilon(1e-10));
        psi *= phi;
    }
}

TEST_CASE("interval widths are non-decreasing for assorted fitted models") {
    struct Case {
        std::vector<double> data;
        SarimaOrder order;
    };
    const Case cases[] = {
        {sim::ar1(600, 0.5, 1), {1, 0, 0, 0, 0, 0, 1}},
        {sim::random_walk(600, 2), {0, 1, 1, 0, 0, 0, 1}},
        {sim::sarima_011_011(500, 12, 0.4, 0.6, 3), {0, 1, 1, 0, 1, 1, 12}},
        {sim::white_noise(400, 4), {2, 0, 1, 0, 0, 0, 1}},
    };
    for (const auto& c : cases) {
        const auto model = fit(sim::make_series(c.data), c.order);
        const auto fc = forecast(model, 24);
        for (std::size_t i = 1; i < 24; ++i) {
            const double w0 = fc.upper95[i - 1] - fc.lower95[i - 1];
            const double w1 = fc.upper95[i] - fc.lower95[i];
            CHECK(w1 >= w0 - 1e-9);
            CHECK(fc.lower95[i] <= fc.mean[i]);
            CHECK(fc.mean[i] <= fc.upper95[i]);
        }
    }
}

TEST_CASE("model JSON round-trip reproduces forecasts bit-identically") {
    const auto x = sim::sarima_011_011(400, 12, 0.4, 0.6, 8);
    const auto model = fit(sim::make_series(x), {1, 1, 1, 0, 1, 1, 12});
    const auto dumped = to_json(model).dump();
    const auto loaded = sarima_from_json(json::parse(dumped));
    const auto a = forecast(model, 30);
    const auto b = forecast(loaded, 30);
    CHECK(a.mean == b.mean);
    CHECK(a.lower95 == b.lower95);
    CHECK(a.upper95 == b.upper95);
}

TEST_CASE("choose_differencing picks the generating orders") {
    CHECK(choose_differencing(sim::white_noise(600, 10), 12) == std::pair<std::size_t, std::size_t>{0, 0});
    CHECK(choose_differencing(sim::ar1(2000, 0.7, 99), 12) == std::pair<std::size_t, std::size_t>{0, 0});
    CHECK(choose_differencing(sim::random_walk(800, 12), 12).first == 1);
    CHECK(choose_differencing(sim::sarima_011_011(600, 12, 0.4, 0.6, 77), 12) ==
          std::pair<std::size_t, std::size_t>{1, 1});
}

TEST_CASE("stepwise selection on white noise lands on the all-zero order") {
    const auto series = sim::make_series(sim::white_noise(400, 2026));
    const auto result = stepwise_select(series, 12, Criterion::aic);
    CHECK(result.best.order.p == 0);
    CHECK(result.best.order.q == 0);
    CHECK(result.best.order.P == 0);
    CHECK(result.best.order.Q == 0);
    CHECK(result.best.order.d == 0);
    CHECK(result.best.order.D == 0);
    CHECK(result.trace.size() >= 4);

    // brute force over all orders up to (1,1): the all-zero order really is
    // the AIC argmin on this sample
    double best_aic = result.best.aic_value();
    for (std::size_t p = 0; p <= 1; ++p)
        for (std::size_t q = 0; q <= 1; ++q)
            for (std::size_t P = 0; P <= 1; ++P)
                for (std::size_t Q = 0; Q <= 1; ++Q)
                    CHECK(fit(series, {p, 0, q, P, 0, Q, 12}).aic_value() >= best_aic - 1e-9);

    // trace is in canonical order and the rerun is identical
    const auto again = stepwise_select(series, 12, Criterion::aic);
    REQUIRE(again.trace.size() == result.trace.size());
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
        CHECK(again.trace[i].order == result.trace[i].order);
        CHECK(again.trace[i].aic == result.trace[i].aic);
    }
}

TEST_CASE("ranking logic reproduces the published selection table") {
    const std::vector<TraceRow> rows = {
        {{0, 2, 1, 0, 1, 1, 12}, 3103.69, 3116.52},
        {{1, 2, 1, 0, 1, 1, 12}, 3102.47, 3119.57},
        {{0, 2, 1, 1, 1, 1, 12}, 3105.63, 3122.73},
        {{2, 2, 1, 0, 1, 1, 12}, 3104.16, 3125.65},
        {{1, 2, 1, 1, 1, 1, 12}, 3104.39, 3125.77},
        {{3, 2, 1, 0, 1, 1, 12}, 3106.70, 3131.36},
    };
    const auto by_aic = best_by(rows, Criterion::aic);
    CHECK(by_aic.order == SarimaOrder{1, 2, 1, 0, 1, 1, 12});
    CHECK(by_aic.aic == doctest::Approx(3102.47));
    const auto by_bic = best_by(rows, Criterion::bic);
    CHECK(by_bic.order == SarimaOrder{0, 2, 1, 0, 1, 1, 12});
    CHECK(by_bic.bic == doctest::Approx(3116.52));
}
