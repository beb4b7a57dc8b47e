#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "support/sim.hpp"
#include "tscast/difference.hpp"
#include "tscast/scaler.hpp"
#include "tscast/window.hpp"

using namespace tscast;

TEST_CASE("fit_rescale maps min to 0 and max to 1") {
    auto [scaled, scaler] = fit_rescale(sim::make_series({0.0, 5.0, 10.0}));
    CHECK(scaled.values == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(scaler.x_min == 0.0);
    CHECK(scaler.x_range == 10.0);

    auto [two, s2] = fit_rescale(sim::make_series({2.0, 4.0}));
    CHECK(two.values == std::vector<double>{0.0, 1.0});

    CHECK_THROWS_AS(fit_rescale(sim::make_series({3.0, 3.0, 3.0})), ZeroRangeError);
}

TEST_CASE("fit_rescale endpoints hold for arbitrary non-constant input") {
    Rng rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> vals(50);
        for (double& v : vals) v = rng.uniform(-100.0, 300.0);
        auto [scaled, scaler] = fit_rescale(sim::make_series(vals));
        const auto [lo, hi] = std::minmax_element(scaled.values.begin(), scaled.values.end());
        CHECK(*lo == 0.0);
        CHECK(*hi == 1.0);
    }
}

TEST_CASE("inverse_rescale inverts the forward transform") {
    MinMaxScaler a{0.0, 10.0};
    CHECK(inverse_rescale({0.5}, a)[0] == doctest::Approx(5.0));
    MinMaxScaler b{7.0, 3.0};
    CHECK(inverse_rescale({0.0}, b)[0] == doctest::Approx(7.0));

    Rng rng(17);
    double max_abs = 0.0, max_err = 0.0;
    MinMaxScaler s{250.0, 1750.0};
    for (int i = 0; i < 100; ++i) {
        const double x = rng.uniform(100.0, 5000.0);
        const double err = std::abs(s.unscale(s.scale(x)) - x);
        max_abs = std::max(max_abs, std::abs(x));
        max_err = std::max(max_err, err);
    }
    CHECK(max_err < 1e-12 * max_abs);
}

TEST_CASE("difference basic cases") {
    CHECK(difference({1, 2, 4}, {1, 0, 1}) == std::vector<double>{1, 2});
    CHECK(difference({1, 2, 3, 4}, {0, 1, 2}) == std::vector<double>{2, 2});
    // linear ramp killed by one seasonal plus one regular difference
    CHECK(difference({1, 2, 3, 4, 5, 6}, {1, 1, 2}) == std::vector<double>{0, 0, 0});
    CHECK_THROWS_AS(difference({1, 2}, {1, 1, 2}), TooShortError);
}

TEST_CASE("integrate basic cases") {
    CHECK(integrate({1, 2}, {1, 0, 1}, {1}) == std::vector<double>{1, 2, 4});
    CHECK(integrate({}, {0, 0, 1}, {}) == std::vector<double>{});
    CHECK_THROWS_AS(integrate({1, 2}, {1, 0, 1}, {1, 2}), HeadLengthError);
}

TEST_CASE("difference/integrate round-trips exactly over the property grid") {
    for (std::size_t d : {0u, 1u, 2u}) {
        for (std::size_t D : {0u, 1u}) {
            for (std::size_t m : {4u, 12u}) {
                if (d + D == 0) continue;
                const DifferenceSpec spec{d, D, m};
                const auto x = sim::random_walk(500, 1000 + d * 100 + D * 10 + m);
                const auto w = difference(x, spec);
                CHECK(w.size() == x.size() - spec.lost());
                const std::vector<double> head(x.begin(),
                                               x.begin() + static_cast<std::ptrdiff_t>(spec.lost()));
                const auto back = integrate(w, spec, head);
                REQUIRE(back.size() == x.size());
                double max_err = 0.0;
                for (std::size_t i = 0; i < x.size(); ++i)
                    max_err = std::max(max_err, std::abs(back[i] - x[i]));
                CHECK(max_err < 1e-9);
            }
        }
    }
}

TEST_CASE("make_windows slices lookback windows") {
    const auto ws = make_windows({1, 2, 3, 4}, 2);
    REQUIRE(ws.size() == 2);
    CHECK(ws.inputs[0] == std::vector<double>{1, 2});
    CHECK(ws.inputs[1] == std::vector<double>{2, 3});
    CHECK(ws.targets == std::vector<double>{3, 4});

    std::vector<double> v51(51);
    std::iota(v51.begin(), v51.end(), 0.0);
    CHECK(make_windows(v51, 50).size() == 1);

    std::vector<double> v50(50, 1.0);
    CHECK_THROWS_AS(make_windows(v50, 50), TooShortError);
}

TEST_CASE("make_windows on an increasing series yields increasing targets") {
    std::vector<double> v(120);
    std::iota(v.begin(), v.end(), 5.0);
    const auto ws = make_windows(v, 7);
    for (std::size_t k = 1; k < ws.targets.size(); ++k) CHECK(ws.targets[k] > ws.targets[k - 1]);
}
