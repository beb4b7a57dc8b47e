#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tscast/errors.hpp"
#include "tscast/lstm.hpp"
#include "tscast/sarima.hpp"
#include "tscast/split.hpp"

namespace tscast {

/// One comparison-table row. MSE unit is declared in params["mse_unit"]
/// ("price" or "scaled"); scaled reports carry a price-unit test MSE under
/// params["mse_test_price"] so cross-family ranking stays meaningful.
struct ModelReport {
    std::string label;
    std::optional<double> aic;
    std::optional<double> bic;
    std::optional<double> mse_train;
    std::optional<double> mse_val;
    std::optional<double> mse_test;
    double runtime_seconds = 0.0;
    std::map<std::string, std::string> params;
};

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

/// One-step-ahead rolling evaluation of a fitted SARIMA model over the
/// validation + test region: for each held-out point the model is re-anchored
/// on all true history before it (coefficients fixed) and asked for a
/// one-step forecast. MSE is in price units.
inline ModelReport evaluate_sarima(const SarimaModel& model, const DataSplit& split,
                                   bool both_aic_conventions = false) {
    ModelReport report;
    report.label = model.order.label();
    report.aic = model.aic_value();
    report.bic = model.bic_value();
    report.params["mse_unit"] = "price";
    if (both_aic_conventions)
        report.params["aic_normalized"] =
            detail::format_double(model.aic_value(AicConvention::normalized));

    auto rolling_mse = [&](const std::vector<double>& history_base,
                           const std::vector<double>& targets) -> std::optional<double> {
        if (targets.empty()) return std::nullopt;
        SarimaModel rolled = model;
        rolled.values = history_base;
        std::vector<double> preds;
        preds.reserve(targets.size());
        for (double actual : targets) {
            preds.push_back(forecast(rolled, 1).mean.front());
            rolled.values.push_back(actual);
        }
        return mse(preds, targets);
    };

    std::vector<double> history = split.train.values;
    report.mse_val = rolling_mse(history, split.validation.values);
    history.insert(history.end(), split.validation.values.begin(), split.validation.values.end());
    report.mse_test = rolling_mse(history, split.test.values);
    return report;
}

inline ModelReport evaluate_lstm(const TrainedLstm& model, const DataSplit& split) {
    ModelReport report;
    report.label = "LSTM(units=" + std::to_string(model.config.units) +
                   ",lookback=" + std::to_string(model.config.lookback) + ")";
    report.runtime_seconds = model.runtime_seconds;
    report.params["mse_unit"] = "scaled";
    report.params["dropout"] = detail::format_double(model.config.dropout);
    report.params["units"] = std::to_string(model.config.units);
    report.params["lookback"] = std::to_string(model.config.lookback);

    if (!model.history.empty()) {
        report.mse_train = model.history.back().train_mse;
        if (std::isfinite(model.history.back().val_mse))
            report.mse_val = model.history.back().val_mse;
    }

    const std::size_t z = model.config.lookback;
    if (!split.test.empty()) {
        // Rolling prediction over the test region, with the last z prior
        // observations as context.
        std::vector<double> context = split.train.values;
        context.insert(context.end(), split.validation.values.begin(),
                       split.validation.values.end());
        if (context.size() < z)
            throw TooShortError("not enough history before the test split for the lookback");
        UnivariateSeries region;
        region.values.assign(context.end() - static_cast<std::ptrdiff_t>(z), context.end());
        region.values.insert(region.values.end(), split.test.values.begin(),
                             split.test.values.end());
        region.dates.resize(region.values.size());  // dates unused by predict_rolling

        const auto preds_price = predict_rolling(model, region);
        report.mse_test = mse(model.scaler.scale(preds_price),
                              model.scaler.scale(split.test.values));
        report.params["mse_test_price"] =
            detail::format_double(mse(preds_price, split.test.values));
    }
    return report;
}

/// Table-4-style sweep: one model per lookback, identical schedule, seeds
/// derived as base seed + cell index. Output order equals input order.
inline std::vector<ModelReport> lookback_grid(const DataSplit& split, const LstmConfig& base,
                                              const std::vector<std::size_t>& lookbacks) {
    if (lookbacks.empty()) throw Error("lookback grid must be non-empty");
    std::vector<ModelReport> reports;
    reports.reserve(lookbacks.size());
    for (std::size_t i = 0; i < lookbacks.size(); ++i) {
        LstmConfig config = base;
        config.lookback = lookbacks[i];
        config.seed = base.seed + i;
        const auto model = train(split, config);
        reports.push_back(evaluate_lstm(model, split));
    }
    return reports;
}

namespace detail {

inline std::optional<double> metric_value(const ModelReport& r, const std::string& key) {
    if (key == "aic") return r.aic;
    if (key == "bic") return r.bic;
    if (key == "mse_train") return r.mse_train;
    if (key == "mse_val") return r.mse_val;
    if (key == "mse_test") return r.mse_test;
    if (key == "runtime_seconds") return r.runtime_seconds;
    auto it = r.params.find(key);
    if (it != r.params.end()) return std::stod(it->second);
    return std::nullopt;
}

}  // namespace detail

/// Stable ascending sort by the named metric, ties broken by label. For MSE
/// metrics the reports must agree on params["mse_unit"]; a mixed-unit set is
/// ranked by the price-unit test MSE when every report carries one and
/// refused otherwise.
inline std::vector<ModelReport> compare(std::vector<ModelReport> reports, const std::string& key) {
    std::string effective_key = key;
    if (key.rfind("mse", 0) == 0) {
        bool mixed = false;
        std::string unit;
        for (const auto& r : reports) {
            const auto it = r.params.find("mse_unit");
            const std::string u = (it == r.params.end()) ? "price" : it->second;
            if (unit.empty())
                unit = u;
            else if (u != unit)
                mixed = true;
        }
        if (mixed) {
            for (const auto& r : reports) {
                const auto it = r.params.find("mse_unit");
                const bool is_price = (it == r.params.end() || it->second == "price");
                if (!is_price && !r.params.contains("mse_test_price"))
                    throw MetricMissingError(
                        "mixed MSE units and report '" + r.label +
                        "' has no price-unit test MSE; cannot rank mixed-unit reports");
            }
            effective_key = "__mse_price";
        }
    }

    auto value_of = [&](const ModelReport& r) -> double {
        std::optional<double> v;
        if (effective_key == "__mse_price") {
            const auto it = r.params.find("mse_unit");
            const bool is_price = (it == r.params.end() || it->second == "price");
            v = is_price ? detail::metric_value(r, "mse_test")
                         : detail::metric_value(r, "mse_test_price");
        } else {
            v = detail::metric_value(r, effective_key);
        }
        if (!v) throw MetricMissingError("report '" + r.label + "' lacks metric '" + key + "'");
        return *v;
    };

    for (const auto& r : reports) (void)value_of(r);  // validate all before sorting
    std::stable_sort(reports.begin(), reports.end(),
                     [&](const ModelReport& a, const ModelReport& b) {
                         const double va = value_of(a), vb = value_of(b);
                         if (va != vb) return va < vb;
                         return a.label < b.label;
                     });
    return reports;
}

inline std::string reports_to_csv(const std::vector<ModelReport>& reports,
                                  bool include_runtime = true) {
    std::string out = "label,aic,bic,mse_train,mse_val,mse_test,runtime_seconds\n";
    auto cell = [](const std::optional<double>& v) {
        return v ? detail::format_double(*v) : std::string{};
    };
    for (const auto& r : reports) {
        out += r.label + "," + cell(r.aic) + "," + cell(r.bic) + "," + cell(r.mse_train) + "," +
               cell(r.mse_val) + "," + cell(r.mse_test) + "," +
               (include_runtime ? detail::format_double(r.runtime_seconds) : std::string{}) + "\n";
    }
    return out;
}

inline nlohmann::json report_to_json(const ModelReport& r, bool include_runtime = true) {
    nlohmann::json j{{"label", r.label}, {"params", r.params}};
    auto put = [&](const char* name, const std::optional<double>& v) {
        if (v) j[name] = *v;
    };
    put("aic", r.aic);
    put("bic", r.bic);
    put("mse_train", r.mse_train);
    put("mse_val", r.mse_val);
    put("mse_test", r.mse_test);
    if (include_runtime) j["runtime_seconds"] = r.runtime_seconds;
    return j;
}

inline ModelReport report_from_json(const nlohmann::json& j) {
    ModelReport r;
    r.label = j.at("label");
    auto get = [&](const char* name) -> std::optional<double> {
        if (j.contains(name)) return j.at(name).get<double>();
        return std::nullopt;
    };
    r.aic = get("aic");
    r.bic = get("bic");
    r.mse_train = get("mse_train");
    r.mse_val = get("mse_val");
    r.mse_test = get("mse_test");
    if (j.contains("runtime_seconds")) r.runtime_seconds = j.at("runtime_seconds").get<double>();
    if (j.contains("params"))
        r.params = j.at("params").get<std::map<std::string, std::string>>();
    return r;
}

}  // namespace tscast
