#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "tscast/errors.hpp"
#include "tscast/lstm.hpp"
#include "tscast/sarima.hpp"

namespace tscast {

using json = nlohmann::json;

inline json to_json(const SarimaOrder& o) {
    return json{{"p", o.p}, {"d", o.d}, {"q", o.q},
                {"P", o.P}, {"D", o.D}, {"Q", o.Q}, {"m", o.m}};
}

inline SarimaOrder sarima_order_from_json(const json& j) {
    return SarimaOrder{j.at("p"), j.at("d"), j.at("q"), j.at("P"), j.at("D"), j.at("Q"), j.at("m")};
}

inline json to_json(const SarimaModel& model) {
    return json{{"type", "sarima"},
                {"order", to_json(model.order)},
                {"ar", model.ar},
                {"ma", model.ma},
                {"sar", model.sar},
                {"sma", model.sma},
                {"mean", model.mean},
                {"sigma2", model.sigma2},
                {"loglik", model.loglik},
                {"n_obs", model.n_obs},
                {"head", model.head},
                {"values", model.values}};
}

inline SarimaModel sarima_from_json(const json& j) {
    if (j.value("type", "") != "sarima") throw FormatError("not a sarima model document");
    SarimaModel m;
    m.order = sarima_order_from_json(j.at("order"));
    m.ar = j.at("ar").get<std::vector<double>>();
    m.ma = j.at("ma").get<std::vector<double>>();
    m.sar = j.at("sar").get<std::vector<double>>();
    m.sma = j.at("sma").get<std::vector<double>>();
    m.mean = j.at("mean");
    m.sigma2 = j.at("sigma2");
    m.loglik = j.at("loglik");
    m.n_obs = j.at("n_obs");
    m.head = j.at("head").get<std::vector<double>>();
    m.values = j.at("values").get<std::vector<double>>();
    return m;
}

inline json to_json(const LstmConfig& c) {
    return json{{"units", c.units},
                {"dropout", c.dropout},
                {"lookback", c.lookback},
                {"epochs", c.epochs},
                {"learning_rate", c.learning_rate},
                {"batch_size", c.batch_size},
                {"seed", c.seed}};
}

inline LstmConfig lstm_config_from_json(const json& j) {
    LstmConfig c;
    c.units = j.at("units");
    c.dropout = j.at("dropout");
    c.lookback = j.at("lookback");
    c.epochs = j.at("epochs");
    c.learning_rate = j.at("learning_rate");
    c.batch_size = j.at("batch_size");
    c.seed = j.at("seed");
    return c;
}

inline json to_json(const TrainedLstm& model) {
    json history = json::array();
    for (const auto& e : model.history) {
        json row{{"train_mse", e.train_mse}};
        if (std::isfinite(e.val_mse))
            row["val_mse"] = e.val_mse;
        else
            row["val_mse"] = nullptr;
        history.push_back(std::move(row));
    }
    return json{{"type", "lstm"},
                {"config", to_json(model.config)},
                {"scaler", {{"x_min", model.scaler.x_min}, {"x_range", model.scaler.x_range}}},
                {"weights",
                 {{"units", model.weights.units},
                  {"gate_order", "ifog"},
                  {"W_shape", {4 * model.weights.units, model.weights.units + 1}},
                  {"W", model.weights.W},
                  {"b", model.weights.b},
                  {"w_out", model.weights.w_out},
                  {"b_out", model.weights.b_out}}},
                {"history", history}};
}

inline TrainedLstm lstm_from_json(const json& j) {
    if (j.value("type", "") != "lstm") throw FormatError("not an lstm model document");
    TrainedLstm m;
    m.config = lstm_config_from_json(j.at("config"));
    m.scaler.x_min = j.at("scaler").at("x_min");
    m.scaler.x_range = j.at("scaler").at("x_range");
    const auto& w = j.at("weights");
    m.weights.units = w.at("units");
    m.weights.W = w.at("W").get<std::vector<double>>();
    m.weights.b = w.at("b").get<std::vector<double>>();
    m.weights.w_out = w.at("w_out").get<std::vector<double>>();
    m.weights.b_out = w.at("b_out");
    if (m.weights.W.size() != 4 * m.weights.units * (m.weights.units + 1))
        throw FormatError("weight matrix size does not match units");
    for (const auto& row : j.at("history")) {
        EpochStats e;
        e.train_mse = row.at("train_mse");
        e.val_mse = row.at("val_mse").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                : row.at("val_mse").get<double>();
        m.history.push_back(e);
    }
    return m;
}

}  // namespace tscast
