// tscast command-line front end: ingest -> model -> forecast -> compare.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tscast/csv.hpp"
#include "tscast/date.hpp"
#include "tscast/errors.hpp"
#include "tscast/eval.hpp"
#include "tscast/io.hpp"
#include "tscast/json_io.hpp"
#include "tscast/lstm.hpp"
#include "tscast/sarima.hpp"
#include "tscast/series.hpp"
#include "tscast/split.hpp"
#include "tscast/stepwise.hpp"

namespace fs = std::filesystem;
using tscast::json;

namespace {

constexpr int kExitFileError = 2;
constexpr int kExitSelectionError = 3;
constexpr int kExitDivergence = 4;
constexpr int kExitModelMismatch = 5;
constexpr int kExitMetricMissing = 6;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CommonArgs {
    std::string input;
    std::string out = "out";
    std::string config_path;
    std::vector<double> ratios{0.72, 0.18, 0.10};
    std::uint64_t seed = 42;
    bool emit_runtime = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_input = true) {
    auto* in = cmd->add_option("--input", args.input, "input file");
    if (needs_input) in->required();
    cmd->add_option("--out", args.out, "output directory");
    cmd->add_option("--config", args.config_path, "flat JSON config; flags override its values");
    cmd->add_option("--ratios", args.ratios, "train,validation,test ratios (must sum to 1)")
        ->expected(3)
        ->delimiter(',');
    cmd->add_option("--seed", args.seed, "random seed");
    cmd->add_flag("--emit-runtime", args.emit_runtime,
                  "include measured wall-clock runtimes in report files (breaks byte-level "
                  "reproducibility)");
}

// Values from the flat JSON file behind --config act as defaults: each key
// becomes a synthesized "--key=value" argument unless the flag was passed
// explicitly on the command line.
std::vector<std::string> merge_config_args(const std::vector<std::string>& args) {
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            config_path = args[i].substr(9);
    }
    if (config_path.empty()) return args;

    auto passed = [&](const std::string& flag) {
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };

    std::vector<std::string> merged = args;
    const json cfg = json::parse(tscast::read_file(config_path));
    for (const auto& [key, value] : cfg.items()) {
        const std::string flag = "--" + key;
        if (passed(flag)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) merged.push_back(flag);
        } else if (value.is_array()) {
            std::string joined;
            for (const auto& v : value) {
                if (!joined.empty()) joined += ",";
                joined += v.is_string() ? v.get<std::string>() : v.dump();
            }
            merged.push_back(flag + "=" + joined);
        } else if (value.is_string()) {
            merged.push_back(flag + "=" + value.get<std::string>());
        } else {
            merged.push_back(flag + "=" + value.dump());
        }
    }
    return merged;
}

tscast::SplitRatios to_ratios(const std::vector<double>& r) {
    tscast::SplitRatios ratios{r[0], r[1], r[2]};
    if (!ratios.valid()) throw tscast::Error("ratios must be positive and sum to 1");
    return ratios;
}

tscast::UnivariateSeries load_series(const std::string& path) {
    return tscast::parse_series_csv(tscast::read_file(path));
}

std::string series_to_csv(const tscast::UnivariateSeries& s) {
    std::string out = "date,value\n";
    for (std::size_t i = 0; i < s.size(); ++i)
        out += s.dates[i].to_string() + "," + fmt(s.values[i]) + "\n";
    return out;
}

void write_report(const fs::path& path, tscast::ModelReport report, bool emit_runtime) {
    if (!emit_runtime) report.runtime_seconds = 0.0;
    tscast::write_file_atomic(path, tscast::report_to_json(report, emit_runtime).dump(2) + "\n");
}

int cmd_ingest(const CommonArgs& args, const std::string& symbol, const std::string& range) {
    if (!fs::exists(args.input)) {
        std::cerr << "error: input file not found: " << args.input << "\n";
        return kExitFileError;
    }
    auto ohlcv = tscast::parse_ohlcv_csv(tscast::read_file(args.input), symbol);
    auto series = tscast::clean(tscast::extract_open(ohlcv));
    if (!range.empty()) {
        const auto colon = range.find(':');
        if (colon == std::string::npos)
            throw tscast::Error("--range expects START:END ISO dates");
        series = tscast::slice_by_date(series, tscast::parse_date(range.substr(0, colon)),
                                       tscast::parse_date(range.substr(colon + 1)));
        if (series.empty()) throw tscast::EmptySeriesError("no rows in the requested range");
    }
    tscast::write_file_atomic(fs::path(args.out) / "series.csv", series_to_csv(series));
    std::cout << series.size() << " rows, " << series.dates.front().to_string() << ".."
              << series.dates.back().to_string() << "\n";
    return 0;
}

int cmd_auto_sarima(const CommonArgs& args, std::size_t m, const std::string& criterion) {
    const auto series = load_series(args.input);
    const auto split = tscast::split(series, to_ratios(args.ratios));
    const auto crit = (criterion == "bic") ? tscast::Criterion::bic : tscast::Criterion::aic;

    const auto t0 = std::chrono::steady_clock::now();
    const auto result = tscast::stepwise_select(split.train, m, crit);
    const double runtime =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::string trace = "order,aic,bic\n";
    for (const auto& row : result.trace)
        trace += row.order.label() + "," + fmt(row.aic) + "," + fmt(row.bic) + "\n";
    tscast::write_file_atomic(fs::path(args.out) / "sarima_trace.csv", trace);
    tscast::write_file_atomic(fs::path(args.out) / "sarima_model.json",
                              tscast::to_json(result.best).dump(2) + "\n");

    auto report = tscast::evaluate_sarima(result.best, split);
    report.runtime_seconds = runtime;
    write_report(fs::path(args.out) / "sarima_report.json", report, args.emit_runtime);
    std::cout << "selected " << result.best.order.label() << " (criterion " << criterion << ", "
              << result.trace.size() << " candidates)\n";
    return 0;
}

int cmd_fit_sarima(const CommonArgs& args, const std::vector<std::size_t>& order_fields) {
    if (order_fields.size() != 7)
        throw tscast::Error("--order expects p,d,q,P,D,Q,m");
    const tscast::SarimaOrder order{order_fields[0], order_fields[1], order_fields[2],
                                    order_fields[3], order_fields[4], order_fields[5],
                                    order_fields[6]};
    const auto series = load_series(args.input);
    const auto split = tscast::split(series, to_ratios(args.ratios));

    const auto t0 = std::chrono::steady_clock::now();
    const auto model = tscast::fit(split.train, order);
    const double runtime =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    tscast::write_file_atomic(fs::path(args.out) / "sarima_model.json",
                              tscast::to_json(model).dump(2) + "\n");
    auto report = tscast::evaluate_sarima(model, split);
    report.runtime_seconds = runtime;
    write_report(fs::path(args.out) / "sarima_report.json", report, args.emit_runtime);
    std::cout << "fitted " << order.label() << ", aic " << fmt(model.aic_value()) << ", bic "
              << fmt(model.bic_value()) << "\n";
    return 0;
}

int cmd_train_lstm(const CommonArgs& args, tscast::LstmConfig config,
                   const std::vector<std::size_t>& grid) {
    config.seed = args.seed;
    config.validate();
    const auto series = load_series(args.input);
    const auto split = tscast::split(series, to_ratios(args.ratios));

    if (!grid.empty()) {
        const auto reports = tscast::lookback_grid(split, config, grid);
        std::string csv = "dropout,units,lookback,mse,runtime_seconds\n";
        for (const auto& r : reports) {
            csv += r.params.at("dropout") + "," + r.params.at("units") + "," +
                   r.params.at("lookback") + "," + (r.mse_val ? fmt(*r.mse_val) : "") + "," +
                   fmt(r.runtime_seconds) + "\n";
        }
        tscast::write_file_atomic(fs::path(args.out) / "lstm_grid.csv", csv);
        std::cout << "grid of " << reports.size() << " lookbacks written\n";
        return 0;
    }

    const auto model = tscast::train(split, config);
    tscast::write_file_atomic(fs::path(args.out) / "lstm_model.json",
                              tscast::to_json(model).dump(2) + "\n");
    std::string history = "epoch,train_mse,val_mse\n";
    for (std::size_t e = 0; e < model.history.size(); ++e)
        history += std::to_string(e + 1) + "," + fmt(model.history[e].train_mse) + "," +
                   fmt(model.history[e].val_mse) + "\n";
    tscast::write_file_atomic(fs::path(args.out) / "lstm_history.csv", history);
    write_report(fs::path(args.out) / "lstm_report.json", tscast::evaluate_lstm(model, split),
                 args.emit_runtime);
    std::cout << "trained " << config.epochs << " epochs, final train mse "
              << fmt(model.history.back().train_mse) << "\n";
    return 0;
}

int cmd_forecast(const CommonArgs& args, const std::string& model_path, std::size_t horizon) {
    const auto series = load_series(args.input);
    if (series.empty()) {
        std::cerr << "error: empty input series\n";
        return kExitModelMismatch;
    }
    const json doc = json::parse(tscast::read_file(model_path));
    const std::string type = doc.value("type", "");

    std::vector<tscast::Date> dates;
    {
        tscast::Date d = series.dates.back();
        for (std::size_t i = 0; i < horizon; ++i) {
            d = tscast::next_trading_day(d);
            dates.push_back(d);
        }
    }

    std::string csv;
    if (type == "sarima") {
        auto model = tscast::sarima_from_json(doc);
        const auto lost = model.order.diff_spec().lost();
        if (series.size() <= lost + 1) {
            std::cerr << "error: series too short for the model's differencing\n";
            return kExitModelMismatch;
        }
        // Re-anchor the fitted coefficients on the full provided series.
        model.values = series.values;
        model.head.assign(series.values.begin(),
                          series.values.begin() + static_cast<std::ptrdiff_t>(lost));
        const auto fc = tscast::forecast(model, horizon);
        csv = "date,mean,lower95,upper95\n";
        for (std::size_t i = 0; i < horizon; ++i)
            csv += dates[i].to_string() + "," + fmt(fc.mean[i]) + "," + fmt(fc.lower95[i]) + "," +
                   fmt(fc.upper95[i]) + "\n";
    } else if (type == "lstm") {
        const auto model = tscast::lstm_from_json(doc);
        const std::size_t z = model.config.lookback;
        if (series.size() < z) {
            std::cerr << "error: series shorter than the model lookback (" << z << ")\n";
            return kExitModelMismatch;
        }
        std::vector<double> window(series.values.end() - static_cast<std::ptrdiff_t>(z),
                                   series.values.end());
        const auto preds = tscast::predict_future(model, window, horizon);
        csv = "date,mean\n";
        for (std::size_t i = 0; i < horizon; ++i)
            csv += dates[i].to_string() + "," + fmt(preds[i]) + "\n";
    } else {
        std::cerr << "error: unrecognized model type '" << type << "'\n";
        return kExitModelMismatch;
    }
    tscast::write_file_atomic(fs::path(args.out) / "forecast.csv", csv);
    std::cout << horizon << " forecast rows written\n";
    return 0;
}

int cmd_compare(const CommonArgs& args, const std::vector<std::string>& report_paths,
                const std::string& key) {
    std::vector<tscast::ModelReport> reports;
    for (const auto& path : report_paths)
        reports.push_back(tscast::report_from_json(json::parse(tscast::read_file(path))));
    const auto ranked = tscast::compare(reports, key);
    tscast::write_file_atomic(fs::path(args.out) / "league.csv",
                              tscast::reports_to_csv(ranked, args.emit_runtime));
    for (std::size_t i = 0; i < ranked.size(); ++i)
        std::cout << (i + 1) << ". " << ranked[i].label << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SARIMA / LSTM forecasting toolkit for daily price series"};
    app.require_subcommand(1);

    CommonArgs ingest_args, auto_args, fit_args, train_args, forecast_args, compare_args;

    auto* ingest = app.add_subcommand("ingest", "parse OHLCV CSV and emit a cleaned open-price series");
    add_common(ingest, ingest_args);
    std::string symbol = "SPX", range;
    ingest->add_option("--symbol", symbol, "symbol label");
    ingest->add_option("--range", range, "START:END inclusive ISO date filter");

    auto* auto_sarima = app.add_subcommand("auto-sarima", "stepwise SARIMA order selection");
    add_common(auto_sarima, auto_args);
    std::size_t m = 12;
    std::string criterion = "aic";
    auto_sarima->add_option("--m", m, "seasonal period");
    auto_sarima->add_option("--criterion", criterion, "aic or bic")
        ->check(CLI::IsMember({"aic", "bic"}));

    auto* fit_sarima = app.add_subcommand("fit-sarima", "fit one SARIMA order");
    add_common(fit_sarima, fit_args);
    std::vector<std::size_t> order_fields;
    fit_sarima->add_option("--order", order_fields, "p,d,q,P,D,Q,m")
        ->expected(7)
        ->delimiter(',')
        ->required();

    auto* train_lstm = app.add_subcommand("train-lstm", "train the LSTM regressor");
    add_common(train_lstm, train_args);
    tscast::LstmConfig lstm_config;
    std::vector<std::size_t> grid;
    train_lstm->add_option("--units", lstm_config.units, "hidden units");
    train_lstm->add_option("--dropout", lstm_config.dropout, "dropout rate in [0,1)");
    train_lstm->add_option("--lookback", lstm_config.lookback, "window length");
    train_lstm->add_option("--epochs", lstm_config.epochs, "training epochs (>= 1)");
    train_lstm->add_option("--lr", lstm_config.learning_rate, "learning rate");
    train_lstm->add_option("--batch", lstm_config.batch_size, "mini-batch size");
    train_lstm->add_option("--grid-lookback", grid, "comma-separated lookback grid")
        ->delimiter(',');

    auto* forecast_cmd = app.add_subcommand("forecast", "forecast future trading days from a model");
    add_common(forecast_cmd, forecast_args);
    std::string model_path;
    std::size_t horizon = 126;
    forecast_cmd->add_option("--model", model_path, "model JSON")->required();
    forecast_cmd->add_option("--horizon", horizon, "trading days ahead");

    auto* compare_cmd = app.add_subcommand("compare", "rank model reports by a metric");
    add_common(compare_cmd, compare_args, /*needs_input=*/false);
    std::vector<std::string> report_paths;
    std::string key = "mse_test";
    compare_cmd->add_option("--reports", report_paths, "report JSON files")->required();
    compare_cmd->add_option("--key", key, "metric to rank by");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = merge_config_args(args);
        std::reverse(args.begin(), args.end());  // CLI11's vector parse pops from the back
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFileError;
    }

    try {
        if (app.got_subcommand(ingest)) return cmd_ingest(ingest_args, symbol, range);
        if (app.got_subcommand(auto_sarima)) return cmd_auto_sarima(auto_args, m, criterion);
        if (app.got_subcommand(fit_sarima)) return cmd_fit_sarima(fit_args, order_fields);
        if (app.got_subcommand(train_lstm)) return cmd_train_lstm(train_args, lstm_config, grid);
        if (app.got_subcommand(forecast_cmd))
            return cmd_forecast(forecast_args, model_path, horizon);
        if (app.got_subcommand(compare_cmd)) return cmd_compare(compare_args, report_paths, key);
    } catch (const tscast::SelectionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSelectionError;
    } catch (const tscast::DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const tscast::MetricMissingError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMetricMissing;
    } catch (const tscast::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFileError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
