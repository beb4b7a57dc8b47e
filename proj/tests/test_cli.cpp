#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "support/sim.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("tscast_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

RunResult run_cli(const std::string& args, const fs::path& scratch) {
    const fs::path log = scratch / "run.log";
    const std::string cmd = std::string(TSCAST_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(log);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.output = buf.str();
    return r;
}

std::string read_all(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t line_count(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

std::string fixture() { return std::string(TSCAST_DATA_DIR) + "/sp500_sample.csv"; }

// write a "date,value" series the CLI commands can consume
fs::path write_series(const fs::path& dir, const std::vector<double>& values) {
    const auto series = sim::make_series(values);
    std::ofstream out(dir / "input.csv");
    out << "date,value\n";
    out.precision(17);
    for (std::size_t i = 0; i < series.size(); ++i)
        out << series.dates[i].to_string() << "," << series.values[i] << "\n";
    return dir / "input.csv";
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        rows.push_back(fields);
    }
    return rows;
}

}  // namespace

TEST_CASE("ingest writes the cleaned series and a summary line") {
    const auto dir = scratch_dir("ingest");
    const auto r = run_cli("ingest --input " + fixture() + " --out " + (dir / "out").string(), dir);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find(" rows, ") != std::string::npos);

    const auto csv = read_all(dir / "out" / "series.csv");
    CHECK(csv.rfind("date,value\n", 0) == 0);
    CHECK(line_count(csv) > 4000);
}

TEST_CASE("ingest respects --range") {
    const auto dir = scratch_dir("ingest_range");
    const auto r = run_cli("ingest --input " + fixture() + " --range 2015-01-01:2015-12-31 --out " +
                               (dir / "out").string(),
                           dir);
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(read_all(dir / "out" / "series.csv"));
    REQUIRE(rows.size() > 200);
    CHECK(rows[1][0].rfind("2015-", 0) == 0);
    CHECK(rows.back()[0].rfind("2015-", 0) == 0);
}

TEST_CASE("ingest exits 2 on a missing input file") {
    const auto dir = scratch_dir("ingest_missing");
    const auto r = run_cli("ingest --input " + (dir / "nope.csv").string(), dir);
    CHECK(r.exit_code == 2);
}

TEST_CASE("ingest exits 2 on malformed rows") {
    const auto dir = scratch_dir("ingest_bad");
    std::ofstream(dir / "bad.csv") << "Date,Open,High,Low,Close,Adj Close,Volume\n"
                                   << "2020-01-02,oops,1,1,1,1,1\n";
    const auto r = run_cli("ingest --input " + (dir / "bad.csv").string() + " --out " +
                               (dir / "out").string(),
                           dir);
    CHECK(r.exit_code == 2);
    CHECK_FALSE(fs::exists(dir / "out" / "series.csv"));
}

TEST_CASE("fit-sarima then forecast produces a four-column widening fan") {
    const auto dir = scratch_dir("fit_forecast");
    const auto input = write_series(dir, sim::random_walk(400, 3, 1.0, 300.0));
    auto r = run_cli("fit-sarima --input " + input.string() + " --order 0,1,1,0,0,0,1 --out " +
                         (dir / "out").string(),
                     dir);
    REQUIRE_MESSAGE(r.exit_code == 0, r.output);
    CHECK(fs::exists(dir / "out" / "sarima_model.json"));
    CHECK(fs::exists(dir / "out" / "sarima_report.json"));

    r = run_cli("forecast --input " + input.string() + " --model " +
                    (dir / "out" / "sarima_model.json").string() + " --horizon 10 --out " +
                    (dir / "out").string(),
                dir);
    REQUIRE_MESSAGE(r.exit_code == 0, r.output);
    const auto rows = parse_csv(read_all(dir / "out" / "forecast.csv"));
    REQUIRE(rows.size() == 11);
    CHECK(rows[0] == std::vector<std::string>{"date", "mean", "lower95", "upper95"});
    double prev_width = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 4);
        const double mean = std::stod(rows[i][1]);
        const double lo = std::stod(rows[i][2]);
        const double hi = std::stod(rows[i][3]);
        CHECK(lo <= mean);
        CHECK(mean <= hi);
        CHECK(hi - lo >= prev_width - 1e-9);
        prev_width = hi - lo;
    }
}

TEST_CASE("train-lstm writes model, history, and report; forecast consumes the model") {
    const auto dir = scratch_dir("lstm");
    const auto input = write_series(dir, sim::random_walk(300, 7, 1.0, 120.0));
    auto r = run_cli("train-lstm --input " + input.string() +
                         " --units 4 --lookback 8 --epochs 3 --out " + (dir / "out").string(),
                     dir);
    REQUIRE_MESSAGE(r.exit_code == 0, r.output);
    const auto history = parse_csv(read_all(dir / "out" / "lstm_history.csv"));
    REQUIRE(history.size() == 4);
    CHECK(history[0] == std::vector<std::string>{"epoch", "train_mse", "val_mse"});
    CHECK(history[1][0] == "1");
    CHECK(history[3][0] == "3");
    CHECK(fs::exists(dir / "out" / "lstm_report.json"));

    r = run_cli("forecast --input " + input.string() + " --model " +
                    (dir / "out" / "lstm_model.json").string() + " --horizon 5 --out " +
                    (dir / "out").string(),
                dir);
    REQUIRE_MESSAGE(r.exit_code == 0, r.output);
    const auto rows = parse_csv(read_all(dir / "out" / "forecast.csv"));
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == std::vector<std::string>{"date", "mean"});
    for (std::size_t i = 1; i < rows.size(); ++i) REQUIRE(rows[i].size() == 2);
}

TEST_CASE("train-lstm rejects zero epochs") {
    const auto dir = scratch_dir("lstm_epochs");
    const auto input = write_series(dir, sim::random_walk(200, 9));
    const auto r = run_cli("train-lstm --input " + input.string() + " --epochs 0 --lookback 8 --out " +
                               (dir / "out").string(),
                           dir);
    CHECK(r.exit_code == 2);
}

TEST_CASE("forecast exits 5 when the series is shorter than the lookback") {
    const auto dir = scratch_dir("mismatch");
    const auto long_input = write_series(dir, sim::random_walk(300, 13, 1.0, 100.0));
    auto r = run_cli("train-lstm --input " + long_input.string() +
                         " --units 3 --lookback 50 --epochs 1 --out " + (dir / "out").string(),
                     dir);
    REQUIRE_MESSAGE(r.exit_code == 0, r.output);

    std::ofstream(dir / "short.csv") << "date,value\n2020-01-02,1.0\n2020-01-03,2.0\n";
    r = run_cli("forecast --input " + (dir / "short.csv").string() + " --model " +
                    (dir / "out" / "lstm_model.json").string() + " --out " + (dir / "out").string(),
                dir);
    CHECK(r.exit_code == 5);
}

TEST_CASE("compare ranks mixed reports and exits 6 on a missing metric") {
    const auto dir = scratch_dir("compare");
    const auto input = write_series(dir, sim::random_walk(400, 17, 1.0, 250.0));
    auto r = run_cli("fit-sarima --input " + input.string() + " --order 0,1,0,0,0,0,1 --out " +
                         (dir / "sarima").string(),
                     dir);
    REQUIRE_MESSAGE(r.exit_code == 0, r.output);
    r = run_cli("train-lstm --input " + input.string() +
                    " --units 4 --lookback 8 --epochs 3 --out " + (dir / "lstm").string(),
                dir);
    REQUIRE_MESSAGE(r.exit_code == 0, r.output);

    const std::string reports = (dir / "sarima" / "sarima_report.json").string() + " " +
                                (dir / "lstm" / "lstm_report.json").string();
    r = run_cli("compare --reports " + reports + " --key mse_test --out " + (dir / "out").string(),
                dir);
    REQUIRE_MESSAGE(r.exit_code == 0, r.output);
    const auto league = parse_csv(read_all(dir / "out" / "league.csv"));
    REQUIRE(league.size() == 3);
    CHECK(league[0][0] == "label");
    CHECK(r.output.find("1. ") != std::string::npos);
    CHECK(r.output.find("2. ") != std::string::npos);

    // the LSTM report has no AIC, so ranking by it must fail cleanly
    r = run_cli("compare --reports " + reports + " --key aic --out " + (dir / "out").string(), dir);
    CHECK(r.exit_code == 6);
}

TEST_CASE("auto-sarima reruns are byte-identical") {
    const auto dir = scratch_dir("auto_repro");
    const auto input = write_series(dir, sim::white_noise(200, 23));
    for (const char* out : {"a", "b"}) {
        const auto r = run_cli("auto-sarima --input " + input.string() + " --m 4 --out " +
                                   (dir / out).string(),
                               dir);
        REQUIRE_MESSAGE(r.exit_code == 0, r.output);
    }
    for (const char* name : {"sarima_trace.csv", "sarima_model.json", "sarima_report.json"})
        CHECK(read_all(dir / "a" / name) == read_all(dir / "b" / name));
}

TEST_CASE("config file supplies defaults and flags override it") {
    const auto dir = scratch_dir("config");
    const auto input = write_series(dir, sim::random_walk(300, 29, 1.0, 100.0));
    std::ofstream(dir / "cfg.json") << "{\"units\": 3, \"lookback\": 6, \"epochs\": 2, \"out\": \""
                                    << (dir / "from_config").string() << "\"}";

    auto r = run_cli("train-lstm --input " + input.string() + " --config " +
                         (dir / "cfg.json").string(),
                     dir);
    REQUIRE_MESSAGE(r.exit_code == 0, r.output);
    const auto history = parse_csv(read_all(dir / "from_config" / "lstm_history.csv"));
    CHECK(history.size() == 3);  // header + the config's 2 epochs

    // explicit --epochs beats the config value
    r = run_cli("train-lstm --input " + input.string() + " --config " +
                    (dir / "cfg.json").string() + " --epochs 4 --out " + (dir / "flag").string(),
                dir);
    REQUIRE_MESSAGE(r.exit_code == 0, r.output);
    CHECK(parse_csv(read_all(dir / "flag" / "lstm_history.csv")).size() == 5);
}
