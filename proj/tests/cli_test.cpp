#include "support.hpp"

#include "stackindex/service.hpp"
#include "stackindex/storage.hpp"
#include "stackindex_cli/cli.hpp"

#include <fstream>
#include <sstream>

using namespace stackindex;
using namespace stackindex::testing;
using nlohmann::json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = stackindex::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

const std::string& sample_path() {
    static const std::string path = fixture_path("sample.csv").string();
    return path;
}

std::string linear_fixture() {
    const auto path = std::filesystem::temp_directory_path() / "stackindex-cli-linear.csv";
    std::ofstream f(path);
    f << "month,line\n";
    for (int t = 0; t < 60; ++t) f << MonthStamp(2014, 1).plus(t).to_string() << "," << 3 * t + 10 << "\n";
    return path.string();
}

} // namespace

TEST(Cli, TopPrintsPythonFirst) {
    const auto r = run_cli({"top", "--data", sample_path(), "--n", "1"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("python ", 0), 0u) << r.out;
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
}

TEST(Cli, BacktestOnLinearFixture) {
    const auto r = run_cli({"backtest", "--data", linear_fixture(), "--tag", "line", "--model", "additive",
                        "--holdout", "6"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream lines(r.out);
    std::string header, row;
    std::getline(lines, header);
    std::getline(lines, row);
    EXPECT_EQ(header, "tag,model,split_month,holdout,mae,mse,rmse,cum_abs_err,cum_rel_err");
    std::vector<std::string> cells;
    std::stringstream ss(row);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 9u);
    EXPECT_LT(std::stod(cells[4]), 1e-4);
}

TEST(Cli, HorizonCapIsDomainError) {
    const auto r = run_cli({"forecast", "--data", sample_path(), "--tag", "python", "--horizon", "36"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("HorizonTooLarge"), std::string::npos);
    EXPECT_NE(r.err.find("24-month"), std::string::npos);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run_cli({}).code, 2);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
    EXPECT_EQ(run_cli({"forecast", "--tag", "python"}).code, 2);
    EXPECT_EQ(run_cli({"forecast", "--data", sample_path(), "--tag", "python", "--horizon", "x"}).code, 2);
    EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, DomainErrors) {
    EXPECT_EQ(run_cli({"forecast", "--data", sample_path(), "--tag", "cobol"}).code, 1);
    const auto unknown = run_cli({"forecast", "--data", sample_path(), "--tag", "python", "--model", "prophet"});
    EXPECT_EQ(unknown.code, 1);
    EXPECT_NE(unknown.err.find("UnknownModel"), std::string::npos);
    EXPECT_EQ(run_cli({"top", "--data", "/nonexistent/file.csv"}).code, 1);
}

TEST(Cli, JsonMatchesApi) {
    const Api api(open_dataset(sample_path()));
    const auto fc = run_cli({"forecast", "--data", sample_path(), "--tag", "keras", "--combine", "tensorflow,pytorch",
                         "--model", "sarima", "--horizon", "12", "--json"});
    ASSERT_EQ(fc.code, 0) << fc.err;
    EXPECT_EQ(json::parse(fc.out),
              api.forecast(R"({"tags":["keras","tensorflow","pytorch"],"combine":true,"model":"sarima","horizon":12})")
                  .body);

    const auto bt = run_cli({"backtest", "--data", sample_path(), "--tag", "r", "--model", "holt-winters", "--json"});
    ASSERT_EQ(bt.code, 0) << bt.err;
    EXPECT_EQ(json::parse(bt.out), api.backtest(R"({"tags":["r"],"model":"holt-winters","holdout":12})").body);

    const auto cp = run_cli({"changepoints", "--data", sample_path(), "--tag", "keras", "--json"});
    ASSERT_EQ(cp.code, 0);
    EXPECT_EQ(json::parse(cp.out), api.changepoints("keras", {}).body);

    const auto top = run_cli({"top", "--data", sample_path(), "--window", "12", "--n", "3", "--json"});
    ASSERT_EQ(top.code, 0);
    EXPECT_EQ(json::parse(top.out), api.trending({{"window", "12"}, {"top", "3"}}).body);

    const auto bad = run_cli({"forecast", "--data", sample_path(), "--tag", "python", "--horizon", "36", "--json"});
    EXPECT_EQ(bad.code, 1);
    EXPECT_EQ(json::parse(bad.out)["code"], "HorizonTooLarge");
}

TEST(Cli, CsvIsBitStable) {
    const std::vector<std::string> args{"forecast", "--data", sample_path(), "--tag", "python", "--model",
                                        "ensemble", "--horizon", "24", "--csv"};
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out.rfind("tag,month,yhat,lower,upper\npython,2020-01,", 0), 0u);
    EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 25);
}

TEST(Cli, ChangepointsText) {
    const auto r = run_cli({"changepoints", "--data", sample_path(), "--tag", "pytorch", "--min-confidence", "0.99"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("up"), std::string::npos);
}

TEST(Cli, PlotWritesSvg) {
    const auto out = std::filesystem::temp_directory_path() / "stackindex-plot-test.svg";
    std::filesystem::remove(out);
    const auto r = run_cli({"plot", "--data", sample_path(), "--tag", "tensorflow", "--model", "additive", "--horizon",
                        "12", "--out", out.string(), "--changepoints"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto svg = read_file(out);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("class=\"band\""), std::string::npos);
    EXPECT_NE(svg.find("class=\"forecast\""), std::string::npos);
    EXPECT_NE(svg.find("class=\"history\""), std::string::npos);
    EXPECT_NE(svg.find("class=\"changepoint\""), std::string::npos);
    std::filesystem::remove(out);
}

TEST(Cli, IngestImportsCsv) {
    const auto out = std::filesystem::temp_directory_path() / "stackindex-ingest-test" / "data.csv";
    std::filesystem::remove_all(out.parent_path());
    const auto r = run_cli({"ingest", "--csv", sample_path(), "--out", out.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(load_dataset(out), open_dataset(sample_path()));
    EXPECT_TRUE(std::filesystem::exists(metadata_path(out)));
    EXPECT_EQ(run_cli({"ingest", "--out", out.string()}).code, 1);
    std::filesystem::remove_all(out.parent_path());
}

TEST(Cli, ServeRequiresStore) {
    const auto r = run_cli({"serve", "--store", "/nonexistent/store", "--bind", "127.0.0.1:0"});
    EXPECT_EQ(r.code, 1);
}
