#include "stackindex_cli/cli.hpp"

#include "stackindex/evaluation.hpp"
#include "stackindex/ingestion.hpp"
#include "stackindex/service.hpp"
#include "stackindex/storage.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

namespace stackindex::cli {

namespace {

using nlohmann::json;

struct Common {
    std::string data;
    std::string tag;
    std::string model = "additive";
    bool json_out = false;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

MonthStamp month_arg(const std::string& text, const char* flag) {
    auto month = MonthStamp::parse(text);
    if (!month) {
        throw Error(ErrorCode::InvalidArgument, std::string(flag) + " expects YYYY-MM, got '" + text + "'");
    }
    return *month;
}

ModelSpec model_spec(const std::string& name) {
    auto kind = parse_model_kind(name);
    if (!kind) {
        throw Error(ErrorCode::UnknownModel,
                    "unknown model '" + name + "'; expected additive, holt-winters, sarima or ensemble",
                    {{"model", name}});
    }
    ModelSpec spec;
    spec.kind = *kind;
    return spec;
}

TagSeries resolve(const Dataset& ds, const std::string& tag, const std::vector<std::string>& with) {
    if (with.empty()) {
        return get_series(ds, tag);
    }
    std::vector<std::string> tags{tag};
    tags.insert(tags.end(), with.begin(), with.end());
    return combine(ds, tags);
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ss;
    ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return ss.str();
}

// Prints an Api response; non-200 bodies are errors.
int emit(const ApiResponse& response, std::ostream& out, std::ostream& err) {
    out << response.body.dump(2) << "\n";
    if (response.status != 200) {
        err << "error: " << response.body.value("code", "Error") << ": " << response.body.value("message", "")
            << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stack Overflow tag trend analysis and forecasting", "stackindex"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "stackindex 0.1.0");

    Common c;
    auto add_data = [&](CLI::App* sub) { sub->add_option("--data", c.data, "Dataset CSV")->required(); };
    auto add_tag = [&](CLI::App* sub) { sub->add_option("--tag", c.tag, "Tag name")->required(); };
    auto add_model = [&](CLI::App* sub) {
        sub->add_option("--model", c.model, "additive, holt-winters, sarima or ensemble")->capture_default_str();
    };

    // ingest
    std::string ingest_tags, ingest_from = "2009-01", ingest_to = "2019-12", ingest_out, ingest_csv, ingest_site = "stackoverflow",
                ingest_key;
    auto* ingest = app.add_subcommand("ingest", "Fetch monthly counts or import a CSV export");
    ingest->add_option("--tags", ingest_tags, "Comma-separated tags");
    ingest->add_option("--from", ingest_from, "First month")->capture_default_str();
    ingest->add_option("--to", ingest_to, "Last month")->capture_default_str();
    ingest->add_option("--site", ingest_site, "Stack Exchange site")->capture_default_str();
    ingest->add_option("--key", ingest_key, "Stack Exchange application key");
    auto* csv_opt = ingest->add_option("--csv", ingest_csv, "Import this CSV instead of fetching");
    ingest->add_option("--out", ingest_out, "Output dataset path")->required();
    csv_opt->excludes(ingest->get_option("--tags"));

    // forecast
    std::string forecast_combine;
    int horizon = 12;
    double level = 0.8;
    bool csv_out = false;
    auto* forecast = app.add_subcommand("forecast", "Forecast one tag or a combination");
    add_data(forecast);
    add_tag(forecast);
    forecast->add_option("--combine", forecast_combine, "Further tags summed with --tag");
    add_model(forecast);
    forecast->add_option("--horizon", horizon, "Months ahead (1-24)")->capture_default_str();
    forecast->add_option("--level", level, "Interval level")->capture_default_str();
    auto* fj = forecast->add_flag("--json", c.json_out, "Print the API response body");
    auto* fc = forecast->add_flag("--csv", csv_out, "Print tag,month,yhat,lower,upper rows");
    fj->excludes(fc);

    // backtest
    int holdout = 12;
    auto* bt = app.add_subcommand("backtest", "Score a model on held-out final months");
    add_data(bt);
    add_tag(bt);
    add_model(bt);
    bt->add_option("--holdout", holdout, "Held-out months (1-24)")->capture_default_str();
    bt->add_flag("--json", c.json_out, "Print the API response body");

    // changepoints
    double min_conf = 0.95;
    int max_points = 3;
    auto* cp = app.add_subcommand("changepoints", "Detect mean shifts");
    add_data(cp);
    add_tag(cp);
    cp->add_option("--min-confidence", min_conf)->capture_default_str();
    cp->add_option("--max-points", max_points)->capture_default_str();
    cp->add_flag("--json", c.json_out, "Print the API response body");

    // top
    int window = 0;
    int top_n = 10;
    auto* top = app.add_subcommand("top", "Rank tags by mean monthly count");
    add_data(top);
    top->add_option("--window", window, "Trailing months (default: all)");
    top->add_option("--n", top_n, "Entries to print")->capture_default_str();
    top->add_flag("--json", c.json_out, "Print the API response body");

    // plot
    std::string plot_out;
    auto* plot = app.add_subcommand("plot", "Write history, forecast and interval band as SVG");
    add_data(plot);
    add_tag(plot);
    add_model(plot);
    plot->add_option("--horizon", horizon)->capture_default_str();
    plot->add_option("--level", level)->capture_default_str();
    plot->add_option("--out", plot_out, "SVG path")->required();
    bool plot_cps = false;
    plot->add_flag("--changepoints", plot_cps, "Mark detected change points");

    // serve
    auto config = ServiceConfig::from_env();
    std::string store = config.store.string();
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
    serve_cmd->add_option("--store", store, "Dataset file or directory (STACKINDEX_STORE)");
    serve_cmd->add_option("--bind", config.bind, "host:port (STACKINDEX_BIND)")->capture_default_str();
    serve_cmd->add_option("--cors-origin", config.cors_origin, "Allowed UI origin (STACKINDEX_CORS_ORIGIN)");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        if (ingest->parsed()) {
            Dataset ds = [&] {
                if (!ingest_csv.empty()) {
                    return parse_dataset(read_file(ingest_csv));
                }
                FetchSpec spec;
                spec.tags = split_list(ingest_tags);
                spec.from = month_arg(ingest_from, "--from");
                spec.to = month_arg(ingest_to, "--to");
                spec.site = ingest_site;
                spec.key = ingest_key;
                spec.validate();
                auto transport = make_stack_exchange_transport();
                FetchOptions options;
                options.sleep = [&](std::chrono::seconds s) {
                    err << "backing off " << s.count() << "s\n";
                    std::this_thread::sleep_for(s);
                };
                try {
                    auto result = fetch_tag_counts(spec, *transport, options);
                    err << result.requests << " requests";
                    if (result.quota_remaining) {
                        err << ", quota remaining " << *result.quota_remaining;
                    }
                    err << "\n";
                    return std::move(result.dataset);
                } catch (const QuotaExhaustedError& e) {
                    auto partial_path = ingest_out + ".partial";
                    DatasetMetadata meta;
                    meta.fetched_at = utc_now();
                    meta.site = ingest_site;
                    save_dataset(e.partial(), partial_path, meta);
                    err << "partial dataset written to " << partial_path << "\n";
                    throw;
                }
            }();
            DatasetMetadata meta;
            meta.fetched_at = ingest_csv.empty() ? utc_now() : std::string{};
            meta.site = ingest_site;
            save_dataset(ds, ingest_out, meta);
            out << "wrote " << ds.month_count() << " months x " << ds.tag_count() << " tags to " << ingest_out
                << "\n";
            return 0;
        }

        if (serve_cmd->parsed()) {
            config.store = store;
            return serve(config);
        }

        const Dataset ds = open_dataset(c.data);

        if (forecast->parsed()) {
            const auto with = split_list(forecast_combine);
            if (c.json_out) {
                json tags = json::array({c.tag});
                for (const auto& t : with) tags.push_back(t);
                json body{{"tags", tags},      {"combine", !with.empty()}, {"model", c.model},
                          {"horizon", horizon}, {"level", level}};
                return emit(Api(ds, 0).forecast(body.dump()), out, err);
            }
            const auto series = resolve(ds, c.tag, with);
            const auto run = run_model(series, model_spec(c.model), horizon, level);
            for (const auto& w : run.warnings) {
                err << "warning: " << w << "\n";
            }
            if (csv_out) {
                out << "tag,month,yhat,lower,upper\n";
                for (const auto& p : run.forecast.points()) {
                    out << series.tag() << "," << p.month.to_string() << "," << format_number(p.yhat) << ","
                        << format_number(p.lower) << "," << format_number(p.upper) << "\n";
                }
            } else {
                out << series.tag() << " " << c.model << " forecast from " << run.forecast.origin().to_string()
                    << " (" << std::lround(level * 100) << "% interval)\n";
                out << std::fixed << std::setprecision(1);
                for (const auto& p : run.forecast.points()) {
                    out << p.month.to_string() << "  " << std::setw(12) << p.yhat << "  [" << p.lower << ", "
                        << p.upper << "]\n";
                }
            }
            return 0;
        }

        if (bt->parsed()) {
            if (c.json_out) {
                json body{{"tags", {c.tag}}, {"model", c.model}, {"holdout", holdout}};
                return emit(Api(ds, 0).backtest(body.dump()), out, err);
            }
            const auto report = backtest(ds, c.tag, model_spec(c.model), holdout);
            for (const auto& w : report.warnings) {
                err << "warning: " << w << "\n";
            }
            out << backtest_csv_header() << "\n" << backtest_csv_row(report) << "\n";
            return 0;
        }

        if (cp->parsed()) {
            if (c.json_out) {
                QueryParams q{{"min_confidence", format_number(min_conf)},
                              {"max_points", std::to_string(max_points)}};
                return emit(Api(ds, 0).handle("GET", "/api/v1/changepoints/" + c.tag, q, ""), out, err);
            }
            const auto series = get_series(ds, c.tag);
            const auto points = detect_changepoints(series, min_conf, max_points);
            if (points.empty()) {
                out << "no change points at confidence >= " << format_number(min_conf) << "\n";
            }
            for (const auto& p : points) {
                out << p.month.to_string() << " " << to_string(p.direction) << " confidence="
                    << format_number(p.confidence) << " mean " << format_number(p.pre_mean) << " -> "
                    << format_number(p.post_mean) << "\n";
            }
            return 0;
        }

        if (top->parsed()) {
            const int w = window > 0 ? window : static_cast<int>(ds.month_count());
            if (c.json_out) {
                QueryParams q{{"window", std::to_string(w)}, {"top", std::to_string(top_n)}};
                return emit(Api(ds, 0).trending(q), out, err);
            }
            const auto ranking = trend_ranking(ds, w, top_n);
            for (const auto& [tag, score] : ranking.entries) {
                out << tag << " " << format_number(score) << "\n";
            }
            return 0;
        }

        if (plot->parsed()) {
            const auto series = get_series(ds, c.tag);
            const auto run = run_model(series, model_spec(c.model), horizon, level);
            std::vector<ChangePoint> points;
            if (plot_cps) {
                points = detect_changepoints(series);
            }
            write_file_atomic(plot_out, render_svg(series, run.forecast, points));
            out << "wrote " << plot_out << "\n";
            return 0;
        }
    } catch (const Error& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return 1;
    }
    return 2;
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(std::move(args), std::cout, std::cerr);
}

} // namespace stackindex::cli
