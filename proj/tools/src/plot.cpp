#include "stackindex_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace stackindex::cli {

namespace {

constexpr double kWidth = 900;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 30;
constexpr double kBottom = 40;

std::string escape(const std::string& text) {
    std::string out;
    for (char ch : text) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

// Rounds an axis maximum up to 1, 2 or 5 times a power of ten.
double nice_ceiling(double value) {
    if (value <= 0) {
        return 1;
    }
    const double magnitude = std::pow(10.0, std::floor(std::log10(value)));
    for (double step : {1.0, 2.0, 5.0, 10.0}) {
        if (step * magnitude >= value) {
            return step * magnitude;
        }
    }
    return 10 * magnitude;
}

} // namespace

std::string render_svg(const TagSeries& history, const Forecast& forecast, std::span<const ChangePoint> changepoints) {
    const MonthStamp first = history.start();
    const MonthStamp last = forecast.points().empty() ? history.end() : forecast.points().back().month;
    const double span_months = std::max(1, last.minus(first));

    double ymax = 0;
    for (double v : history.values()) ymax = std::max(ymax, v);
    for (const auto& p : forecast.points()) ymax = std::max(ymax, p.upper);
    ymax = nice_ceiling(ymax);

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto x = [&](MonthStamp m) { return kLeft + plot_w * m.minus(first) / span_months; };
    auto y = [&](double v) { return kTop + plot_h * (1.0 - v / ymax); };

    std::ostringstream svg;
    svg.setf(std::ios::fixed);
    svg.precision(2);
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << int(kWidth) << "\" height=\"" << int(kHeight)
        << "\" viewBox=\"0 0 " << int(kWidth) << " " << int(kHeight) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kLeft << "\" y=\"18\" font-size=\"14\">" << escape(history.tag()) << " (forecast from "
        << forecast.origin().to_string() << ", " << std::lround(forecast.level() * 100) << "% interval)</text>\n";

    // Axes, horizontal grid and year ticks.
    svg << "<g stroke=\"#ccc\" stroke-width=\"1\">\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = ymax * i / 4;
        svg << "<line x1=\"" << kLeft << "\" y1=\"" << y(v) << "\" x2=\"" << kWidth - kRight << "\" y2=\"" << y(v)
            << "\"/>\n";
    }
    svg << "</g>\n<g fill=\"#444\">\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = ymax * i / 4;
        svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << y(v) + 4 << "\" text-anchor=\"end\">"
            << static_cast<long long>(v) << "</text>\n";
    }
    for (int year = first.year() + (first.month() == 1 ? 0 : 1); year <= last.year(); ++year) {
        const MonthStamp jan{year, 1};
        svg << "<text x=\"" << x(jan) << "\" y=\"" << kHeight - kBottom + 18 << "\" text-anchor=\"middle\">"
            << year << "</text>\n";
    }
    svg << "</g>\n";

    if (!forecast.points().empty()) {
        svg << "<polygon class=\"band\" fill=\"#4c78a8\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
        for (const auto& p : forecast.points()) {
            svg << x(p.month) << "," << y(p.upper) << " ";
        }
        for (auto it = forecast.points().rbegin(); it != forecast.points().rend(); ++it) {
            svg << x(it->month) << "," << y(it->lower) << " ";
        }
        svg << "\"/>\n";
    }

    svg << "<polyline class=\"history\" fill=\"none\" stroke=\"#222\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < history.size(); ++i) {
        svg << x(history.month_at(i)) << "," << y(history[i]) << " ";
    }
    svg << "\"/>\n";

    if (!forecast.points().empty()) {
        svg << "<polyline class=\"forecast\" fill=\"none\" stroke=\"#4c78a8\" stroke-width=\"2\" "
               "stroke-dasharray=\"5,3\" points=\""
            << x(history.end()) << "," << y(history[history.size() - 1]) << " ";
        for (const auto& p : forecast.points()) {
            svg << x(p.month) << "," << y(p.yhat) << " ";
        }
        svg << "\"/>\n";
    }

    for (const auto& cp : changepoints) {
        svg << "<line class=\"changepoint\" stroke=\"#e45756\" stroke-dasharray=\"2,2\" x1=\"" << x(cp.month)
            << "\" y1=\"" << kTop << "\" x2=\"" << x(cp.month) << "\" y2=\"" << kHeight - kBottom << "\"><title>"
            << cp.month.to_string() << "</title></line>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace stackindex::cli
