#pragma once

#include "stackindex/forecast.hpp"
#include "stackindex/dataset.hpp"
#include "stackindex/changepoint.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace stackindex::cli {

/// Runs one command line. Output goes to `out`, diagnostics to `err`.
/// Returns 0 on success, 1 for domain errors, 2 for usage errors.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

/// Standalone SVG of a series' history, its forecast line and interval band,
/// with optional change-point markers.
std::string render_svg(const TagSeries& history, const Forecast& forecast,
                       std::span<const ChangePoint> changepoints = {});

} // namespace stackindex::cli
