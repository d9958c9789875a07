#pragma once

#include "stackindex/additive.hpp"
#include "stackindex/dataset.hpp"
#include "stackindex/forecast.hpp"
#include "stackindex/holt_winters.hpp"
#include "stackindex/sarima.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stackindex {

/// Pointwise median of yhat and of each interval bound, re-clamped so that
/// lower <= yhat <= upper. Members must share origin, horizon and level.
Forecast ensemble_forecast(std::span<const Forecast> forecasts);

/// Model kind plus the configuration each family reads.
struct ModelSpec {
    ModelKind kind = ModelKind::Additive;
    AdditiveModelConfig additive;
    SarimaOrder sarima;
    /// Pick the SARIMA order by AIC over p,q,P,Q in {0,1} (d, D from `sarima`).
    bool sarima_auto = false;

    std::string describe() const;
};

struct ModelRun {
    Forecast forecast;
    /// Non-fatal diagnostics, e.g. SARIMA optimizer budget exhausted.
    std::vector<std::string> warnings;
};

/// Fits the requested model to `series` and forecasts `horizon` months.
/// The ensemble fits the three base families and takes their median.
ModelRun run_model(const TagSeries& series, const ModelSpec& spec, int horizon, double level);

} // namespace stackindex
