#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "nodedens/harness.hpp"

namespace nodedens {

inline constexpr std::string_view kReportCsvHeader =
    "sweep_param,estimator,lambda_true,mape_percent,rmse,mean_estimate,trials_used,"
    "degenerate_trials,mean_sample_size";

/// Shortest decimal string that parses back to exactly `x`; "nan"/"inf" for non-finite.
std::string format_double(double x);

std::string report_to_csv(const MetricsReport& report);
/// Array of row objects carrying the CSV column names as keys; NaN becomes null.
nlohmann::ordered_json report_to_json(const MetricsReport& report);

/// ExperimentConfig <-> JSON using the config's field names.
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);
/// Missing fields keep the values already in `base`. Throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::ordered_json& j, ExperimentConfig base);

}  // namespace nodedens
