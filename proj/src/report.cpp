#include "nodedens/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "nodedens/errors.hpp"

namespace nodedens {

using json = nlohmann::ordered_json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string report_to_csv(const MetricsReport& report) {
  std::ostringstream out;
  out << kReportCsvHeader << '\n';
  for (const auto& r : report.rows) {
    out << format_double(r.sweep_value) << ',' << estimator_key(r.estimator) << ','
        << format_double(r.lambda_true) << ',' << format_double(r.mape_percent) << ','
        << format_double(r.rmse) << ',' << format_double(r.mean_estimate) << ',' << r.trials_used
        << ',' << r.degenerate_trials << ',' << format_double(r.mean_sample_size) << '\n';
  }
  return out.str();
}

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

template <class T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

}  // namespace

json report_to_json(const MetricsReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"sweep_param", r.sweep_value},
                    {"estimator", std::string(estimator_key(r.estimator))},
                    {"lambda_true", number_or_null(r.lambda_true)},
                    {"mape_percent", number_or_null(r.mape_percent)},
                    {"rmse", number_or_null(r.rmse)},
                    {"mean_estimate", number_or_null(r.mean_estimate)},
                    {"trials_used", r.trials_used},
                    {"degenerate_trials", r.degenerate_trials},
                    {"mean_sample_size", number_or_null(r.mean_sample_size)}});
  }
  return rows;
}

json config_to_json(const ExperimentConfig& cfg) {
  json est = json::array();
  for (Estimator e : cfg.estimators) est.push_back(std::string(estimator_key(e)));
  return {{"sweep", std::string(sweep_key(cfg.sweep))},
          {"grid", cfg.grid},
          {"fixed_range", cfg.fixed_range},
          {"fixed_density", cfg.fixed_density},
          {"space", {{"m", cfg.space.dimension()}}},
          {"channel",
           {{"P_t", cfg.channel.transmit_power()},
            {"C", cfg.channel.constant()},
            {"gamma", cfg.channel.path_loss_exponent()}}},
          {"trials", cfg.trials},
          {"base_seed", cfg.base_seed},
          {"estimators", est},
          {"conditioning", std::string(conditioning_key(cfg.conditioning))},
          {"cde_rank", cfg.cde_rank}};
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig cfg) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (j.contains("sweep")) {
    const auto s = sweep_from_key(field<std::string>(j, "sweep", ""));
    if (!s) throw ConfigError("config field 'sweep' must be DENSITY or RANGE");
    cfg.sweep = *s;
  }
  cfg.grid = field(j, "grid", cfg.grid);
  cfg.fixed_range = field(j, "fixed_range", cfg.fixed_range);
  cfg.fixed_density = field(j, "fixed_density", cfg.fixed_density);
  try {
    if (j.contains("space")) {
      cfg.space = SpaceConfig(field(j.at("space"), "m", cfg.space.dimension()));
    }
    if (j.contains("channel")) {
      const json& ch = j.at("channel");
      cfg.channel = ChannelParams(field(ch, "P_t", cfg.channel.transmit_power()),
                                  field(ch, "C", cfg.channel.constant()),
                                  field(ch, "gamma", cfg.channel.path_loss_exponent()));
    }
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
  cfg.trials = field(j, "trials", cfg.trials);
  cfg.base_seed = field(j, "base_seed", cfg.base_seed);
  if (j.contains("estimators")) {
    cfg.estimators.clear();
    for (const auto& key : field<std::vector<std::string>>(j, "estimators", {})) {
      const auto e = estimator_from_key(key);
      if (!e) throw ConfigError("unknown estimator '" + key + "'");
      cfg.estimators.push_back(*e);
    }
  }
  if (j.contains("conditioning")) {
    const auto c = conditioning_from_key(field<std::string>(j, "conditioning", ""));
    if (!c) throw ConfigError("config field 'conditioning' must be POISSON_COUNT or FIXED_COUNT");
    cfg.conditioning = *c;
  }
  cfg.cde_rank = field(j, "cde_rank", cfg.cde_rank);
  return cfg;
}

}  // namespace nodedens
