#include "cli/commands.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nodedens/dos.hpp"
#include "nodedens/errors.hpp"
#include "nodedens/estimators.hpp"
#include "nodedens/harness.hpp"
#include "nodedens/report.hpp"
#include "nodedens/sampling.hpp"
#include "nodedens/validation.hpp"
#include "nodedens/version.hpp"

namespace nodedens::cli {

using json = nlohmann::ordered_json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> parse_number(std::string_view text) {
  double v = 0.0;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

// Round to 12 significant digits so that start:step:stop grids print cleanly.
double tidy(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return std::stod(os.str());
}

std::vector<double> parse_grid(const std::string& text) {
  auto number = [&](const std::string& s) {
    const auto v = parse_number(s);
    if (!v) throw ConfigError("bad grid value '" + s + "'");
    return *v;
  };
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("grid range must be start:step:stop");
    const double start = number(parts[0]);
    const double step = number(parts[1]);
    const double stop = number(parts[2]);
    if (!(step > 0.0) || stop < start) throw ConfigError("grid range needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) grid.push_back(tidy(start + i * step));
  } else {
    for (const auto& p : split(text, ',')) grid.push_back(number(p));
  }
  return grid;
}

std::vector<Estimator> parse_estimators(const std::string& text) {
  std::vector<Estimator> chosen;
  for (const auto& key : split(text, ',')) {
    const auto e = estimator_from_key(key);
    if (!e) throw ConfigError("unknown estimator '" + key + "' (expected cde, ide, ide-ml, ide-wrong)");
    chosen.push_back(*e);
  }
  // Canonical order keeps row order independent of how the list was typed.
  std::vector<Estimator> ordered;
  for (Estimator e : kAllEstimators) {
    if (std::find(chosen.begin(), chosen.end(), e) != chosen.end()) ordered.push_back(e);
  }
  return ordered;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  const auto parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

// Channel and dimension flags shared by several subcommands.
struct ModelFlags {
  int m = 2;
  double gamma = 4.0;
  double pt = 1.0;
  double c_const = 1.0;
  CLI::Option* m_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;
  CLI::Option* pt_opt = nullptr;
  CLI::Option* c_opt = nullptr;

  void attach(CLI::App* app) {
    m_opt = app->add_option("--m", m, "ambient dimension");
    gamma_opt = app->add_option("--gamma", gamma, "path-loss exponent");
    pt_opt = app->add_option("--pt", pt, "transmit power (W)");
    c_opt = app->add_option("--c-const", c_const, "non-distance propagation constant C");
  }
  SpaceConfig space() const { return SpaceConfig(m); }
  ChannelParams channel() const { return ChannelParams(pt, c_const, gamma); }
};

struct SweepFlags {
  ModelFlags model;
  std::string config_path;
  double lambda = 0.0;
  double range = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string grid;
  std::string estimators;
  std::size_t rank = 1;
  std::string conditioning;
  std::string out;
  std::string format = "csv";
  unsigned threads = 0;
  CLI::Option* lambda_opt = nullptr;
  CLI::Option* range_opt = nullptr;
  CLI::Option* trials_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* grid_opt = nullptr;
  CLI::Option* est_opt = nullptr;
  CLI::Option* rank_opt = nullptr;
  CLI::Option* cond_opt = nullptr;

  void attach(CLI::App* app) {
    model.attach(app);
    app->add_option("--config", config_path, "JSON config (ExperimentConfig fields or a run manifest)");
    lambda_opt = app->add_option("--lambda", lambda, "node density (range sweep)");
    range_opt = app->add_option("--range", range, "sampling range in m (density sweep)");
    trials_opt = app->add_option("--trials", trials, "Monte Carlo trials per grid point");
    seed_opt = app->add_option("--seed", seed, "base seed");
    grid_opt = app->add_option("--grid", grid, "comma list or start:step:stop");
    est_opt = app->add_option("--estimators", estimators, "comma list of cde,ide,ide-ml,ide-wrong");
    rank_opt = app->add_option("--rank", rank, "rank c of the cooperative samples");
    cond_opt = app->add_option("--conditioning", conditioning, "POISSON_COUNT or FIXED_COUNT");
    app->add_option("--out", out, "output prefix; writes <out>.csv, <out>.json, <out>.manifest.json");
    app->add_option("--format", format, "stdout format when --out is absent")
        ->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--threads", threads, "worker threads (0 = hardware)");
  }

  ExperimentConfig build(ExperimentConfig cfg) const {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot read config '" + config_path + "'");
      json j;
      try {
        j = json::parse(f);
      } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
      const SweepKind expected = cfg.sweep;
      cfg = config_from_json(j.contains("config") ? j.at("config") : j, cfg);
      if (cfg.sweep != expected) throw ConfigError("config sweep kind does not match the subcommand");
    }
    try {
      if (model.m_opt->count()) cfg.space = SpaceConfig(model.m);
      if (model.gamma_opt->count() || model.pt_opt->count() || model.c_opt->count()) {
        cfg.channel = ChannelParams(model.pt_opt->count() ? model.pt : cfg.channel.transmit_power(),
                                    model.c_opt->count() ? model.c_const : cfg.channel.constant(),
                                    model.gamma_opt->count() ? model.gamma
                                                             : cfg.channel.path_loss_exponent());
      }
    } catch (const InvalidParameter& e) {
      throw ConfigError(e.what());
    }
    if (lambda_opt->count()) cfg.fixed_density = lambda;
    if (range_opt->count()) cfg.fixed_range = range;
    if (trials_opt->count()) cfg.trials = trials;
    if (seed_opt->count()) cfg.base_seed = seed;
    if (grid_opt->count()) cfg.grid = parse_grid(grid);
    if (est_opt->count()) cfg.estimators = parse_estimators(estimators);
    if (rank_opt->count()) cfg.cde_rank = rank;
    if (cond_opt->count()) {
      const auto c = conditioning_from_key(conditioning);
      if (!c) throw ConfigError("--conditioning must be POISSON_COUNT or FIXED_COUNT");
      cfg.conditioning = *c;
    }
    cfg.threads = threads;
    cfg.validate();
    return cfg;
  }
};

int do_sweep(const char* command, const SweepFlags& flags, ExperimentConfig base, std::ostream& out,
             std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = flags.build(std::move(base));
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  const MetricsReport report = run_sweep(cfg);
  const std::string csv = report_to_csv(report);
  const std::string js = report_to_json(report).dump(2) + "\n";
  if (flags.out.empty()) {
    out << (flags.format == "json" ? js : csv);
    return kOk;
  }
  const std::string csv_path = flags.out + ".csv";
  const std::string json_path = flags.out + ".json";
  const std::string manifest_path = flags.out + ".manifest.json";
  write_file(csv_path, csv);
  write_file(json_path, js);
  json manifest = {{"tool", "nodedens"},
                   {"version", kVersion},
                   {"command", command},
                   {"base_seed", cfg.base_seed},
                   {"timestamp", utc_timestamp()},
                   {"config", config_to_json(cfg)},
                   {"outputs", {{"csv", csv_path}, {"json", json_path}}}};
  write_file(manifest_path, manifest.dump(2) + "\n");
  err << "wrote " << csv_path << ", " << json_path << ", " << manifest_path << '\n';
  return kOk;
}

std::vector<std::vector<NumberedValue>> parse_tuple_lines(std::istream& in) {
  std::vector<std::vector<NumberedValue>> rows;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::vector<NumberedValue> row;
    for (const auto& field : split(t, ',')) {
      const auto v = parse_number(field);
      if (!v) throw DataError("line " + std::to_string(n) + ": cannot parse '" + field + "' as a number");
      row.push_back({n, *v});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Named distribution plus its parameters, shared by `sample` and `validate ks`.
struct DistributionFlags {
  ModelFlags model;
  std::size_t k = 0;
  double lambda = 0.0;
  std::size_t points = 0;
  double range = 0.0;
  CLI::Option* k_opt = nullptr;
  CLI::Option* lambda_opt = nullptr;
  CLI::Option* points_opt = nullptr;
  CLI::Option* range_opt = nullptr;

  void attach(CLI::App* app) {
    model.attach(app);
    k_opt = app->add_option("--k", k, "rank (or number of ranks for joint-dos)");
    lambda_opt = app->add_option("--lambda", lambda, "node density");
    points_opt = app->add_option("--points", points, "node count N inside the ball");
    range_opt = app->add_option("--range", range, "ball radius R (m)");
  }

  void require(CLI::Option* opt, const char* name, const std::string& dist) const {
    if (!opt->count()) throw CLI::ValidationError(dist, std::string("missing required ") + name);
  }
};

int do_sample(const std::string& dist, const DistributionFlags& f, std::size_t count,
              std::uint64_t seed, std::ostream& out) {
  const SpaceConfig space = f.model.space();
  auto emit = [&](std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out << ',';
      out << format_double(values[i]);
    }
    out << '\n';
  };
  std::function<void(RngStream&)> draw;
  if (dist == "kth-nearest") {
    f.require(f.k_opt, "--k", dist);
    f.require(f.lambda_opt, "--lambda", dist);
    draw = [&](RngStream& rng) {
      const double r = sample_kth_nearest(f.lambda, f.k, space, rng);
      emit(std::span(&r, 1));
    };
  } else if (dist == "joint-dos") {
    f.require(f.k_opt, "--k", dist);
    f.require(f.lambda_opt, "--lambda", dist);
    draw = [&](RngStream& rng) { emit(sample_joint_dos(f.lambda, f.k, space, rng).values()); };
  } else if (dist == "uniform-ball") {
    f.require(f.points_opt, "--points", dist);
    f.require(f.range_opt, "--range", dist);
    draw = [&](RngStream& rng) {
      emit(sample_uniform_ball_distances(f.points, f.range, space, rng).values());
    };
  } else if (dist == "kth-nearest-finite") {
    f.require(f.k_opt, "--k", dist);
    f.require(f.points_opt, "--points", dist);
    f.require(f.range_opt, "--range", dist);
    if (f.k < 1 || f.k > f.points) throw CLI::ValidationError(dist, "--k must lie in [1, --points]");
    draw = [&](RngStream& rng) {
      const double r = sample_uniform_ball_distances(f.points, f.range, space, rng)[f.k - 1];
      emit(std::span(&r, 1));
    };
  } else if (dist == "ppp") {
    f.require(f.lambda_opt, "--lambda", dist);
    f.require(f.range_opt, "--range", dist);
    draw = [&](RngStream& rng) { emit(sample_ppp_distances(f.lambda, f.range, space, rng).values()); };
  } else if (dist == "kth-power") {
    f.require(f.k_opt, "--k", dist);
    f.require(f.lambda_opt, "--lambda", dist);
    const ChannelParams ch = f.model.channel();
    draw = [&, ch](RngStream& rng) {
      const double p = received_power(sample_kth_nearest(f.lambda, f.k, space, rng), ch);
      emit(std::span(&p, 1));
    };
  } else {
    throw CLI::ValidationError("sample", "unknown distribution '" + dist + "'");
  }
  for (std::size_t i = 0; i < count; ++i) {
    RngStream rng(seed, i);
    draw(rng);
  }
  return kOk;
}

std::function<double(double)> cdf_for(const std::string& dist, const DistributionFlags& f) {
  const SpaceConfig space = f.model.space();
  if (dist == "kth-nearest") {
    f.require(f.k_opt, "--k", dist);
    f.require(f.lambda_opt, "--lambda", dist);
    const IntensityModel model(f.lambda, space);
    const std::size_t k = f.k;
    return [model, k](double r) { return cdf_kth_nearest(r, k, model); };
  }
  if (dist == "kth-nearest-finite") {
    f.require(f.k_opt, "--k", dist);
    f.require(f.points_opt, "--points", dist);
    f.require(f.range_opt, "--range", dist);
    const FiniteBallModel model(f.points, f.range, space);
    const std::size_t k = f.k;
    return [model, k](double r) { return cdf_kth_nearest_finite(r, k, model); };
  }
  if (dist == "kth-power") {
    f.require(f.k_opt, "--k", dist);
    f.require(f.lambda_opt, "--lambda", dist);
    const IntensityModel model(f.lambda, space);
    const ChannelParams ch = f.model.channel();
    const std::size_t k = f.k;
    return [model, ch, k](double p) { return cdf_kth_power(p, k, model, ch); };
  }
  throw CLI::ValidationError("validate", "ks supports kth-nearest, kth-nearest-finite, kth-power");
}

void print_checks(const std::vector<CheckResult>& checks, std::ostream& out) {
  for (const auto& c : checks) {
    out << (c.passed ? "PASS" : "FAIL") << '\t' << c.name << '\t' << c.detail << '\n';
  }
}

}  // namespace

std::vector<NumberedValue> parse_power_lines(std::istream& in) {
  std::vector<NumberedValue> values;
  for (auto& row : parse_tuple_lines(in)) {
    if (row.size() != 1) {
      throw DataError("line " + std::to_string(row.front().line) + ": expected one value per line");
    }
    values.push_back(row.front());
  }
  return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Node-density estimation toolkit for random wireless networks", "nodedens"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SweepFlags density_flags;
  auto* density_cmd = app.add_subcommand("sweep-density", "MAPE/RMSE versus density at a fixed range");
  density_flags.attach(density_cmd);

  SweepFlags range_flags;
  auto* range_cmd = app.add_subcommand("sweep-range", "MAPE/RMSE versus sampling range at a fixed density");
  range_flags.attach(range_cmd);

  ModelFlags estimate_model;
  std::string estimate_input;
  std::string estimate_mode = "local";
  std::size_t estimate_rank = 0;
  auto* estimate_cmd = app.add_subcommand("estimate", "estimate density from a file of received powers");
  estimate_model.attach(estimate_cmd);
  estimate_cmd->add_option("input", estimate_input, "file with one power (W) per line, '-' for stdin")
      ->required();
  estimate_cmd->add_option("--mode", estimate_mode, "local or cooperative")
      ->check(CLI::IsMember({"local", "cooperative"}));
  auto* rank_opt = estimate_cmd->add_option("--rank", estimate_rank, "rank c of cooperative samples");

  std::string suite;
  std::uint64_t validate_seed = 20160219;
  DistributionFlags ks_flags;
  std::string ks_dist;
  std::string ks_input = "-";
  std::size_t ks_column = 0;
  auto* validate_cmd = app.add_subcommand("validate", "run a validation suite");
  validate_cmd->add_option("suite", suite, "distributions, estimators, all, or ks")->required();
  validate_cmd->add_option("--seed", validate_seed, "seed");
  validate_cmd->add_option("--dist", ks_dist, "ks: reference distribution");
  validate_cmd->add_option("--input", ks_input, "ks: sample file, '-' for stdin");
  validate_cmd->add_option("--column", ks_column, "ks: 1-based column of comma-separated input (default last)");
  ks_flags.attach(validate_cmd);

  std::string sample_dist;
  DistributionFlags sample_flags;
  std::size_t sample_count = 1;
  std::uint64_t sample_seed = 1;
  auto* sample_cmd = app.add_subcommand("sample", "draw from a distance or power distribution");
  sample_cmd->add_option("distribution", sample_dist,
                         "kth-nearest, joint-dos, uniform-ball, kth-nearest-finite, ppp, kth-power")
      ->required();
  sample_cmd->add_option("-n", sample_count, "number of draws");
  sample_cmd->add_option("--seed", sample_seed, "seed");
  sample_flags.attach(sample_cmd);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*density_cmd) return do_sweep("sweep-density", density_flags, default_density_config(), out, err);
    if (*range_cmd) return do_sweep("sweep-range", range_flags, default_range_config(), out, err);

    if (*estimate_cmd) {
      SpaceConfig space;
      std::optional<ChannelParams> ch;
      try {
        space = estimate_model.space();
        ch = estimate_model.channel();
      } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
      }
      if (estimate_mode == "cooperative" && !rank_opt->count()) {
        err << "error: cooperative mode requires --rank\n";
        return kUsage;
      }
      std::vector<NumberedValue> values;
      if (estimate_input == "-") {
        values = parse_power_lines(std::cin);
      } else {
        std::ifstream f(estimate_input);
        if (!f) throw DataError("cannot open '" + estimate_input + "'");
        values = parse_power_lines(f);
      }
      if (values.empty()) throw DataError("no samples in input");
      std::vector<double> powers;
      for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& v = values[i];
        if (!(v.value > 0.0) || !std::isfinite(v.value)) {
          throw DataError("line " + std::to_string(v.line) + ": power must be positive and finite");
        }
        if (estimate_mode == "local" && i > 0 && !(v.value < values[i - 1].value)) {
          throw DataError("line " + std::to_string(v.line) +
                          ": rank violation, local powers must be strictly decreasing");
        }
        powers.push_back(v.value);
      }
      json result = json::object();
      if (estimate_mode == "local") {
        const LocalPowerSamples s(std::move(powers), *ch);
        result[std::string(estimator_key(Estimator::IDE_ML))] = estimate_ide_ml(s, space).value;
        const auto ide = estimate_ide(s, space);
        result[std::string(estimator_key(Estimator::IDE_CORRECT))] = ide.value;
        result[std::string(estimator_key(Estimator::IDE_WRONG))] = estimate_ide_wrong(s, space).value;
        if (ide.degenerate) err << "warning: single local sample, unbiased I-DE is degenerate (0)\n";
      } else {
        if (estimate_rank < 1) {
          err << "error: --rank must be >= 1\n";
          return kUsage;
        }
        const CooperativePowerSamples s(std::move(powers), estimate_rank, *ch);
        const auto cde = estimate_cde(s, space);
        result[std::string(estimator_key(Estimator::CDE))] = cde.value;
        if (cde.degenerate) err << "warning: N*c = 1, C-DE is degenerate (0)\n";
      }
      out << result.dump() << '\n';
      return kOk;
    }

    if (*validate_cmd) {
      if (suite == "ks") {
        if (ks_dist.empty()) {
          err << "error: validate ks requires --dist\n";
          return kUsage;
        }
        const auto cdf = cdf_for(ks_dist, ks_flags);
        std::vector<std::vector<NumberedValue>> rows;
        if (ks_input == "-") {
          rows = parse_tuple_lines(std::cin);
        } else {
          std::ifstream f(ks_input);
          if (!f) throw DataError("cannot open '" + ks_input + "'");
          rows = parse_tuple_lines(f);
        }
        std::vector<double> samples;
        for (const auto& row : rows) {
          const std::size_t col = ks_column ? ks_column : row.size();
          if (col > row.size()) {
            throw DataError("line " + std::to_string(row.front().line) + ": missing column " +
                            std::to_string(col));
          }
          samples.push_back(row[col - 1].value);
        }
        const KsResult ks = ks_test(samples, cdf);
        const bool pass = ks.p_value > 0.01;
        std::ostringstream detail;
        detail << "n=" << ks.n << " D=" << format_double(ks.d_statistic)
               << " p=" << format_double(ks.p_value);
        print_checks({{"ks-" + ks_dist, pass, detail.str()}}, out);
        return pass ? kOk : kValidationFailed;
      }
      std::vector<CheckResult> checks;
      try {
        checks = run_suite(suite, validate_seed);
      } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
      }
      print_checks(checks, out);
      const bool ok = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
      return ok ? kOk : kValidationFailed;
    }

    if (*sample_cmd) {
      try {
        return do_sample(sample_dist, sample_flags, sample_count, sample_seed, out);
      } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
      }
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}

}  // namespace nodedens::cli
