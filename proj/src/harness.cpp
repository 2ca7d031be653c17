#include "nodedens/harness.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "nodedens/errors.hpp"
#include "nodedens/numerics.hpp"
#include "nodedens/sampling.hpp"

namespace nodedens {

std::string_view sweep_key(SweepKind s) { return s == SweepKind::DENSITY ? "DENSITY" : "RANGE"; }

std::optional<SweepKind> sweep_from_key(std::string_view key) {
  if (key == "DENSITY") return SweepKind::DENSITY;
  if (key == "RANGE") return SweepKind::RANGE;
  return std::nullopt;
}

std::string_view conditioning_key(Conditioning c) {
  return c == Conditioning::POISSON_COUNT ? "POISSON_COUNT" : "FIXED_COUNT";
}

std::optional<Conditioning> conditioning_from_key(std::string_view key) {
  if (key == "POISSON_COUNT") return Conditioning::POISSON_COUNT;
  if (key == "FIXED_COUNT") return Conditioning::FIXED_COUNT;
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  if (grid.empty()) throw ConfigError("sweep grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
      throw ConfigError("sweep grid values must be positive");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ConfigError("sweep grid must be strictly increasing");
    }
  }
  if (!(fixed_range > 0.0) || !std::isfinite(fixed_range)) {
    throw ConfigError("fixed_range must be positive");
  }
  if (!(fixed_density > 0.0) || !std::isfinite(fixed_density)) {
    throw ConfigError("fixed_density must be positive");
  }
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (estimators.empty()) throw ConfigError("no estimators selected");
  if (cde_rank < 1) throw ConfigError("cde_rank must be >= 1");
}

bool ExperimentConfig::uses(Estimator e) const {
  return std::find(estimators.begin(), estimators.end(), e) != estimators.end();
}

ExperimentConfig default_density_config() {
  ExperimentConfig cfg;
  cfg.sweep = SweepKind::DENSITY;
  cfg.grid = {0.002, 0.004, 0.006, 0.008, 0.01, 0.012, 0.014, 0.016, 0.018, 0.02};
  return cfg;
}

ExperimentConfig default_range_config() {
  ExperimentConfig cfg;
  cfg.sweep = SweepKind::RANGE;
  cfg.grid = {20.0, 40.0, 60.0, 80.0, 100.0};
  return cfg;
}

bool TrialOutcome::degenerate(Estimator e) const {
  const auto& est = get(e);
  return !est || est->degenerate;
}

TrialOutcome run_trial(double sweep_value, const ExperimentConfig& cfg, RngStream& rng) {
  const bool density_sweep = cfg.sweep == SweepKind::DENSITY;
  const double lambda = density_sweep ? sweep_value : cfg.fixed_density;
  const double R = density_sweep ? cfg.fixed_range : sweep_value;
  const SpaceConfig& space = cfg.space;

  TrialOutcome out;
  DistanceVector distances;
  if (cfg.conditioning == Conditioning::POISSON_COUNT) {
    distances = sample_ppp_distances(lambda, R, space, rng);
    out.lambda_true = lambda;
  } else {
    const double volume = space.ball_volume(R);
    const auto N = static_cast<std::size_t>(std::llround(lambda * volume));
    distances = sample_uniform_ball_distances(N, R, space, rng);
    out.lambda_true = N > 0 ? static_cast<double>(N) / volume : lambda;
  }
  const std::size_t N = distances.size();
  out.sample_size = N;
  if (N == 0) return out;

  auto put = [&](DensityEstimate est) { out.estimates[static_cast<std::size_t>(est.estimator)] = est; };

  const bool any_local =
      cfg.uses(Estimator::IDE_ML) || cfg.uses(Estimator::IDE_CORRECT) || cfg.uses(Estimator::IDE_WRONG);
  if (any_local) {
    std::vector<double> powers(N);
    for (std::size_t i = 0; i < N; ++i) powers[i] = received_power(distances[i], cfg.channel);
    // Distinct distances can in principle round to one power; such a trial has no usable ranks.
    if (std::adjacent_find(powers.begin(), powers.end(), std::less_equal<>()) == powers.end()) {
      const LocalPowerSamples local(std::move(powers), cfg.channel);
      const bool single = N == 1;
      auto local_put = [&](DensityEstimate est) {
        est.degenerate = est.degenerate || single;
        put(est);
      };
      if (cfg.uses(Estimator::IDE_ML)) local_put(estimate_ide_ml(local, space));
      if (cfg.uses(Estimator::IDE_CORRECT)) local_put(estimate_ide(local, space));
      if (cfg.uses(Estimator::IDE_WRONG)) local_put(estimate_ide_wrong(local, space));
    }
  }

  if (cfg.uses(Estimator::CDE)) {
    std::vector<double> shared(N);
    for (auto& p : shared) {
      p = received_power(sample_kth_nearest(out.lambda_true, cfg.cde_rank, space, rng), cfg.channel);
    }
    put(estimate_cde(CooperativePowerSamples(std::move(shared), cfg.cde_rank, cfg.channel), space));
  }
  return out;
}

std::vector<TrialOutcome> run_point(std::size_t point, const ExperimentConfig& cfg) {
  cfg.validate();
  if (point >= cfg.grid.size()) throw ConfigError("grid point index out of range");
  const double value = cfg.grid[point];
  std::vector<TrialOutcome> outcomes(cfg.trials);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t t = begin; t < cfg.trials; t += stride) {
      RngStream rng(cfg.base_seed, trial_stream(point, t));
      outcomes[t] = run_trial(value, cfg, rng);
    }
  };
  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, cfg.trials));
  if (workers <= 1) {
    work(0, 1);
    return outcomes;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  return outcomes;
}

namespace {

// Sorting before the compensated sum makes the result independent of input order.
double sorted_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  NeumaierSum sum;
  for (double t : terms) sum.add(t);
  return sum.value();
}

}  // namespace

double mape(std::span<const double> estimates, double lambda_true) {
  if (estimates.empty()) throw MissingSamples("MAPE of an empty estimate list");
  if (!(lambda_true > 0.0)) throw InvalidParameter("true density must be positive");
  std::vector<double> terms;
  terms.reserve(estimates.size());
  for (double x : estimates) terms.push_back(std::fabs(x - lambda_true) / lambda_true);
  return 100.0 * sorted_sum(std::move(terms)) / static_cast<double>(estimates.size());
}

double rmse(std::span<const double> estimates, double lambda_true) {
  if (estimates.empty()) throw MissingSamples("RMSE of an empty estimate list");
  std::vector<double> terms;
  terms.reserve(estimates.size());
  for (double x : estimates) terms.push_back((x - lambda_true) * (x - lambda_true));
  return std::sqrt(sorted_sum(std::move(terms)) / static_cast<double>(estimates.size()));
}

const MetricsRow* MetricsReport::find(double sweep_value, Estimator e) const {
  for (const auto& row : rows) {
    if (row.sweep_value == sweep_value && row.estimator == e) return &row;
  }
  return nullptr;
}

std::vector<MetricsRow> aggregate(double sweep_value, std::span<const Estimator> estimators,
                                  std::span<const TrialOutcome> outcomes) {
  std::vector<double> sizes;
  sizes.reserve(outcomes.size());
  for (const auto& o : outcomes) sizes.push_back(static_cast<double>(o.sample_size));
  const double n_trials = static_cast<double>(outcomes.size());
  const double mean_size = outcomes.empty() ? 0.0 : sorted_sum(sizes) / n_trials;
  double size_var = 0.0;
  if (outcomes.size() > 1) {
    std::vector<double> sq;
    sq.reserve(sizes.size());
    for (double s : sizes) sq.push_back((s - mean_size) * (s - mean_size));
    size_var = sorted_sum(std::move(sq)) / (n_trials - 1.0);
  }
  // In FIXED_COUNT mode the truth is the same in every trial; in POISSON_COUNT
  // it is the intensity. Either way one value per grid point.
  const double lambda_true = outcomes.empty() ? 0.0 : outcomes.front().lambda_true;

  std::vector<MetricsRow> rows;
  for (Estimator e : estimators) {
    MetricsRow row;
    row.sweep_value = sweep_value;
    row.estimator = e;
    row.lambda_true = lambda_true;
    row.mean_sample_size = mean_size;
    row.sample_size_sd = std::sqrt(size_var);
    std::vector<double> values;
    for (const auto& o : outcomes) {
      if (o.degenerate(e)) {
        ++row.degenerate_trials;
      } else {
        values.push_back(o.get(e)->value);
      }
    }
    row.trials_used = values.size();
    if (values.empty()) {
      row.mape_percent = row.rmse = row.mean_estimate = std::nan("");
    } else {
      row.mape_percent = mape(values, lambda_true);
      row.rmse = rmse(values, lambda_true);
      row.mean_estimate = sorted_sum(values) / static_cast<double>(values.size());
      if (values.size() > 1) {
        std::vector<double> sq;
        sq.reserve(values.size());
        for (double v : values) sq.push_back((v - row.mean_estimate) * (v - row.mean_estimate));
        row.estimate_sd = std::sqrt(sorted_sum(std::move(sq)) / (values.size() - 1.0));
      }
    }
    rows.push_back(row);
  }
  return rows;
}

MetricsReport run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  MetricsReport report;
  report.sweep = cfg.sweep;
  for (std::size_t p = 0; p < cfg.grid.size(); ++p) {
    const auto outcomes = run_point(p, cfg);
    auto rows = aggregate(cfg.grid[p], cfg.estimators, outcomes);
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  return report;
}

MetricsReport sweep_density(const ExperimentConfig& cfg) {
  if (cfg.sweep != SweepKind::DENSITY) throw ConfigError("sweep_density needs a DENSITY config");
  return run_sweep(cfg);
}

MetricsReport sweep_range(const ExperimentConfig& cfg) {
  if (cfg.sweep != SweepKind::RANGE) throw ConfigError("sweep_range needs a RANGE config");
  return run_sweep(cfg);
}

}  // namespace nodedens
