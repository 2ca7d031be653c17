#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nodedens/channel.hpp"
#include "nodedens/estimators.hpp"
#include "nodedens/rng.hpp"
#include "nodedens/space.hpp"

namespace nodedens {

enum class SweepKind { DENSITY, RANGE };

/// POISSON_COUNT: node count K ~ Poisson(lambda c_m R^m), truth is the intensity.
/// FIXED_COUNT: N = round(lambda c_m R^m) nodes, truth is N / (c_m R^m).
enum class Conditioning { POISSON_COUNT, FIXED_COUNT };

std::string_view sweep_key(SweepKind s);
std::optional<SweepKind> sweep_from_key(std::string_view key);
std::string_view conditioning_key(Conditioning c);
std::optional<Conditioning> conditioning_from_key(std::string_view key);

struct ExperimentConfig {
  SweepKind sweep = SweepKind::DENSITY;
  std::vector<double> grid;
  double fixed_range = 100.0;   // m, DENSITY sweeps
  double fixed_density = 0.01;  // nodes / m^m, RANGE sweeps
  SpaceConfig space{2};
  ChannelParams channel{1.0, 1.0, 4.0};
  std::size_t trials = 10000;
  std::uint64_t base_seed = 1;
  std::vector<Estimator> estimators{std::begin(kAllEstimators), std::end(kAllEstimators)};
  Conditioning conditioning = Conditioning::POISSON_COUNT;
  std::size_t cde_rank = 1;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;

  /// Throws ConfigError on an empty or non-increasing grid, non-positive
  /// values, zero trials, an empty estimator set or cde_rank < 1.
  void validate() const;
  bool uses(Estimator e) const;
};

/// Density sweep defaults: R = 100 m, lambda grid 0.002:0.002:0.02.
ExperimentConfig default_density_config();
/// Range sweep defaults: lambda = 0.01, R grid 20:20:100 m.
ExperimentConfig default_range_config();

struct TrialOutcome {
  std::size_t sample_size = 0;
  double lambda_true = 0.0;
  /// Indexed by static_cast<size_t>(Estimator); empty when not requested or
  /// when the realization had no neighbours.
  std::array<std::optional<DensityEstimate>, 4> estimates{};

  const std::optional<DensityEstimate>& get(Estimator e) const {
    return estimates[static_cast<std::size_t>(e)];
  }
  /// True when the estimator produced nothing usable for this trial.
  bool degenerate(Estimator e) const;
};

/// One Monte Carlo trial at a sweep value (lambda for DENSITY, R for RANGE).
/// The C-DE is fed N independent cde_rank-th nearest samples, one per
/// neighbour, drawn at the trial's true density.
TrialOutcome run_trial(double sweep_value, const ExperimentConfig& cfg, RngStream& rng);

/// All trials of grid point `point`; trial t uses RngStream(base_seed, trial_stream(point, t)).
std::vector<TrialOutcome> run_point(std::size_t point, const ExperimentConfig& cfg);

/// 100 * mean(|x - truth| / truth). Throws MissingSamples when empty.
double mape(std::span<const double> estimates, double lambda_true);
/// sqrt(mean((x - truth)^2)). Throws MissingSamples when empty.
double rmse(std::span<const double> estimates, double lambda_true);

struct MetricsRow {
  double sweep_value = 0.0;
  Estimator estimator = Estimator::IDE_CORRECT;
  double lambda_true = 0.0;
  double mape_percent = 0.0;
  double rmse = 0.0;
  double mean_estimate = 0.0;
  std::size_t trials_used = 0;
  std::size_t degenerate_trials = 0;
  double mean_sample_size = 0.0;
  // Not serialized.
  double estimate_sd = 0.0;
  double sample_size_sd = 0.0;
};

struct MetricsReport {
  SweepKind sweep = SweepKind::DENSITY;
  std::vector<MetricsRow> rows;

  const MetricsRow* find(double sweep_value, Estimator e) const;
};

/// Per-estimator metrics for one grid point. Independent of the order of `outcomes`.
std::vector<MetricsRow> aggregate(double sweep_value, std::span<const Estimator> estimators,
                                  std::span<const TrialOutcome> outcomes);

/// Throws ConfigError unless cfg.sweep == DENSITY.
MetricsReport sweep_density(const ExperimentConfig& cfg);
/// Throws ConfigError unless cfg.sweep == RANGE.
MetricsReport sweep_range(const ExperimentConfig& cfg);
MetricsReport run_sweep(const ExperimentConfig& cfg);

}  // namespace nodedens
