#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nodedens/channel.hpp"
#include "nodedens/space.hpp"

namespace nodedens {

enum class Estimator {
  CDE,          ///< cooperative, c-th rank samples shared by N neighbours
  IDE_ML,       ///< individual, maximum likelihood over the joint local samples
  IDE_CORRECT,  ///< individual, ML with the N/(N-1) bias removed
  IDE_WRONG,    ///< individual, local samples treated as independent marginals
};

inline constexpr Estimator kAllEstimators[] = {Estimator::CDE, Estimator::IDE_ML,
                                               Estimator::IDE_CORRECT, Estimator::IDE_WRONG};

/// "cde", "ide", "ide-ml", "ide-wrong"
std::string_view estimator_key(Estimator e);
std::optional<Estimator> estimator_from_key(std::string_view key);

/// Powers observed locally by one node, strongest first. Rank i is position i.
class LocalPowerSamples {
 public:
  /// Throws MissingSamples when empty and DomainError unless strictly
  /// decreasing, positive and finite.
  LocalPowerSamples(std::vector<double> powers, ChannelParams channel);

  std::size_t size() const noexcept { return p_.size(); }
  std::span<const double> powers() const noexcept { return p_; }
  double weakest() const { return p_.back(); }
  const ChannelParams& channel() const noexcept { return ch_; }

 private:
  std::vector<double> p_;
  ChannelParams ch_;
};

/// c-th strongest power measured by each of N neighbours. Order carries no meaning.
class CooperativePowerSamples {
 public:
  /// Throws MissingSamples when empty, DomainError for non-positive powers,
  /// InvalidParameter for c < 1.
  CooperativePowerSamples(std::vector<double> powers, std::size_t rank, ChannelParams channel);

  std::size_t size() const noexcept { return p_.size(); }
  std::size_t rank() const noexcept { return c_; }
  std::span<const double> powers() const noexcept { return p_; }
  const ChannelParams& channel() const noexcept { return ch_; }

 private:
  std::vector<double> p_;
  std::size_t c_;
  ChannelParams ch_;
};

struct DensityEstimate {
  double value = 0.0;
  Estimator estimator = Estimator::IDE_CORRECT;
  /// Set when the estimate is forced to zero by a single-sample numerator.
  bool degenerate = false;
};

/// (N c - 1) / (c_m sum_i r_i^m)
DensityEstimate estimate_cde(const CooperativePowerSamples& s, const SpaceConfig& space);
/// N / (c_m r_N^m); depends only on the weakest sample.
DensityEstimate estimate_ide_ml(const LocalPowerSamples& s, const SpaceConfig& space);
/// (N - 1) / (c_m r_N^m)
DensityEstimate estimate_ide(const LocalPowerSamples& s, const SpaceConfig& space);
/// N (N + 1) / (2 c_m sum_i r_i^m), the maximizer of loglik_ide_independent.
DensityEstimate estimate_ide_wrong(const LocalPowerSamples& s, const SpaceConfig& space);

/// E[lambda_ML] / lambda = N / (N - 1). Throws DomainError for N < 2.
double ide_ml_bias_factor(std::size_t N);

/// sum_i ln f_c(P^i | lambda), the i.i.d. cooperative log-likelihood.
double loglik_cde(double lambda, const CooperativePowerSamples& s, const SpaceConfig& space);
/// ln of the joint density of the ordered local powers.
double loglik_ide_joint(double lambda, const LocalPowerSamples& s, const SpaceConfig& space);
/// sum_i ln f_i(P_i | lambda): local samples misread as independent rank-i marginals.
double loglik_ide_independent(double lambda, const LocalPowerSamples& s, const SpaceConfig& space);

}  // namespace nodedens
