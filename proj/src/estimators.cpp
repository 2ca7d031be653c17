#include "nodedens/estimators.hpp"

#include <cmath>
#include <string>

#include "nodedens/dos.hpp"
#include "nodedens/errors.hpp"
#include "nodedens/numerics.hpp"

namespace nodedens {

namespace {

double sum_measures(std::span<const double> powers, const ChannelParams& ch,
                    const SpaceConfig& space) {
  NeumaierSum sum;
  for (double p : powers) sum.add(distance_measure(p, ch, space));
  return sum.value();
}

void require_density(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("density must be positive and finite");
  }
}

}  // namespace

std::string_view estimator_key(Estimator e) {
  switch (e) {
    case Estimator::CDE: return "cde";
    case Estimator::IDE_ML: return "ide-ml";
    case Estimator::IDE_CORRECT: return "ide";
    case Estimator::IDE_WRONG: return "ide-wrong";
  }
  return "unknown";
}

std::optional<Estimator> estimator_from_key(std::string_view key) {
  for (Estimator e : kAllEstimators) {
    if (estimator_key(e) == key) return e;
  }
  return std::nullopt;
}

LocalPowerSamples::LocalPowerSamples(std::vector<double> powers, ChannelParams channel)
    : p_(std::move(powers)), ch_(channel) {
  if (p_.empty()) throw MissingSamples("local sample set is empty");
  require_strictly_decreasing(p_);
}

CooperativePowerSamples::CooperativePowerSamples(std::vector<double> powers, std::size_t rank,
                                                 ChannelParams channel)
    : p_(std::move(powers)), c_(rank), ch_(channel) {
  if (p_.empty()) throw MissingSamples("cooperative sample set is empty");
  if (c_ < 1) throw InvalidParameter("cooperative rank c must be >= 1");
  for (std::size_t i = 0; i < p_.size(); ++i) {
    if (!(p_[i] > 0.0) || !std::isfinite(p_[i])) {
      throw DomainError("cooperative power " + std::to_string(i + 1) + " is not positive");
    }
  }
}

DensityEstimate estimate_cde(const CooperativePowerSamples& s, const SpaceConfig& space) {
  const double numerator = static_cast<double>(s.size() * s.rank()) - 1.0;
  const double denom = space.ball_coeff() * sum_measures(s.powers(), s.channel(), space);
  return {numerator / denom, Estimator::CDE, numerator == 0.0};
}

DensityEstimate estimate_ide_ml(const LocalPowerSamples& s, const SpaceConfig& space) {
  const double denom = space.ball_coeff() * distance_measure(s.weakest(), s.channel(), space);
  return {static_cast<double>(s.size()) / denom, Estimator::IDE_ML, false};
}

DensityEstimate estimate_ide(const LocalPowerSamples& s, const SpaceConfig& space) {
  const double N = static_cast<double>(s.size());
  const double denom = space.ball_coeff() * distance_measure(s.weakest(), s.channel(), space);
  return {(N - 1.0) / denom, Estimator::IDE_CORRECT, s.size() == 1};
}

DensityEstimate estimate_ide_wrong(const LocalPowerSamples& s, const SpaceConfig& space) {
  const double N = static_cast<double>(s.size());
  const double denom = 2.0 * space.ball_coeff() * sum_measures(s.powers(), s.channel(), space);
  return {N * (N + 1.0) / denom, Estimator::IDE_WRONG, false};
}

double ide_ml_bias_factor(std::size_t N) {
  if (N < 2) throw DomainError("bias factor is unbounded for N < 2");
  const double n = static_cast<double>(N);
  return n / (n - 1.0);
}

double loglik_cde(double lambda, const CooperativePowerSamples& s, const SpaceConfig& space) {
  require_density(lambda);
  const IntensityModel model(lambda, space);
  NeumaierSum sum;
  for (double p : s.powers()) sum.add(log_pdf_kth_power(p, s.rank(), model, s.channel()));
  return sum.value();
}

double loglik_ide_joint(double lambda, const LocalPowerSamples& s, const SpaceConfig& space) {
  require_density(lambda);
  return log_pdf_joint_powers(s.powers(), IntensityModel(lambda, space), s.channel());
}

double loglik_ide_independent(double lambda, const LocalPowerSamples& s,
                              const SpaceConfig& space) {
  require_density(lambda);
  const IntensityModel model(lambda, space);
  NeumaierSum sum;
  const auto powers = s.powers();
  for (std::size_t i = 0; i < powers.size(); ++i) {
    sum.add(log_pdf_kth_power(powers[i], i + 1, model, s.channel()));
  }
  return sum.value();
}

}  // namespace nodedens
