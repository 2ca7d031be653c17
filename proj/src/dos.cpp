#include "nodedens/dos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nodedens/errors.hpp"
#include "nodedens/special.hpp"

namespace nodedens {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_rank(std::size_t k) {
  if (k < 1) throw DomainError("rank k must be >= 1");
}

void require_in_ball(double r, const FiniteBallModel& model) {
  if (!(r > 0.0 && r <= model.radius())) {
    throw DomainError("distance " + std::to_string(r) + " outside (0, R]");
  }
}

// (n - k) * ln(1 - F) with the convention 0 * ln 0 = 0.
double log_survival_power(double F, std::size_t exponent) {
  if (exponent == 0) return 0.0;
  if (F >= 1.0) return kNegInf;
  return static_cast<double>(exponent) * std::log1p(-F);
}

}  // namespace

FiniteBallModel::FiniteBallModel(std::size_t N, double R, SpaceConfig space)
    : n_(N), r_(R), space_(space) {
  if (N < 1) throw InvalidParameter("finite ball model needs N >= 1");
  if (!(R > 0.0) || !std::isfinite(R)) throw InvalidParameter("ball radius must be positive");
}

double FiniteBallModel::cdf_single(double r) const {
  if (r <= 0.0) return 0.0;
  if (r >= r_) return 1.0;
  return std::pow(r / r_, space_.dimension());
}

IntensityModel::IntensityModel(double lambda, SpaceConfig space) : lambda_(lambda), space_(space) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidParameter("density must be positive and finite");
  }
}

double IntensityModel::mean_count(double r) const { return lambda_ * space_.ball_volume(r); }

double log_pdf_single_distance(double r, const FiniteBallModel& model) {
  require_in_ball(r, model);
  const int m = model.space().dimension();
  return std::log(static_cast<double>(m)) + (m - 1) * std::log(r) - m * std::log(model.radius());
}

double pdf_single_distance(double r, const FiniteBallModel& model) {
  return std::exp(log_pdf_single_distance(r, model));
}

double log_pdf_kth_nearest(double r, std::size_t k, const IntensityModel& model) {
  require_rank(k);
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("distance must be positive and finite");
  const int m = model.space().dimension();
  const double log_x = std::log(model.density() * model.space().ball_coeff()) + m * std::log(r);
  const double x = std::exp(log_x);
  const double kd = static_cast<double>(k);
  return std::log(static_cast<double>(m)) - std::log(r) - x + kd * log_x - special::log_gamma(kd);
}

double pdf_kth_nearest(double r, std::size_t k, const IntensityModel& model) {
  return std::exp(log_pdf_kth_nearest(r, k, model));
}

double cdf_kth_nearest(double r, std::size_t k, const IntensityModel& model) {
  require_rank(k);
  if (!(r >= 0.0)) throw DomainError("distance must be non-negative");
  return special::gamma_p(static_cast<double>(k), model.mean_count(r));
}

double log_pdf_kth_nearest_finite(double r, std::size_t k, const FiniteBallModel& model) {
  require_rank(k);
  const std::size_t N = model.count();
  if (k > N) throw DomainError("rank k exceeds node count N");
  require_in_ball(r, model);
  const int m = model.space().dimension();
  const double log_F = m * (std::log(r) - std::log(model.radius()));
  const double F = std::exp(log_F);
  const double Nd = static_cast<double>(N);
  const double kd = static_cast<double>(k);
  const double log_coeff =
      std::lgamma(Nd + 1.0) - std::lgamma(kd) - std::lgamma(Nd - kd + 1.0);
  const double lower = (k == 1) ? 0.0 : (kd - 1.0) * log_F;
  return log_coeff + lower + log_survival_power(F, N - k) + log_pdf_single_distance(r, model);
}

double pdf_kth_nearest_finite(double r, std::size_t k, const FiniteBallModel& model) {
  return std::exp(log_pdf_kth_nearest_finite(r, k, model));
}

double cdf_kth_nearest_finite(double r, std::size_t k, const FiniteBallModel& model) {
  require_rank(k);
  const std::size_t N = model.count();
  if (k > N) throw DomainError("rank k exceeds node count N");
  if (!(r >= 0.0)) throw DomainError("distance must be non-negative");
  const double F = model.cdf_single(r);
  if (F <= 0.0) return 0.0;
  if (F >= 1.0) return 1.0;
  const double log_F = std::log(F);
  const double log_1mF = std::log1p(-F);
  const double Nd = static_cast<double>(N);
  double sum = 0.0;
  for (std::size_t j = k; j <= N; ++j) {
    const double jd = static_cast<double>(j);
    sum += std::exp(special::log_binomial(Nd, jd) + jd * log_F + (Nd - jd) * log_1mF);
  }
  return std::min(sum, 1.0);
}

double log_pdf_joint_finite(const DistanceVector& r, const FiniteBallModel& model) {
  const std::size_t k = r.size();
  if (k == 0) throw DomainError("joint density needs at least one distance");
  const std::size_t N = model.count();
  if (k > N) throw DomainError("more distances than nodes in the ball");
  if (r.back() > model.radius()) throw DomainError("largest distance exceeds the ball radius");
  const int m = model.space().dimension();
  const double Nd = static_cast<double>(N);
  const double kd = static_cast<double>(k);
  double log_density = std::lgamma(Nd + 1.0) - std::lgamma(Nd - kd + 1.0);
  log_density += log_survival_power(model.cdf_single(r.back()), N - k);
  const double log_m = std::log(static_cast<double>(m));
  const double log_R = std::log(model.radius());
  for (double ri : r) log_density += log_m + (m - 1) * std::log(ri) - m * log_R;
  return log_density;
}

double pdf_joint_finite(const DistanceVector& r, const FiniteBallModel& model) {
  return std::exp(log_pdf_joint_finite(r, model));
}

double log_pdf_joint_intensity(const DistanceVector& r, const IntensityModel& model) {
  const std::size_t k = r.size();
  if (k == 0) throw DomainError("joint density needs at least one distance");
  const int m = model.space().dimension();
  const double lc = model.density() * model.space().ball_coeff();
  double log_density = -model.mean_count(r.back()) + static_cast<double>(k) * std::log(m * lc);
  if (m != 1) {
    for (double ri : r) log_density += (m - 1) * std::log(ri);
  }
  return log_density;
}

double pdf_joint_intensity(const DistanceVector& r, const IntensityModel& model) {
  return std::exp(log_pdf_joint_intensity(r, model));
}

double log_pdf_kth_power(double P, std::size_t k, const IntensityModel& model,
                         const ChannelParams& ch) {
  require_rank(k);
  const double lc = model.density() * model.space().ball_coeff();
  // t = lambda c_m (C P_t / P)^{m/gamma}, the mean count inside the implied distance.
  const double log_t = std::log(lc) + std::log(distance_measure(P, ch, model.space()));
  const double t = std::exp(log_t);
  const double kd = static_cast<double>(k);
  return std::log(static_cast<double>(model.space().dimension())) + kd * log_t - t -
         std::log(ch.path_loss_exponent()) - std::log(P) - special::log_gamma(kd);
}

double pdf_kth_power(double P, std::size_t k, const IntensityModel& model, const ChannelParams& ch) {
  return std::exp(log_pdf_kth_power(P, k, model, ch));
}

double cdf_kth_power(double P, std::size_t k, const IntensityModel& model, const ChannelParams& ch) {
  require_rank(k);
  if (P == 0.0) return 0.0;
  const double t = model.density() * model.space().ball_coeff() * distance_measure(P, ch, model.space());
  return special::gamma_q(static_cast<double>(k), t);
}

void require_strictly_decreasing(std::span<const double> powers) {
  if (powers.empty()) throw DomainError("power vector is empty");
  for (std::size_t i = 0; i < powers.size(); ++i) {
    if (!(powers[i] > 0.0) || !std::isfinite(powers[i])) {
      throw DomainError("power " + std::to_string(i + 1) + " is not positive and finite");
    }
    if (i > 0 && !(powers[i] < powers[i - 1])) {
      throw DomainError("powers must be strictly decreasing (rank " + std::to_string(i + 1) + ")");
    }
  }
}

double log_pdf_joint_powers(std::span<const double> powers, const IntensityModel& model,
                            const ChannelParams& ch) {
  require_strictly_decreasing(powers);
  const int m = model.space().dimension();
  const double gamma = ch.path_loss_exponent();
  const double exponent = m / gamma;
  const double Nd = static_cast<double>(powers.size());
  const double lc = model.density() * model.space().ball_coeff();
  double log_density = Nd * std::log(m * lc) + Nd * exponent * std::log(ch.reference_power()) -
                       Nd * std::log(gamma) -
                       lc * distance_measure(powers.back(), ch, model.space());
  for (double p : powers) log_density -= (exponent + 1.0) * std::log(p);
  return log_density;
}

double pdf_joint_powers(std::span<const double> powers, const IntensityModel& model,
                        const ChannelParams& ch) {
  return std::exp(log_pdf_joint_powers(powers, model, ch));
}

}  // namespace nodedens
