#pragma once

#include <cstddef>
#include <span>

#include "nodedens/channel.hpp"
#include "nodedens/space.hpp"

namespace nodedens {

/// N nodes uniform in the m-ball of radius R around the observer.
class FiniteBallModel {
 public:
  FiniteBallModel(std::size_t N, double R, SpaceConfig space);

  std::size_t count() const noexcept { return n_; }
  double radius() const noexcept { return r_; }
  const SpaceConfig& space() const noexcept { return space_; }

  /// F(r) = r^m / R^m on (0, R].
  double cdf_single(double r) const;

 private:
  std::size_t n_;
  double r_;
  SpaceConfig space_;
};

/// Homogeneous PPP of intensity lambda (nodes per m-dimensional volume).
class IntensityModel {
 public:
  IntensityModel(double lambda, SpaceConfig space);

  double density() const noexcept { return lambda_; }
  const SpaceConfig& space() const noexcept { return space_; }
  /// lambda c_m r^m, the expected node count within distance r.
  double mean_count(double r) const;

 private:
  double lambda_;
  SpaceConfig space_;
};

// Every pdf_* is exp of the matching log_pdf_*. A density that underflows is
// returned as 0 (or -inf in log space); arguments outside the support throw
// DomainError.

double log_pdf_single_distance(double r, const FiniteBallModel& model);
double pdf_single_distance(double r, const FiniteBallModel& model);

/// Density of the k-th nearest neighbour distance under a PPP.
double log_pdf_kth_nearest(double r, std::size_t k, const IntensityModel& model);
double pdf_kth_nearest(double r, std::size_t k, const IntensityModel& model);
/// P(k, lambda c_m r^m)
double cdf_kth_nearest(double r, std::size_t k, const IntensityModel& model);

/// Density of the k-th smallest of N in-ball distances.
double log_pdf_kth_nearest_finite(double r, std::size_t k, const FiniteBallModel& model);
double pdf_kth_nearest_finite(double r, std::size_t k, const FiniteBallModel& model);
/// P(at least k of N points within r), a binomial tail.
double cdf_kth_nearest_finite(double r, std::size_t k, const FiniteBallModel& model);

/// Joint density of the k smallest of N in-ball distances, k = r.size().
double log_pdf_joint_finite(const DistanceVector& r, const FiniteBallModel& model);
double pdf_joint_finite(const DistanceVector& r, const FiniteBallModel& model);

/// Joint density of the k nearest PPP distances, k = r.size().
double log_pdf_joint_intensity(const DistanceVector& r, const IntensityModel& model);
double pdf_joint_intensity(const DistanceVector& r, const IntensityModel& model);

/// Density of the k-th strongest received power.
double log_pdf_kth_power(double P, std::size_t k, const IntensityModel& model,
                         const ChannelParams& ch);
double pdf_kth_power(double P, std::size_t k, const IntensityModel& model, const ChannelParams& ch);
/// P(k-th strongest power <= P) = Q(k, lambda c_m r^m) with r = invert_to_distance(P).
double cdf_kth_power(double P, std::size_t k, const IntensityModel& model, const ChannelParams& ch);

/// Joint density of the N strongest powers P_1 > ... > P_N.
double log_pdf_joint_powers(std::span<const double> powers, const IntensityModel& model,
                            const ChannelParams& ch);
double pdf_joint_powers(std::span<const double> powers, const IntensityModel& model,
                        const ChannelParams& ch);

/// Throws DomainError unless powers is non-empty, positive, finite and strictly decreasing.
void require_strictly_decreasing(std::span<const double> powers);

}  // namespace nodedens
