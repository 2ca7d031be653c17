#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nodedens {

/// Volume of the unit m-ball, pi^{m/2} / Gamma(m/2 + 1).
/// Throws InvalidParameter for m < 1.
double ball_volume_coeff(int m);

/// Ambient dimension together with its unit-ball volume coefficient.
/// The coefficient is always derived from m.
class SpaceConfig {
 public:
  explicit SpaceConfig(int m = 2);

  int dimension() const noexcept { return m_; }
  double ball_coeff() const noexcept { return c_m_; }

  /// Lebesgue measure of a ball of radius r: c_m r^m.
  double ball_volume(double r) const;

 private:
  int m_;
  double c_m_;
};

/// Strictly increasing, positive, finite nodal distances r_1 < ... < r_N (meters).
class DistanceVector {
 public:
  DistanceVector() = default;
  /// Throws DomainError unless the input is strictly increasing, positive and finite.
  explicit DistanceVector(std::vector<double> distances);

  std::size_t size() const noexcept { return r_.size(); }
  bool empty() const noexcept { return r_.empty(); }
  double operator[](std::size_t i) const { return r_[i]; }
  double back() const { return r_.back(); }
  std::span<const double> values() const noexcept { return r_; }
  auto begin() const noexcept { return r_.begin(); }
  auto end() const noexcept { return r_.end(); }

 private:
  std::vector<double> r_;
};

}  // namespace nodedens
