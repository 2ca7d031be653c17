#include "nodedens/space.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nodedens/errors.hpp"

namespace nodedens {

double ball_volume_coeff(int m) {
  if (m < 1) {
    throw InvalidParameter("dimension must be >= 1, got " + std::to_string(m));
  }
  // c_m = c_{m-2} * 2 pi / m, seeded with c_1 = 2, c_2 = pi. Exact for the
  // small dimensions and avoids tgamma rounding.
  double c = (m % 2 == 1) ? 2.0 : std::numbers::pi;
  for (int d = (m % 2 == 1) ? 3 : 4; d <= m; d += 2) {
    c *= 2.0 * std::numbers::pi / d;
  }
  return c;
}

SpaceConfig::SpaceConfig(int m) : m_(m), c_m_(ball_volume_coeff(m)) {}

double SpaceConfig::ball_volume(double r) const {
  return c_m_ * std::pow(r, m_);
}

DistanceVector::DistanceVector(std::vector<double> distances)
    : r_(std::move(distances)) {
  double prev = 0.0;
  for (std::size_t i = 0; i < r_.size(); ++i) {
    const double r = r_[i];
    if (!std::isfinite(r) || r <= 0.0) {
      throw DomainError("distance " + std::to_string(i) + " is not a positive finite value");
    }
    if (r <= prev) {
      throw DomainError("distances must be strictly increasing (index " +
                        std::to_string(i) + ")");
    }
    prev = r;
  }
}

}  // namespace nodedens
