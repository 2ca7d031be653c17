#include "nodedens/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nodedens/errors.hpp"

namespace nodedens {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidParameter(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

double distance_from_uniform(double u, double R, const SpaceConfig& space) {
  require_positive(R, "radius");
  if (!(u > 0.0 && u <= 1.0)) throw DomainError("uniform variate must lie in (0, 1]");
  const int m = space.dimension();
  if (m == 1) return R * u;
  if (m == 2) return R * std::sqrt(u);
  return R * std::pow(u, 1.0 / m);
}

DistanceVector sample_uniform_ball_distances(std::size_t N, double R, const SpaceConfig& space,
                                             RngStream& rng) {
  require_positive(R, "radius");
  std::vector<double> r(N);
  for (;;) {
    for (auto& v : r) v = distance_from_uniform(rng.uniform_open0(), R, space);
    std::sort(r.begin(), r.end());
    // Ties have probability ~2^-53 per pair; redraw to keep strict ordering.
    if (std::adjacent_find(r.begin(), r.end()) == r.end()) break;
  }
  return DistanceVector(std::move(r));
}

DistanceVector sample_ppp_distances(double lambda, double R, const SpaceConfig& space,
                                    RngStream& rng) {
  require_positive(lambda, "density");
  require_positive(R, "radius");
  const auto K = rng.poisson(lambda * space.ball_volume(R));
  return sample_uniform_ball_distances(static_cast<std::size_t>(K), R, space, rng);
}

DistanceVector sample_joint_dos(double lambda, std::size_t N, const SpaceConfig& space,
                                RngStream& rng) {
  require_positive(lambda, "density");
  if (N == 0) throw InvalidParameter("joint order statistic sample needs N >= 1");
  const double scale = 1.0 / (lambda * space.ball_coeff());
  const double inv_m = 1.0 / space.dimension();
  std::vector<double> r(N);
  double s = 0.0;
  double prev = 0.0;
  for (auto& v : r) {
    // A zero increment (U = 1) would tie two ranks; draw again.
    do {
      s += rng.exponential();
      v = std::pow(s * scale, inv_m);
    } while (v <= prev);
    prev = v;
  }
  return DistanceVector(std::move(r));
}

double sample_kth_nearest(double lambda, std::size_t k, const SpaceConfig& space,
                          RngStream& rng) {
  return sample_joint_dos(lambda, k, space, rng).back();
}

}  // namespace nodedens
