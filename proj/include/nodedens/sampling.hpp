#pragma once

#include <cstddef>

#include "nodedens/rng.hpp"
#include "nodedens/space.hpp"

namespace nodedens {

/// Inverse of the in-ball distance CDF F(r) = r^m / R^m: r = R u^{1/m}.
double distance_from_uniform(double u, double R, const SpaceConfig& space);

/// N i.i.d. uniform points in the m-ball of radius R, returned as sorted
/// distances from the centre. N = 0 gives an empty vector.
DistanceVector sample_uniform_ball_distances(std::size_t N, double R, const SpaceConfig& space,
                                             RngStream& rng);

/// Poisson point process of intensity lambda restricted to the ball of
/// radius R: K ~ Poisson(lambda c_m R^m) followed by K uniform points.
DistanceVector sample_ppp_distances(double lambda, double R, const SpaceConfig& space,
                                    RngStream& rng);

/// The N nearest distances of an unbounded PPP of intensity lambda.
/// Uses r_i = (S_i / (lambda c_m))^{1/m}, S_i a sum of i unit exponentials,
/// which is exactly the joint law of the first N distance order statistics.
DistanceVector sample_joint_dos(double lambda, std::size_t N, const SpaceConfig& space,
                                RngStream& rng);

/// k-th nearest distance of an unbounded PPP (last entry of sample_joint_dos).
double sample_kth_nearest(double lambda, std::size_t k, const SpaceConfig& space,
                          RngStream& rng);

}  // namespace nodedens
