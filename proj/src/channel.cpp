#include "nodedens/channel.hpp"

#include <cmath>

#include "nodedens/errors.hpp"

namespace nodedens {

namespace {

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

void require_power(double P) {
  if (!positive_finite(P)) throw DomainError("received power must be positive and finite");
}

}  // namespace

ChannelParams::ChannelParams(double transmit_power, double constant, double path_loss_exponent)
    : pt_(transmit_power), c_(constant), gamma_(path_loss_exponent) {
  if (!positive_finite(pt_)) throw InvalidParameter("transmit power must be positive");
  if (!positive_finite(c_)) throw InvalidParameter("propagation constant must be positive");
  if (!positive_finite(gamma_)) throw InvalidParameter("path-loss exponent must be positive");
}

double received_power(double r, const ChannelParams& ch) {
  if (!positive_finite(r)) throw DomainError("distance must be positive and finite");
  return ch.reference_power() * std::pow(r, -ch.path_loss_exponent());
}

double invert_to_distance(double P, const ChannelParams& ch) {
  require_power(P);
  return std::pow(ch.reference_power() / P, 1.0 / ch.path_loss_exponent());
}

double distance_measure(double P, const ChannelParams& ch, const SpaceConfig& space) {
  require_power(P);
  return std::pow(ch.reference_power() / P, space.dimension() / ch.path_loss_exponent());
}

double distance_jacobian(double P, const ChannelParams& ch) {
  return invert_to_distance(P, ch) / (ch.path_loss_exponent() * P);
}

}  // namespace nodedens
