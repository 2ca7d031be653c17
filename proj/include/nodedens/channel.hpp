#pragma once

#include "nodedens/space.hpp"

namespace nodedens {

/// Deterministic path-loss channel P_r = C P_t r^{-gamma}. Powers are linear watts.
class ChannelParams {
 public:
  /// Throws InvalidParameter unless all three values are positive and finite.
  ChannelParams(double transmit_power = 1.0, double constant = 1.0, double path_loss_exponent = 4.0);

  double transmit_power() const noexcept { return pt_; }
  double constant() const noexcept { return c_; }
  double path_loss_exponent() const noexcept { return gamma_; }
  /// C * P_t, the received power at unit distance.
  double reference_power() const noexcept { return c_ * pt_; }

 private:
  double pt_;
  double c_;
  double gamma_;
};

double received_power(double r, const ChannelParams& ch);

/// (C P_t / P)^{1/gamma}
double invert_to_distance(double P, const ChannelParams& ch);

/// (P / (C P_t))^{-m/gamma}, i.e. r^m for the distance that produced P.
double distance_measure(double P, const ChannelParams& ch, const SpaceConfig& space);

/// |dr/dP| at power P.
double distance_jacobian(double P, const ChannelParams& ch);

}  // namespace nodedens
