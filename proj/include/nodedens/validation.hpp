#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace nodedens {

struct KsResult {
  double d_statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

/// P(K > z) for the limiting Kolmogorov distribution.
double kolmogorov_survival(double z);

/// One-sample Kolmogorov-Smirnov test against a continuous CDF.
/// p-value from the asymptotic distribution of sqrt(n) D. Throws
/// InsufficientSamples for n < 10.
KsResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf);

struct QuadratureOptions {
  /// Length scale of the exponential map used on infinite ends:
  /// x = a + scale * (-ln u), u in (0, 1].
  double scale = 1.0;
  /// Split point for doubly infinite ranges.
  double center = 0.0;
  int max_panels = 20000;
};

/// Globally adaptive Gauss-Kronrod (7, 15) quadrature of f over [a, b].
/// Either end may be infinite. Panels are bisected, largest error first, until
/// the summed |K15 - G7| estimate drops below max(tol, 100 eps |result|).
/// Throws ToleranceNotMet with the best estimate once max_panels is reached.
double quadrature(const std::function<double(double)>& f, double a, double b, double tol,
                  const QuadratureOptions& opts = {});

/// Maximizer of a unimodal f on [lo, hi].
///
/// Golden-section search narrows the bracket to width < tol, then one
/// symmetric three-point parabolic step polishes the midpoint; near a smooth
/// maximum the comparisons alone stall at about sqrt(eps) relative. Throws
/// BracketError when the maximizer lies on the bracket boundary.
double argmax_1d(const std::function<double(double)>& f, double lo, double hi, double tol);

}  // namespace nodedens
