#pragma once

namespace nodedens::special {

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
/// Series for x < a + 1, Lentz continued fraction for the complement otherwise.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
/// directly so that small tails keep full relative precision.
double gamma_q(double a, double x);

/// ln( n! / (k! (n-k)!) ).
double log_binomial(double n, double k);

}  // namespace nodedens::special
