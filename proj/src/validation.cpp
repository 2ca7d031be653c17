#include "nodedens/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "nodedens/errors.hpp"
#include "nodedens/numerics.hpp"

namespace nodedens {

double kolmogorov_survival(double z) {
  if (!(z > 0.0)) return 1.0;
  if (z < 1.18) {
    // Jacobi-theta form of the CDF; converges fast for small z.
    const double w = std::numbers::pi * std::numbers::pi / (8.0 * z * z);
    double sum = 0.0;
    for (int j = 1; j <= 20; ++j) {
      const double odd = 2.0 * j - 1.0;
      sum += std::exp(-odd * odd * w);
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / z * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * z * z);
    sum += (j % 2 == 1) ? term : -term;
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf) {
  const std::size_t n = samples.size();
  if (n < 10) throw InsufficientSamples("KS test needs at least 10 samples");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double nd = static_cast<double>(n);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double F = cdf(x[i]);
    d = std::max({d, (i + 1) / nd - F, F - i / nd});
  }
  d = std::clamp(d, 0.0, 1.0);
  return {d, kolmogorov_survival(std::sqrt(nd) * d), n};
}

namespace {

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd Kronrod nodes kXgk[1], [3], [5], [7].
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double result;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel kronrod15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kWgk[i] * pair;
    if (i % 2 == 1) gauss += kWg[i / 2] * pair;
  }
  return {a, b, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

template <class F>
double adaptive(const F& f, double a, double b, double tol, int max_panels) {
  std::priority_queue<Panel> queue;
  queue.push(kronrod15(f, a, b));
  double total = queue.top().result;
  double error = queue.top().error;
  std::vector<Panel> frozen;
  int panels = 1;
  constexpr double eps = std::numeric_limits<double>::epsilon();

  auto converged = [&] { return error <= std::max(tol, 100.0 * eps * std::fabs(total)); };

  while (!converged() && !queue.empty()) {
    if (panels >= max_panels) {
      throw ToleranceNotMet("quadrature did not reach tolerance", total, error);
    }
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      frozen.push_back(worst);
      continue;
    }
    Panel left = kronrod15(f, worst.a, mid);
    Panel right = kronrod15(f, mid, worst.b);
    total += left.result + right.result - worst.result;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panels;
  }

  // Re-sum from the panels to drop drift in the running totals.
  NeumaierSum sum;
  double err = 0.0;
  for (const auto& p : frozen) {
    sum.add(p.result);
    err += p.error;
  }
  while (!queue.empty()) {
    sum.add(queue.top().result);
    err += queue.top().error;
    queue.pop();
  }
  total = sum.value();
  if (!std::isfinite(total)) throw ToleranceNotMet("quadrature produced a non-finite value", total, err);
  if (err > std::max(tol, 100.0 * eps * std::fabs(total))) {
    throw ToleranceNotMet("quadrature could not subdivide further", total, err);
  }
  return total;
}

// Integral of f over [a, inf) through x = a + s(-ln u).
double upper_tail(const std::function<double(double)>& f, double a, double tol,
                  const QuadratureOptions& opts) {
  const double s = opts.scale;
  auto g = [&](double u) {
    const double fx = f(a - s * std::log(u));
    return fx == 0.0 ? 0.0 : fx * s / u;
  };
  return adaptive(g, 0.0, 1.0, tol, opts.max_panels);
}

}  // namespace

double quadrature(const std::function<double(double)>& f, double a, double b, double tol,
                  const QuadratureOptions& opts) {
  if (!(a < b)) throw InvalidParameter("quadrature needs a < b");
  if (!(tol > 0.0)) throw InvalidParameter("quadrature tolerance must be positive");
  if (!(opts.scale > 0.0)) throw InvalidParameter("quadrature scale must be positive");
  const bool lo_inf = std::isinf(a);
  const bool hi_inf = std::isinf(b);
  if (!lo_inf && !hi_inf) return adaptive(f, a, b, tol, opts.max_panels);
  auto mirrored = [&](double x) { return f(-x); };
  if (lo_inf && hi_inf) {
    const double c = opts.center;
    return upper_tail(f, c, 0.5 * tol, opts) + upper_tail(mirrored, -c, 0.5 * tol, opts);
  }
  if (hi_inf) return upper_tail(f, a, tol, opts);
  return upper_tail(mirrored, -b, tol, opts);
}

double argmax_1d(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(lo < hi)) throw InvalidParameter("argmax_1d needs lo < hi");
  if (!(tol > 0.0)) throw InvalidParameter("argmax_1d tolerance must be positive");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a >= tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
    if (!(x1 > a && x2 < b)) break;
  }
  const double mid = 0.5 * (a + b);
  const double width = b - a;
  if (mid - lo <= width || hi - mid <= width) {
    throw BracketError("maximizer lies on the search bracket boundary", mid);
  }

  // Central-difference Newton step; h ~ cbrt(eps) balances truncation and rounding.
  const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::fabs(mid));
  const double fm = f(mid - h);
  const double f0 = f(mid);
  const double fp = f(mid + h);
  const double curvature = fp - 2.0 * f0 + fm;
  if (curvature < 0.0 && std::isfinite(curvature)) {
    const double shift = -0.5 * h * (fp - fm) / curvature;
    if (std::fabs(shift) <= std::max(width, h)) return mid + shift;
  }
  return mid;
}

}  // namespace nodedens
