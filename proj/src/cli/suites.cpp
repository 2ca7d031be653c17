#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cli/commands.hpp"
#include "nodedens/dos.hpp"
#include "nodedens/estimators.hpp"
#include "nodedens/report.hpp"
#include "nodedens/sampling.hpp"
#include "nodedens/validation.hpp"

namespace nodedens::cli {

namespace {

constexpr std::size_t kKsSamples = 10000;
constexpr double kKsAlpha = 0.01;

std::string fmt(double x) { return format_double(x); }

// Passes when at least two of three independent KS runs accept.
template <class Draw, class Cdf>
CheckResult ks_majority(std::string name, std::uint64_t seed, std::uint64_t tag, Draw draw, Cdf cdf) {
  int passes = 0;
  std::ostringstream detail;
  for (int rep = 0; rep < 3; ++rep) {
    std::vector<double> xs(kKsSamples);
    for (std::size_t i = 0; i < kKsSamples; ++i) {
      RngStream rng(seed + 1000003ULL * tag + rep, i);
      xs[i] = draw(rng);
    }
    const KsResult ks = ks_test(xs, cdf);
    if (ks.p_value > kKsAlpha) ++passes;
    detail << (rep ? " " : "") << "p" << rep << "=" << fmt(ks.p_value);
  }
  return {std::move(name), passes >= 2, detail.str()};
}

CheckResult within_se(std::string name, double mean, double se, double target) {
  const double z = (mean - target) / se;
  std::ostringstream detail;
  detail << "mean=" << fmt(mean) << " target=" << fmt(target) << " z=" << fmt(z);
  return {std::move(name), std::fabs(z) <= 3.0, detail.str()};
}

struct MeanSe {
  double mean;
  double se;
};

template <class F>
MeanSe monte_carlo(std::size_t trials, std::uint64_t seed, F f) {
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    RngStream rng(seed, t);
    const double x = f(rng);
    const double delta = x - mean;
    mean += delta / static_cast<double>(t + 1);
    m2 += delta * (x - mean);
  }
  return {mean, std::sqrt(m2 / static_cast<double>(trials - 1) / static_cast<double>(trials))};
}

std::vector<CheckResult> distribution_checks(std::uint64_t seed) {
  std::vector<CheckResult> out;
  const SpaceConfig plane(2);
  const IntensityModel ppp(0.01, plane);

  for (std::size_t k : {std::size_t{1}, std::size_t{3}, std::size_t{10}}) {
    out.push_back(ks_majority(
        "ks-joint-dos-marginal-k" + std::to_string(k), seed, k,
        [&](RngStream& rng) { return sample_joint_dos(0.01, 10, plane, rng)[k - 1]; },
        [&](double r) { return cdf_kth_nearest(r, k, ppp); }));
  }

  const std::pair<std::size_t, std::size_t> finite_cases[] = {{5, 1}, {5, 5}, {10, 3}};
  for (auto [N, k] : finite_cases) {
    const FiniteBallModel ball(N, 100.0, plane);
    out.push_back(ks_majority(
        "ks-uniform-ball-N" + std::to_string(N) + "-k" + std::to_string(k), seed, 100 + 10 * N + k,
        [&, N = N, k = k](RngStream& rng) {
          return sample_uniform_ball_distances(N, 100.0, plane, rng)[k - 1];
        },
        [&, k = k](double r) { return cdf_kth_nearest_finite(r, k, ball); }));
  }

  const ChannelParams ch(1.0, 1.0, 4.0);
  out.push_back(ks_majority(
      "ks-kth-power-k2", seed, 200,
      [&](RngStream& rng) { return received_power(sample_kth_nearest(0.01, 2, plane, rng), ch); },
      [&](double p) { return cdf_kth_power(p, 2, ppp, ch); }));

  {
    const IntensityModel model(0.01, plane);
    const double total = quadrature([&](double r) { return pdf_kth_nearest(r, 3, model); }, 0.0,
                                    INFINITY, 1e-9, {.scale = 10.0});
    out.push_back({"normalization-kth-nearest-k3", std::fabs(total - 1.0) < 1e-6, "integral=" + fmt(total)});
  }

  {
    // Joint power density over P1 > P2 > 0, in log-power coordinates.
    auto joint = [&](double s1, double s2) {
      const double p[2] = {std::exp(s1), std::exp(s2)};
      return pdf_joint_powers(p, ppp, ch) * p[0] * p[1];
    };
    QuadratureOptions opts{.scale = 2.0, .center = std::log(1e-4)};
    const double total = quadrature(
        [&](double s2) {
          return quadrature([&](double s1) { return joint(s1, s2); }, s2, INFINITY, 1e-11,
                            {.scale = 2.0});
        },
        -INFINITY, INFINITY, 1e-9, opts);
    out.push_back({"normalization-joint-powers-N2", std::fabs(total - 1.0) < 1e-3, "integral=" + fmt(total)});
  }

  {
    double worst = 0.0;
    for (int i = 1; i <= 10; ++i) {
      const double r2 = 3.0 * i;
      const double marginal = quadrature(
          [&](double r1) { return pdf_joint_intensity(DistanceVector({r1, r2}), ppp); }, 0.0, r2, 1e-14);
      const double direct = pdf_kth_nearest(r2, 2, ppp);
      worst = std::max(worst, std::fabs(marginal - direct) / direct);
    }
    out.push_back({"marginalization-joint-k2", worst < 1e-6, "max_rel_err=" + fmt(worst)});
  }
  return out;
}

std::vector<CheckResult> estimator_checks(std::uint64_t seed) {
  std::vector<CheckResult> out;
  const SpaceConfig plane(2);
  const ChannelParams ch(1.0, 1.0, 4.0);
  const double lambda = 0.01;

  {
    double worst_joint = 0.0;
    double worst_indep = 0.0;
    for (std::uint64_t t = 0; t < 20; ++t) {
      RngStream rng(seed + 7, t);
      const std::size_t N = 2 + static_cast<std::size_t>(rng.next_bits() % 49);
      std::vector<double> powers;
      for (double r : sample_joint_dos(lambda, N, plane, rng)) powers.push_back(received_power(r, ch));
      const LocalPowerSamples s(std::move(powers), ch);
      const double ml = estimate_ide_ml(s, plane).value;
      const double u_ml = argmax_1d([&](double u) { return loglik_ide_joint(std::exp(u), s, plane); },
                                    std::log(ml) - 8.0, std::log(ml) + 8.0, 1e-7);
      worst_joint = std::max(worst_joint, std::fabs(std::exp(u_ml) - ml) / ml);
      const double wrong = estimate_ide_wrong(s, plane).value;
      const double u_w = argmax_1d([&](double u) { return loglik_ide_independent(std::exp(u), s, plane); },
                                   std::log(wrong) - 8.0, std::log(wrong) + 8.0, 1e-7);
      worst_indep = std::max(worst_indep, std::fabs(std::exp(u_w) - wrong) / wrong);
    }
    out.push_back({"argmax-ide-joint", worst_joint < 1e-8, "max_rel_err=" + fmt(worst_joint)});
    out.push_back({"argmax-ide-independent", worst_indep < 1e-8, "max_rel_err=" + fmt(worst_indep)});
  }

  for (std::size_t N : {std::size_t{5}}) {
    const auto ml = monte_carlo(1000000, seed + 11, [&](RngStream& rng) {
      const double rN = sample_kth_nearest(lambda, N, plane, rng);
      return static_cast<double>(N) / (plane.ball_coeff() * rN * rN) / lambda;
    });
    out.push_back(within_se("bias-factor-ide-ml-N" + std::to_string(N), ml.mean, ml.se, ide_ml_bias_factor(N)));
  }

  {
    const std::size_t N = 10;
    const auto ide = monte_carlo(1000000, seed + 13, [&](RngStream& rng) {
      std::vector<double> powers;
      for (double r : sample_joint_dos(lambda, N, plane, rng)) powers.push_back(received_power(r, ch));
      return estimate_ide(LocalPowerSamples(std::move(powers), ch), plane).value / lambda;
    });
    out.push_back(within_se("unbiased-ide-N10", ide.mean, ide.se, 1.0));
  }

  {
    const std::size_t N = 10;
    const std::size_t c = 3;
    const auto cde = monte_carlo(1000000, seed + 17, [&](RngStream& rng) {
      std::vector<double> shared(N);
      for (auto& p : shared) p = received_power(sample_kth_nearest(lambda, c, plane, rng), ch);
      return estimate_cde(CooperativePowerSamples(std::move(shared), c, ch), plane).value / lambda;
    });
    out.push_back(within_se("unbiased-cde-N10-c3", cde.mean, cde.se, 1.0));
  }
  return out;
}

}  // namespace

std::vector<CheckResult> run_suite(std::string_view suite, std::uint64_t seed) {
  if (suite == "distributions") return distribution_checks(seed);
  if (suite == "estimators") return estimator_checks(seed);
  if (suite == "all") {
    auto checks = distribution_checks(seed);
    auto more = estimator_checks(seed);
    checks.insert(checks.end(), more.begin(), more.end());
    return checks;
  }
  throw std::invalid_argument("unknown suite '" + std::string(suite) +
                              "' (expected distributions, estimators, all or ks)");
}

}  // namespace nodedens::cli
