// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures (capped at 1).
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "nodedens/channel.hpp"
#include "nodedens/dos.hpp"
#include "nodedens/estimators.hpp"
#include "nodedens/harness.hpp"
#include "nodedens/numerics.hpp"
#include "nodedens/rng.hpp"
#include "nodedens/sampling.hpp"
#include "nodedens/validation.hpp"

using namespace nodedens;

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

void report(int id, const std::string& name, bool ok, double seconds, const std::string& detail) {
  std::printf("%s  criterion %d  %-28s %7.2fs  %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), seconds,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

struct Mean {
  double mean = 0.0;
  double se = 0.0;
};

Mean mean_se(const std::vector<double>& xs) {
  NeumaierSum s;
  for (double x : xs) s.add(x);
  const double n = static_cast<double>(xs.size());
  const double mean = s.value() / n;
  NeumaierSum v;
  for (double x : xs) v.add((x - mean) * (x - mean));
  return {mean, std::sqrt(v.value() / (n - 1.0) / n)};
}

const SpaceConfig kPlane(2);

// --- 1 ---------------------------------------------------------------------

void ml_certification() {
  const auto t0 = Clock::now();
  double worst_joint = 0.0;
  double worst_indep = 0.0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    RngStream rng(1001, t);
    const std::size_t N = 2 + rng.next_bits() % 49;
    const int m = 1 + static_cast<int>(rng.next_bits() % 3);
    const SpaceConfig space(m);
    const ChannelParams ch(0.1 + 10.0 * rng.uniform_open0(), 0.01 + 2.0 * rng.uniform_open0(),
                           2.0 + 3.0 * rng.uniform_open0());
    const double lambda = std::exp(-9.0 + 8.0 * rng.uniform_open0());
    const auto r = sample_joint_dos(lambda, N, space, rng);
    std::vector<double> p;
    for (double v : r) p.push_back(received_power(v, ch));
    const LocalPowerSamples s(p, ch);

    auto peak = [](const std::function<double(double)>& ll) {
      return std::exp(argmax_1d([&](double u) { return ll(std::exp(u)); }, -60.0, 40.0, 1e-9));
    };
    const double ml = estimate_ide_ml(s, space).value;
    const double wrong = estimate_ide_wrong(s, space).value;
    const double j = peak([&](double l) { return loglik_ide_joint(l, s, space); });
    const double i = peak([&](double l) { return loglik_ide_independent(l, s, space); });
    worst_joint = std::max(worst_joint, std::fabs(j - ml) / ml);
    worst_indep = std::max(worst_indep, std::fabs(i - wrong) / wrong);
  }
  const double secs = since(t0);
  report(1, "ML certification", worst_joint < 1e-8 && worst_indep < 1e-8 && secs < 10.0, secs,
         fmt("max rel err joint=%.2e independent=%.2e (tol 1e-8, limit 10s)", worst_joint, worst_indep));
}

// --- 2 ---------------------------------------------------------------------

void bias_factor() {
  const auto t0 = Clock::now();
  const double lambda = 0.01;
  bool ok = true;
  std::string detail;
  for (std::size_t N : {2, 5, 20}) {
    ExperimentConfig cfg = default_range_config();
    cfg.conditioning = Conditioning::FIXED_COUNT;
    cfg.fixed_density = lambda;
    cfg.grid = {std::sqrt(static_cast<double>(N) / (lambda * std::numbers::pi))};
    cfg.trials = 1000000;
    cfg.base_seed = 2000 + N;
    cfg.estimators = {Estimator::IDE_ML, Estimator::IDE_CORRECT};
    const auto outcomes = run_point(0, cfg);
    std::vector<double> ml, ide;
    ml.reserve(outcomes.size());
    ide.reserve(outcomes.size());
    for (const auto& o : outcomes) {
      if (o.sample_size != N) ok = false;
      ml.push_back(o.get(Estimator::IDE_ML)->value / o.lambda_true);
      ide.push_back(o.get(Estimator::IDE_CORRECT)->value / o.lambda_true);
    }
    const auto a = mean_se(ml);
    const auto b = mean_se(ide);
    const double target = ide_ml_bias_factor(N);
    const double za = (a.mean - target) / a.se;
    const double zb = (b.mean - 1.0) / b.se;
    ok = ok && std::fabs(za) < 3.0 && std::fabs(zb) < 3.0;
    detail += fmt("N=%g ML/l=%.4f (z=%+.2f) I/l=%.4f ", double(N), a.mean, za, b.mean);
    detail += fmt("(z=%+.2f); ", zb);
  }
  const double secs = since(t0);
  report(2, "bias factor N/(N-1)", ok && secs < 60.0, secs, detail + "limit 3 SE, 60s");
}

// --- 3 ---------------------------------------------------------------------

void cde_unbiased() {
  const auto t0 = Clock::now();
  const double lambda = 0.01;
  const ChannelParams ch(1.0, 1.0, 4.0);
  bool ok = true;
  std::string detail;
  for (std::size_t c : {1, 3}) {
    std::vector<double> xs(1000000);
    std::vector<double> p(10);
    for (std::size_t t = 0; t < xs.size(); ++t) {
      RngStream rng(3000 + c, t);
      for (auto& v : p) v = received_power(sample_kth_nearest(lambda, c, kPlane, rng), ch);
      xs[t] = estimate_cde(CooperativePowerSamples(p, c, ch), kPlane).value / lambda;
    }
    const auto m = mean_se(xs);
    const double z = (m.mean - 1.0) / m.se;
    ok = ok && std::fabs(z) < 3.0;
    detail += fmt("c=%g C/l=%.5f (z=%+.2f); ", double(c), m.mean, z);
  }
  const double secs = since(t0);
  report(3, "C-DE unbiased", ok && secs < 60.0, secs, detail + "limit 3 SE, 60s");
}

// --- 4 ---------------------------------------------------------------------

// Majority of three independent repetitions with p > 0.01.
bool ks_majority(const std::function<std::vector<double>(std::uint64_t)>& draw,
                 const std::function<double(double)>& cdf, std::string& detail) {
  int passes = 0;
  for (std::uint64_t rep = 0; rep < 3; ++rep) {
    const auto xs = draw(rep);
    const double p = ks_test(xs, cdf).p_value;
    if (p > 0.01) ++passes;
    detail += fmt(rep == 0 ? "%.3f" : "/%.3f", p);
  }
  return passes >= 2;
}

void distribution_fidelity() {
  const auto t0 = Clock::now();
  const std::size_t n = 10000;
  const double lambda = 0.01;
  bool ok = true;
  std::string detail = "p-values ";

  const IntensityModel model(lambda, kPlane);
  for (std::size_t k : {1, 3}) {
    detail += fmt("joint k=%g:", double(k));
    ok &= ks_majority(
        [&](std::uint64_t rep) {
          std::vector<double> xs(n);
          for (std::size_t i = 0; i < n; ++i) {
            RngStream rng(4000 + 10 * k + rep, i);
            xs[i] = sample_joint_dos(lambda, 5, kPlane, rng)[k - 1];
          }
          return xs;
        },
        [&](double r) { return cdf_kth_nearest(r, k, model); }, detail);
    detail += " ";
  }
  const std::pair<std::size_t, std::size_t> finite[] = {{5, 1}, {10, 3}};
  for (auto [N, k] : finite) {
    const FiniteBallModel ball(N, 100.0, kPlane);
    detail += fmt("ball(%g,%g):", double(N), double(k));
    ok &= ks_majority(
        [&](std::uint64_t rep) {
          std::vector<double> xs(n);
          for (std::size_t i = 0; i < n; ++i) {
            RngStream rng(4100 + 10 * N + rep, i);
            xs[i] = sample_uniform_ball_distances(N, 100.0, kPlane, rng)[k - 1];
          }
          return xs;
        },
        [&](double r) { return cdf_kth_nearest_finite(r, k, ball); }, detail);
    detail += " ";
  }
  const ChannelParams ch(1.0, 1.0, 4.0);
  detail += "power k=2:";
  ok &= ks_majority(
      [&](std::uint64_t rep) {
        std::vector<double> xs(n);
        for (std::size_t i = 0; i < n; ++i) {
          RngStream rng(4200 + rep, i);
          xs[i] = received_power(sample_joint_dos(lambda, 2, kPlane, rng)[1], ch);
        }
        return xs;
      },
      [&](double P) { return cdf_kth_power(P, 2, model, ch); }, detail);
  report(4, "distribution fidelity", ok, since(t0), detail + " (need p>0.01 in 2 of 3)");
}

// --- 5 ---------------------------------------------------------------------

void analytic_consistency() {
  const auto t0 = Clock::now();
  const IntensityModel model(0.01, kPlane);
  const ChannelParams ch(1.0, 1.0, 4.0);
  // log-power coordinates P = e^s
  auto joint = [&](double s1, double s2) {
    const double p[2] = {std::exp(s1), std::exp(s2)};
    return pdf_joint_powers(p, model, ch) * p[0] * p[1];
  };
  const double total = quadrature(
      [&](double s2) {
        return quadrature([&](double s1) { return joint(s1, s2); }, s2, INFINITY, 1e-12, {.scale = 2.0});
      },
      -INFINITY, INFINITY, 1e-10, {.scale = 2.0, .center = std::log(1e-4)});

  double worst = 0.0;
  for (int i = 1; i <= 10; ++i) {
    const double r2 = 3.0 * i;
    const double marginal =
        quadrature([&](double r1) { return pdf_joint_intensity(DistanceVector({r1, r2}), model); }, 0.0, r2, 1e-15);
    const double want = pdf_kth_nearest(r2, 2, model);
    worst = std::max(worst, std::fabs(marginal - want) / want);
  }
  const bool ok = std::fabs(total - 1.0) < 1e-3 && worst < 1e-6;
  report(5, "analytic consistency", ok, since(t0),
         fmt("joint power integral - 1 = %.2e (tol 1e-3); max rel marginal err %.2e (tol 1e-6)", total - 1.0, worst));
}

// --- 6, 7 ------------------------------------------------------------------

// Checks the correct-vs-wrong ordering and the requested trends on one report.
struct TrendCheck {
  bool beats = true;
  bool wrong_mape_nonincreasing = true;
  bool wrong_rmse_nondecreasing = true;
  bool correct_mape_nonincreasing = true;
};

TrendCheck check_trends(const MetricsReport& rep, const std::vector<double>& grid) {
  TrendCheck t;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto* good = rep.find(grid[i], Estimator::IDE_CORRECT);
    const auto* bad = rep.find(grid[i], Estimator::IDE_WRONG);
    t.beats = t.beats && good->mape_percent < bad->mape_percent && good->rmse < bad->rmse;
    if (i == 0) continue;
    const auto* good0 = rep.find(grid[i - 1], Estimator::IDE_CORRECT);
    const auto* bad0 = rep.find(grid[i - 1], Estimator::IDE_WRONG);
    t.wrong_mape_nonincreasing = t.wrong_mape_nonincreasing && bad->mape_percent <= bad0->mape_percent;
    t.wrong_rmse_nondecreasing = t.wrong_rmse_nondecreasing && bad->rmse >= bad0->rmse;
    t.correct_mape_nonincreasing = t.correct_mape_nonincreasing && good->mape_percent <= good0->mape_percent;
  }
  return t;
}

std::string flags(const TrendCheck& t, bool with_wrong_trends, bool with_correct_trend) {
  std::string s = t.beats ? "beats" : "NOT-beats";
  if (with_wrong_trends) {
    s += t.wrong_mape_nonincreasing ? " wrongMAPE-down" : " wrongMAPE-NOT-down";
    s += t.wrong_rmse_nondecreasing ? " wrongRMSE-up" : " wrongRMSE-NOT-up";
  }
  if (with_correct_trend) s += t.correct_mape_nonincreasing ? " correctMAPE-down" : " correctMAPE-NOT-down";
  return s;
}

void figure_density() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (auto mode : {Conditioning::POISSON_COUNT, Conditioning::FIXED_COUNT}) {
    ExperimentConfig cfg = default_density_config();
    cfg.conditioning = mode;
    cfg.estimators = {Estimator::IDE_CORRECT, Estimator::IDE_WRONG};
    const auto rep = sweep_density(cfg);
    const auto t = check_trends(rep, cfg.grid);
    ok = ok && t.beats && t.wrong_mape_nonincreasing && t.wrong_rmse_nondecreasing;
    detail += std::string(conditioning_key(mode)) + ": " + flags(t, true, false) + "; ";
  }
  const double secs = since(t0);
  report(6, "density sweep trends", ok && secs < 300.0, secs, detail + "limit 5 min");
}

void figure_range() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (auto mode : {Conditioning::POISSON_COUNT, Conditioning::FIXED_COUNT}) {
    ExperimentConfig cfg = default_range_config();
    cfg.conditioning = mode;
    cfg.estimators = {Estimator::IDE_CORRECT, Estimator::IDE_WRONG};
    const auto rep = sweep_range(cfg);
    const auto t = check_trends(rep, cfg.grid);
    ok = ok && t.beats && t.correct_mape_nonincreasing;
    detail += std::string(conditioning_key(mode)) + ": " + flags(t, false, true) + "; ";
  }
  const double secs = since(t0);
  report(7, "range sweep trends", ok && secs < 180.0, secs, detail + "limit 3 min");
}

// --- 8 ---------------------------------------------------------------------

void conditioned_overshoot() {
  const auto t0 = Clock::now();
  std::size_t over = 0;
  std::size_t total = 0;
  for (double R : {20.0, 100.0}) {
    ExperimentConfig cfg = default_range_config();
    cfg.conditioning = Conditioning::FIXED_COUNT;
    cfg.grid = {R};
    cfg.trials = 100000;
    cfg.base_seed = 8000;
    cfg.estimators = {Estimator::IDE_ML};
    for (const auto& o : run_point(0, cfg)) {
      ++total;
      if (o.get(Estimator::IDE_ML) && o.get(Estimator::IDE_ML)->value > o.lambda_true) ++over;
    }
  }
  report(8, "conditioned overshoot", over == total, since(t0),
         fmt("%g of %g trials with ML > N/(c_m R^m) (R = 20, 100)", double(over), double(total)));
}

}  // namespace

int main() {
  ml_certification();
  bias_factor();
  cde_unbiased();
  distribution_fidelity();
  analytic_consistency();
  figure_density();
  figure_range();
  conditioned_overshoot();
  std::printf("%s: %d of 8 criteria failed\n", g_failures ? "FAIL" : "PASS", g_failures);
  return g_failures ? 1 : 0;
}
