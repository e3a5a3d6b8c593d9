#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "memfilter/estimation.hpp"
#include "memfilter/nelder_mead.hpp"
#include "memfilter/noise.hpp"
#include "memfilter/random.hpp"

using namespace memfilter;

namespace {

std::vector<double> brownian(std::size_t n, std::uint64_t seed) {
  RandomStream s(seed, 0);
  std::vector<double> v(n);
  double w = 0.0;
  for (double& x : v) {
    w += s.normal();
    x = w;
  }
  return v;
}

std::vector<double> h_curve(double p, double q, double theta, double sigma, std::size_t lags) {
  std::vector<double> h(lags);
  for (std::size_t j = 0; j < lags; ++j) h[j] = ou_variance_ratio_h(p, q, theta, sigma, j + 1.0);
  return h;
}

}  // namespace

TEST(NelderMead, Rosenbrock) {
  auto f = [](const std::vector<double>& x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  const NelderMeadResult r = nelder_mead(f, {-1.2, 1.0});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-6);
  EXPECT_NEAR(r.x[1], 1.0, 1e-6);
}

TEST(NelderMead, NonFiniteValuesAreAvoided) {
  auto f = [](const std::vector<double>& x) {
    return x[0] < 0 ? std::nan("") : (x[0] - 2) * (x[0] - 2);
  };
  const NelderMeadResult r = nelder_mead(f, {0.1});
  EXPECT_NEAR(r.x[0], 2.0, 1e-6);
}

TEST(EmpiricalU, ConstantSamples) {
  const std::vector<double> v(50, 3.5);
  for (double u : empirical_u(v, 5).u) EXPECT_EQ(u, 0.0);
}

TEST(EmpiricalU, HandExample) {
  const std::vector<double> v{0, 1, 2, 3};
  const VarianceCurve c = empirical_u(v, 1);
  ASSERT_EQ(c.max_lag(), 1u);
  EXPECT_DOUBLE_EQ(c.mean[0], 1.0);
  EXPECT_DOUBLE_EQ(c.u[0], 0.0);
  EXPECT_EQ(c.samples, 4u);
}

TEST(EmpiricalU, LiteralFormula) {
  const std::vector<double> v = brownian(40, 2);
  const std::size_t n = v.size(), j = 3;
  double m = 0.0;
  for (std::size_t i = 0; i + j < n; ++i) m += v[i + j] - v[i];
  m /= static_cast<double>(n - j);
  double u = 0.0;
  for (std::size_t i = 0; i + j < n; ++i) u += std::pow(v[i + j] - v[i] - m, 2);
  u /= static_cast<double>(j * (n - j - 1));
  const VarianceCurve c = empirical_u(v, 5);
  EXPECT_NEAR(c.mean[j - 1], m, 1e-14);
  EXPECT_NEAR(c.u[j - 1], u, 1e-14);
}

TEST(EmpiricalU, RejectsShortSeries) {
  const std::vector<double> v(10, 0.0);
  EXPECT_THROW(empirical_u(v, 9), std::invalid_argument);
  EXPECT_THROW(empirical_u(v, 0), std::invalid_argument);
  EXPECT_NO_THROW(empirical_u(v, 8));
  EXPECT_THROW(empirical_h(v, 0.5, 9), std::invalid_argument);
}

// Overlapping Brownian increments: Var(u_j) ~ (2/N)(2j^2 + 1)/(3j).
TEST(EmpiricalU, BrownianIsNearOne) {
  const std::size_t n = 10000;
  const VarianceCurve c = empirical_u(brownian(n, 4), 30);
  for (std::size_t j : {1u, 5u, 10u, 30u}) {
    const double se = std::sqrt(2.0 / n * (2.0 * j * j + 1.0) / (3.0 * j));
    EXPECT_NEAR(c.u[j - 1], 1.0, 3 * se) << "lag " << j;
  }
}

TEST(EmpiricalU, TranslationInvariant) {
  std::vector<double> v = brownian(500, 5);
  const VarianceCurve a = empirical_u(v, 10);
  const VarianceCurve ha = empirical_h(v, 0.6, 10);
  for (double& x : v) x += 17.0;
  const VarianceCurve b = empirical_u(v, 10);
  const VarianceCurve hb = empirical_h(v, 0.6, 10);
  for (std::size_t j = 0; j < 10; ++j) {
    EXPECT_NEAR(a.u[j], b.u[j], 1e-9);
    EXPECT_NEAR(ha.u[j], hb.u[j], 1e-9);
  }
}

TEST(FitPq, NoiselessCurve) {
  VarianceCurve c;
  for (int j = 1; j <= 30; ++j) c.u.push_back(variance_ratio_u({0.5, 0.3}, j));
  c.mean.assign(30, 0.0);
  c.samples = 1000;
  const FitResult r = fit_pq(c);
  EXPECT_NEAR(r.param("p"), 0.5, 1e-4);
  EXPECT_NEAR(r.param("q"), 0.3, 1e-4);
  EXPECT_LT(r.sse, 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_FALSE(r.p_ridge);
  EXPECT_THROW(r.param("theta"), std::out_of_range);
}

TEST(FitPq, FromInitialGuess) {
  VarianceCurve c;
  for (int j = 1; j <= 30; ++j) c.u.push_back(variance_ratio_u({-0.2, 0.7}, j));
  c.mean.assign(30, 0.0);
  const FitResult r = fit_pq(c, MemoryParams{0.1, 0.5});
  EXPECT_NEAR(r.param("p"), -0.2, 1e-4);
  EXPECT_NEAR(r.param("q"), 0.7, 1e-4);
}

TEST(FitPq, BrownianCurveFlagsRidge) {
  VarianceCurve c;
  c.u.assign(30, 1.0);
  c.mean.assign(30, 0.0);
  const FitResult r = fit_pq(c);
  EXPECT_NEAR(r.param("p"), 0.0, 1e-3);
  EXPECT_TRUE(r.p_ridge);
  EXPECT_GT(r.param("q"), 0.0);
}

TEST(OuH, NoMemory) {
  for (double t : {0.5, 1.0, 7.0}) {
    const double expected = 1.44 * (1 - std::exp(-2 * 0.8 * t)) / (2 * 0.8 * t);
    EXPECT_NEAR(ou_variance_ratio_h(0.0, 1.5, 0.8, 1.2, t), expected, 1e-14);
  }
}

TEST(OuH, SmallLagLimitIsSigmaSquared) {
  EXPECT_NEAR(ou_variance_ratio_h(0.2, 1.5, 0.8, 1.3, 1e-9), 1.69, 1e-6);
  EXPECT_NEAR(ou_variance_ratio_h(-0.4, 0.5, 2.0, 0.7, 1e-9), 0.49, 1e-6);
}

TEST(OuH, ContinuousAcrossRateCoincidence) {
  // theta = p + q
  const double at = ou_variance_ratio_h(0.3, 0.5, 0.8, 1.0, 2.0);
  const double near = ou_variance_ratio_h(0.3, 0.5, 0.8 + 1e-8, 1.0, 2.0);
  EXPECT_TRUE(std::isfinite(at));
  EXPECT_NEAR(near, at, 1e-7 * at);
}

TEST(OuH, PositiveAndRejectsInvalid) {
  for (double p : {-0.5, 0.0, 0.2, 4.0})
    for (double t : {0.1, 1.0, 30.0}) EXPECT_GT(ou_variance_ratio_h(p, 0.6, 0.8, 1.0, t), 0.0);
  EXPECT_THROW(ou_variance_ratio_h(0.2, 1.5, -0.8, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(ou_variance_ratio_h(0.2, 1.5, 0.8, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(ou_variance_ratio_h(0.2, 1.5, 0.8, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(ou_variance_ratio_h(-2.0, 1.5, 0.8, 1.0, 1.0), std::invalid_argument);
}

TEST(EmpiricalH, ZeroSamples) {
  const std::vector<double> x(100, 0.0);
  for (double h : empirical_h(x, 0.8, 10).u) EXPECT_EQ(h, 0.0);
}

TEST(EmpiricalH, ZeroThetaIsEmpiricalU) {
  const std::vector<double> x = brownian(300, 6);
  const VarianceCurve a = empirical_h(x, 0.0, 12), b = empirical_u(x, 12);
  for (std::size_t j = 0; j < 12; ++j) {
    EXPECT_DOUBLE_EQ(a.u[j], b.u[j]);
    EXPECT_DOUBLE_EQ(a.mean[j], b.mean[j]);
  }
}

TEST(LagMoments, MatchesLiteralEstimator) {
  RandomStream s(8, 0);
  const std::vector<double> x =
      simulate_ou_memory(OuMemorySpec{{0.2, 1.5}, 0.8, 1.0, 3.0}, 1000, 20, s);
  const LagMoments lm(x, 30);
  for (double theta : {0.05, 0.8, 2.5}) {
    const VarianceCurve a = lm.h(theta), b = empirical_h(x, theta, 30);
    for (std::size_t j = 0; j < 30; ++j) EXPECT_NEAR(a.u[j], b.u[j], 1e-10 * (1 + b.u[j]));
  }
}

// E[(X(t) - e^{-theta(t-s)} X(s))^2] / (t - s) = H(t - s), from independent paths.
TEST(OuMemory, IncrementLawMatchesH) {
  const std::vector<OuMemorySpec> cases{
      {{0.2, 1.5}, 0.8, 1.0, 0.0}, {{1.0, 0.5}, 0.4, 0.7, 0.0}, {{-0.3, 0.6}, 1.5, 1.2, 0.0}};
  std::uint64_t id = 0;
  for (const OuMemorySpec& spec : cases) {
    const std::size_t paths = 4000;
    for (std::size_t lag : {1u, 3u}) {
      std::vector<double> d(paths);
      for (std::size_t n = 0; n < paths; ++n) {
        RandomStream s(91, id++);
        const std::vector<double> x = simulate_ou_memory(spec, 1 + lag, 100, s);
        d[n] = std::pow(x[lag] - std::exp(-spec.theta * lag) * x[0], 2) / lag;
      }
      const double mean = std::accumulate(d.begin(), d.end(), 0.0) / paths;
      double var = 0.0;
      for (double v : d) var += (v - mean) * (v - mean);
      const double se = std::sqrt(var / (paths - 1) / paths);
      const double h = ou_variance_ratio_h(spec.noise.p, spec.noise.q, spec.theta, spec.sigma, lag);
      EXPECT_NEAR(mean, h, 3 * se) << "p " << spec.noise.p << " lag " << lag;
    }
  }
}

// h_j(0.8) against H over 20 series of N = 1e4.
TEST(EmpiricalH, SimulatedSeriesMatchesH) {
  const OuMemorySpec spec{{0.2, 1.5}, 0.8, 1.0, 0.0};
  const std::size_t reps = 20;
  std::vector<std::vector<double>> h(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    RandomStream s(93, r);
    h[r] = empirical_h(simulate_ou_memory(spec, 10000, 100, s), spec.theta, 10).u;
  }
  for (std::size_t j : {1u, 4u, 10u}) {
    double m = 0, m2 = 0;
    for (const auto& c : h) {
      m += c[j - 1];
      m2 += c[j - 1] * c[j - 1];
    }
    m /= reps;
    const double se = std::sqrt((m2 / reps - m * m) * reps / (reps - 1) / reps);
    EXPECT_NEAR(m, ou_variance_ratio_h(0.2, 1.5, 0.8, 1.0, j), 3 * se) << "lag " << j;
  }
}

TEST(FitOu, NoiselessAtFixedTheta) {
  const std::vector<double> h = h_curve(0.2, 1.5, 0.8, 1.0, 30);
  const FitResult r = fit_ou_to_curve(h, 0.8);
  EXPECT_NEAR(r.param("p"), 0.2, 1e-3);
  EXPECT_NEAR(r.param("q"), 1.5, 1e-3);
  EXPECT_NEAR(r.param("theta"), 0.8, 1e-12);
  EXPECT_NEAR(r.param("sigma"), 1.0, 1e-3);
}

TEST(FitOu, FreeThetaFitsCurveExactly) {
  // the rate alias ((theta + r)/2, (3 theta - r)/2) fits equally well, so only the SSE is pinned
  const FitResult r = fit_ou_to_curve(h_curve(0.2, 1.5, 0.8, 1.0, 30));
  EXPECT_LT(r.sse, 1e-12);
  EXPECT_NEAR(r.param("sigma"), 1.0, 3e-1);
}

TEST(FitOu, SigmaScalesWithData) {
  const double c = 2.5;
  std::vector<double> h = h_curve(0.2, 1.5, 0.8, 1.0, 30);
  for (double& v : h) v *= c * c;
  const FitResult r = fit_ou_to_curve(h, 0.8);
  EXPECT_NEAR(r.param("sigma"), c, 1e-3);
  EXPECT_NEAR(r.param("p"), 0.2, 1e-3);
  EXPECT_NEAR(r.param("q"), 1.5, 1e-3);
}

TEST(FitOu, SamplePathFitIsWellFormed) {
  RandomStream s(95, 0);
  const std::vector<double> x = simulate_ou_memory(OuMemorySpec{{0.2, 1.5}, 0.8, 1.0, 0.0}, 1000, 10, s);
  const FitResult r = fit_ou_params(x, 30);
  ASSERT_EQ(r.params.size(), 4u);
  EXPECT_GT(r.param("theta"), 0.0);
  EXPECT_GT(r.param("sigma"), 0.0);
  EXPECT_GT(r.param("q"), 0.0);
  EXPECT_GT(r.param("p") + r.param("q"), 0.0);
  EXPECT_TRUE(std::isfinite(r.sse));
}

TEST(SampleMemoryNoise, Deterministic) {
  RandomStream a(3, 1), b(3, 1);
  EXPECT_EQ(sample_memory_noise({0.5, 0.3}, 100, 10, a), sample_memory_noise({0.5, 0.3}, 100, 10, b));
}
