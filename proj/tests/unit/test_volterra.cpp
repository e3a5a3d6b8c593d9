#include <cmath>
#include <memory>
#include <vector>

#include <gtest/gtest.h>

#include "memfilter/harness.hpp"
#include "memfilter/memory_filter.hpp"
#include "memfilter/noise.hpp"
#include "memfilter/random.hpp"
#include "memfilter/system.hpp"
#include "memfilter/volterra.hpp"

using namespace memfilter;

namespace {

SystemSpec theta2_system() {
  return experiment_system(find_preset("theta2"), ExperimentSettings{});
}

SystemSpec ou_system() {
  SystemSpec s;
  s.theta = -2.0;
  s.sigma = 1.0;
  s.mu = 5.0;
  s.noise1 = {0.0, 1.0};
  s.noise2 = {0.0, 1.0};
  return s;
}

std::vector<double> simulated_y(const SystemSpec& spec, const Grid& grid, std::uint64_t seed) {
  RandomStream a(seed, 0), b(seed, 1);
  return simulate_system(spec, grid, a, b).y;
}

}  // namespace

TEST(TriangularTable, IndexingAndBounds) {
  TriangularTable t(make_grid(1.0, 0.25));
  t.at(3, 1)(0, 0) = 7.0;
  EXPECT_EQ(t.at(3, 1)(0, 0), 7.0);
  EXPECT_EQ(t.at(3, 2)(0, 0), 0.0);
  EXPECT_THROW(t.at(1, 3), std::out_of_range);
  EXPECT_THROW(t.at(5, 0), std::out_of_range);
}

TEST(Gamma, NoStateNoiseIsInitialVarianceOnly) {
  SystemSpec s = theta2_system();
  s.sigma = 0.0;
  s.x0_var = 0.7;
  const Grid g = make_grid(1.0, 0.05);
  const GammaTable gam = build_gamma_for_system(s, g);
  for (std::size_t i = 0; i < g.size(); i += 3)
    for (std::size_t j = 0; j <= i; j += 2)
      EXPECT_NEAR(gam.at(i, j)(0, 0), 0.7 * std::exp(s.theta * (g.node(i) + g.node(j))), 1e-14);
}

TEST(Gamma, OuClosedForm) {
  SystemSpec s = ou_system();
  const Grid g = make_grid(2.0, 0.005);
  const GammaTable gam = build_gamma_for_system(s, g);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); i += 37)
    for (std::size_t j = 0; j <= i; j += 11) {
      const double t = g.node(i), u = g.node(j), th = s.theta;
      const double exact =
          s.sigma * s.sigma * (std::exp(th * (t + u)) - std::exp(th * (t - u))) / (2 * th);
      worst = std::max(worst, std::abs(gam.at(i, j)(0, 0) - exact));
    }
  EXPECT_LT(worst, 1e-5);
}

TEST(Gamma, IdentityMatchesDirectSums) {
  SystemSpec s = theta2_system();
  s.x0_var = 0.3;
  const Grid g = make_grid(1.0, 0.02);
  const GammaTable gam = build_gamma_for_system(s, g);
  for (auto [i, j] : {std::pair<std::size_t, std::size_t>{0, 0}, {10, 3}, {50, 50}, {50, 0},
                      {37, 21}, {49, 48}}) {
    const Mat3 direct = gamma_entry_direct(s, g, i, j);
    const double scale = 1.0 + direct.cwiseAbs().maxCoeff();
    EXPECT_LT((gam.at(i, j) - direct).cwiseAbs().maxCoeff(), 1e-11 * scale) << i << "," << j;
  }
}

TEST(Gamma, DiagonalBlocksAreSymmetricPsdAndDecoupled) {
  const Grid g = make_grid(2.0, 0.02);
  const GammaTable gam = build_gamma_for_system(theta2_system(), g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Mat3& m = gam.at(i, i);
    EXPECT_LT((m - m.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GE(min_eigenvalue(m), -1e-10);
    EXPECT_EQ(m(0, 2), 0.0);
    EXPECT_EQ(m(1, 2), 0.0);
  }
}

// Var(alpha1(t)) from the innovation scheme against the table entry.
TEST(Gamma, StateMemoryVarianceMatchesMonteCarlo) {
  const SystemSpec s = theta2_system();
  const Grid g = make_grid(1.0, 0.002);
  const GammaTable gam = build_gamma_for_system(s, g);
  const double expected = gam.at(g.count, g.count)(1, 1);
  const std::size_t paths = 10000;
  double s1 = 0, s2 = 0;
  for (std::size_t n = 0; n < paths; ++n) {
    RandomStream stream(71, n);
    const double a = simulate_v_innovation(s.noise1, g, stream).memory[g.count];
    s1 += a;
    s2 += a * a;
  }
  const double m = s1 / paths;
  const double var = (s2 - paths * m * m) / (paths - 1);
  EXPECT_NEAR(var, expected, 3 * expected * std::sqrt(2.0 / (paths - 1)));
}

TEST(ErrorTable, ZeroGammaGivesZeroError) {
  const Grid g = make_grid(1.0, 0.1);
  ObservationKernelSpec obs{[](double) { return 2.0; }, [](double, double) { return 0.0; }};
  const ErrorTable p = solve_error_table(GammaTable(g), obs, g);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) EXPECT_EQ(p.at(i, j).cwiseAbs().maxCoeff(), 0.0);
  const std::vector<double> y(g.size(), 0.0);
  for (const Vec3& z : run_filter_volterra(p, obs, y, g)) EXPECT_EQ(z.cwiseAbs().maxCoeff(), 0.0);
}

TEST(ErrorTable, RejectsBadInputs) {
  const Grid g = make_grid(1.0, 0.1);
  ObservationKernelSpec obs{[](double) { return 0.0; }, [](double, double) { return 0.0; }};
  EXPECT_THROW(solve_error_table(GammaTable(g), obs, g), std::invalid_argument);
  obs.mu = [](double) { return 1.0; };
  EXPECT_THROW(solve_error_table(GammaTable(g), obs, make_grid(1.0, 0.05)), std::invalid_argument);
  EXPECT_THROW(solve_error_table(std::shared_ptr<const GammaTable>{}, obs, g), std::invalid_argument);
  const ErrorTable p = solve_error_table(GammaTable(g), obs, g);
  EXPECT_THROW(p.at(2, 5), std::out_of_range);
  const std::vector<double> short_y(5, 0.0);
  EXPECT_THROW(run_filter_volterra(p, obs, short_y, g), std::invalid_argument);
}

class VolterraFine : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    grid_ = make_grid(1.0, 0.001);
    ou_ = std::make_unique<ErrorTable>(solve_error_table(
        build_gamma_for_system(ou_system(), grid_), observation_kernel(ou_system()), grid_));
    full_ = std::make_unique<ErrorTable>(solve_error_table(
        build_gamma_for_system(theta2_system(), grid_), observation_kernel(theta2_system()),
        grid_));
  }
  static void TearDownTestSuite() {
    ou_.reset();
    full_.reset();
  }
  static Grid grid_;
  static std::unique_ptr<ErrorTable> ou_, full_;
};
Grid VolterraFine::grid_;
std::unique_ptr<ErrorTable> VolterraFine::ou_, VolterraFine::full_;

TEST_F(VolterraFine, OuCaseMatchesKalmanBucy) {
  const SystemSpec s = ou_system();
  const std::vector<double> y = simulated_y(s, grid_, 5);
  const KalmanBucyPath kb = kalman_bucy(s.theta, s.sigma, s.mu, 0.0, 0.0, grid_, y);
  const std::vector<Vec3> z = run_filter_volterra(*ou_, observation_kernel(s), y, grid_);
  double p_gap = 0.0, x_gap = 0.0, lag_gap = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    p_gap = std::max(p_gap, std::abs(ou_->diagonal(i)(0, 0) - kb.gamma[i]));
    x_gap = std::max(x_gap, std::abs(z[i](0) - kb.xtilde[i]));
  }
  for (std::size_t i = 0; i < grid_.size(); i += 97)
    for (std::size_t j = 0; j <= i; j += 53) {
      const double expected = std::exp(s.theta * (grid_.node(i) - grid_.node(j))) * kb.gamma[j];
      lag_gap = std::max(lag_gap, std::abs(ou_->at(i, j)(0, 0) - expected));
    }
  EXPECT_LT(p_gap, 1e-3);
  EXPECT_LT(lag_gap, 1e-3);
  EXPECT_LT(x_gap, 1e-2);
}

TEST_F(VolterraFine, DiagonalMatchesRiccati) {
  const std::vector<Mat3> ric = integrate_riccati(theta2_system(), grid_);
  double gap = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i)
    gap = std::max(gap, (full_->diagonal(i) - ric[i]).cwiseAbs().maxCoeff());
  EXPECT_LT(gap, 5e-3);
}

// Q(t,s) a(s) = e^{-(t-s)F} (P(s) + D(s)) a(s) on random node pairs.
TEST_F(VolterraFine, FactorizationThroughTransitionMatrix) {
  const SystemSpec s = theta2_system();
  const std::vector<Mat3> ric = integrate_riccati(s, grid_);
  RandomStream rs(3, 3);
  double worst = 0.0;
  for (int k = 0; k < 60; ++k) {
    std::size_t i = static_cast<std::size_t>(std::abs(rs.normal()) * 400) % grid_.size();
    std::size_t j = static_cast<std::size_t>(std::abs(rs.normal()) * 400) % grid_.size();
    if (j > i) std::swap(i, j);
    const double t = grid_.node(i), u = grid_.node(j);
    const CoeffMatrices c = coeff_matrices(s, u);
    const Vec3 expected = transition_matrix(s, t - u) * (ric[j] + c.D) * c.a;
    worst = std::max(worst, (full_->gain(i, j) - expected).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst, 2e-2);
}

TEST_F(VolterraFine, DiagonalIsPsdAndBelowPrior) {
  const GammaTable gam = build_gamma_for_system(theta2_system(), grid_);
  for (std::size_t i = 0; i < grid_.size(); i += 7) {
    const Mat3& p = full_->diagonal(i);
    EXPECT_LT((p - p.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    // the explicit march loses definiteness at O(dt), see NegativePartVanishesWithStep
    EXPECT_GE(min_eigenvalue(p), -grid_.step * std::max(1.0, p.trace()));
    EXPECT_GE((gam.at(i, i) - p).trace(), -1e-12);
  }
}

TEST(Volterra, FirstOrderConvergenceBetweenSteps) {
  const SystemSpec s = theta2_system();
  auto diag_at_one = [&](double dt) {
    const Grid g = make_grid(1.0, dt);
    const ErrorTable p = solve_error_table(build_gamma_for_system(s, g), observation_kernel(s), g);
    return p.diagonal(g.count);
  };
  const Mat3 a = diag_at_one(0.02), b = diag_at_one(0.01), c = diag_at_one(0.005);
  const double r = (a - b).norm() / (b - c).norm();
  EXPECT_GT(r, 1.6);
  EXPECT_LT(r, 2.5);
}

TEST(Volterra, NegativePartVanishesWithStep) {
  const SystemSpec s = theta2_system();
  auto worst = [&](double dt) {
    const Grid g = make_grid(0.5, dt);
    const ErrorTable p = solve_error_table(build_gamma_for_system(s, g), observation_kernel(s), g);
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) m = std::min(m, min_eigenvalue(p.diagonal(i)));
    return -m;
  };
  const double a = worst(0.004), b = worst(0.002), c = worst(0.001);
  EXPECT_GT(a / b, 1.8);
  EXPECT_GT(b / c, 1.8);
}

TEST(Volterra, LinearInObservations) {
  const SystemSpec s = theta2_system();
  const Grid g = make_grid(1.0, 0.01);
  const ErrorTable p = solve_error_table(build_gamma_for_system(s, g), observation_kernel(s), g);
  const std::vector<double> y1 = simulated_y(s, g, 1), y2 = simulated_y(s, g, 2);
  std::vector<double> y3(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) y3[i] = 2.0 * y1[i] - 0.5 * y2[i];
  const auto obs = observation_kernel(s);
  const auto z1 = run_filter_volterra(p, obs, y1, g), z2 = run_filter_volterra(p, obs, y2, g),
             z3 = run_filter_volterra(p, obs, y3, g);
  for (std::size_t i = 0; i < g.size(); ++i)
    EXPECT_LT((z3[i] - (2.0 * z1[i] - 0.5 * z2[i])).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Volterra, MatchesRiccatiFilterAtFirstOrder) {
  const SystemSpec s = theta2_system();
  auto gap = [&](double dt) {
    const Grid g = make_grid(1.0, dt);
    const std::vector<double> y = simulated_y(s, g, 8);
    const FilterTrajectory a = run_system_volterra(s, g, y);
    const FilterTrajectory b = run_filter(s, g, y);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      worst = std::max(worst, (a.zhat[i] - b.zhat[i]).cwiseAbs().maxCoeff());
    return worst;
  };
  EXPECT_LT(gap(0.01), 5e-2);
}

TEST(Volterra, NonzeroInitialMeanIsHandled) {
  SystemSpec s = ou_system();
  s.x0_mean = 1.5;
  s.x0_var = 0.2;
  const Grid g = make_grid(1.0, 0.002);
  const std::vector<double> y = simulated_y(s, g, 4);
  const FilterTrajectory v = run_system_volterra(s, g, y);
  const KalmanBucyPath kb = kalman_bucy(s.theta, s.sigma, s.mu, s.x0_mean, s.x0_var, g, y);
  EXPECT_NEAR(v.zhat[0](0), 1.5, 1e-15);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(v.zhat[i](0), kb.xtilde[i], 3e-2);
}
