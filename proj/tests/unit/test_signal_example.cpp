#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "memfilter/signal_example.hpp"

using namespace memfilter;

TEST(SignalExample, InitialMatrix) {
  const Grid g = make_grid(1.0, 0.01);
  for (SignalClosedForm form : {SignalClosedForm::Corrected, SignalClosedForm::AsPrinted}) {
    const Mat2 p0 = signal_example_error(1.7, {0.5, 0.3}, g, form).front();
    EXPECT_NEAR(p0(0, 0), 1.7, 1e-15);
    EXPECT_EQ(p0(0, 1), 0.0);
    EXPECT_EQ(p0(1, 1), 0.0);
  }
  const Mat2 r0 = signal_example_riccati(1.7, {0.5, 0.3}, g).front();
  EXPECT_EQ(r0, (Mat2() << 1.7, 0, 0, 0).finished());
}

TEST(SignalExample, ClassicalLimit) {
  const Grid g = make_grid(10.0, 0.001);
  const double v2 = 2.0;
  const std::vector<Mat2> p = signal_example_error(v2, {0.0, 0.3}, g);
  for (std::size_t i = 0; i < g.size(); i += 250) {
    EXPECT_NEAR(p[i](0, 0), v2 / (1 + v2 * g.node(i)), 1e-6);
    EXPECT_EQ(p[i](1, 1), 0.0);
  }
}

TEST(SignalExample, CorrectedFormMatchesOde) {
  const Grid g = make_grid(5.0, 0.001);
  const std::vector<Mat2> a = signal_example_error(1.0, {0.5, 0.3}, g);
  const std::vector<Mat2> b = signal_example_riccati(1.0, {0.5, 0.3}, g);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(a[i](0, 1), a[i](1, 0));
    worst = std::max(worst, (a[i] - b[i]).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(SignalExample, ReportFlagsPrintedForm) {
  const SignalExampleReport r = compare_signal_example(1.0, {0.5, 0.3}, make_grid(10.0, 0.01), 1e-6);
  EXPECT_TRUE(r.corrected_agrees);
  EXPECT_FALSE(r.printed_agrees);
  EXPECT_LT(r.ode_halving_gap, 1e-6);
  EXPECT_GT(r.max_gap_printed, 1.0);
  const std::string js = to_json(r);
  EXPECT_NE(js.find("\"flag\""), std::string::npos);
  EXPECT_NE(js.find("max_gap_printed"), std::string::npos);
}

TEST(SignalExample, NegativeMemory) {
  const Grid g = make_grid(4.0, 0.001);
  const std::vector<Mat2> a = signal_example_error(0.5, {-0.2, 0.6}, g);
  const std::vector<Mat2> b = signal_example_riccati(0.5, {-0.2, 0.6}, g);
  for (std::size_t i = 0; i < g.size(); i += 100)
    EXPECT_LT((a[i] - b[i]).cwiseAbs().maxCoeff(), 1e-6) << g.node(i);
}
