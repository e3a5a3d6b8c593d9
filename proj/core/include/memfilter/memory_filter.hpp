#pragma once

#include <span>
#include <vector>

#include "memfilter/grid.hpp"
#include "memfilter/linalg.hpp"
#include "memfilter/noise.hpp"

namespace memfilter {

/// Partially observed linear system
///   dX = theta X dt + sigma dV1,   X(0) = X0 ~ N(x0_mean, x0_var)
///   dY = mu X dt + dV2,            Y(0) = 0
/// with V1, V2 independent memory noises.
struct SystemSpec {
  double theta = 0.0;
  double sigma = 0.0;
  double mu = 1.0;
  double x0_mean = 0.0;
  double x0_var = 0.0;
  MemoryParams noise1;
  MemoryParams noise2;
};

void validate(const SystemSpec& spec);

/// Coefficients of the filter for Z = (X, alpha1, alpha2) at time t.
struct CoeffMatrices {
  Mat3 F;
  Mat3 D;
  Mat3 G;
  Mat3 H;
  Vec3 a;
};

CoeffMatrices coeff_matrices(const SystemSpec& spec, double t);

/// b(t) = (e^{theta t} - e^{-r1 t}) / (theta + r1), or t e^{theta t} when theta + r1 = 0.
/// The limit branch (with a first-order correction) is used for |theta + r1| < 1e-8.
double lemma_b(double theta, double r1, double t);

/// e^{-tF}: the propagator of E[Z(t + .) | past], built from lemma_b.
Mat3 transition_matrix(const SystemSpec& spec, double t);

/// P(t_i) from dP/dt = G - H P - P H^T - P a a^T P by classical RK4,
/// symmetrized after every step. Throws std::runtime_error at the first
/// non-finite node.
std::vector<Mat3> integrate_riccati(const SystemSpec& spec, const Grid& grid);

struct FilterTrajectory {
  Grid grid;
  std::vector<Vec3> zhat;
  std::vector<Mat3> P;
};

/// One of the two 2x2 reductions of the filter.
enum class ReducedModel {
  /// p2 = 0: Z = (X, alpha1).
  StateMemoryOnly,
  /// p1 = 0: Z = (X, alpha2).
  ObservationMemoryOnly,
};

enum class FilterPath {
  /// Use a 2x2 reduction when p2 = 0 or p1 = 0, otherwise the 3x3 filter.
  Automatic,
  Full,
};

struct ReducedTrajectory {
  Grid grid;
  ReducedModel model = ReducedModel::StateMemoryOnly;
  std::vector<Vec2> zhat;
  std::vector<Mat2> P;
};

std::vector<Mat2> integrate_riccati_reduced(const SystemSpec& spec, const Grid& grid,
                                            ReducedModel model);
ReducedTrajectory run_filter_reduced(const SystemSpec& spec, const Grid& grid,
                                     std::span<const double> y, ReducedModel model);
/// Places a reduced trajectory into the (X, alpha1, alpha2) layout with zeros
/// for the absent component.
FilterTrajectory embed(const ReducedTrajectory& reduced);

/// Optimal filter with the observation-independent Riccati part precomputed,
/// so that each observation path costs O(1) per node. Immutable after
/// construction and safe to share between threads.
class MemoryFilter {
 public:
  MemoryFilter(const SystemSpec& spec, const Grid& grid, FilterPath path = FilterPath::Automatic);

  /// Euler-Maruyama on dZ = -(F + (P + D) a a^T) Z dt + (P + D) a dY.
  FilterTrajectory run(std::span<const double> y) const;
  /// Filtered X only, without materializing the trajectory.
  void run_state(std::span<const double> y, std::span<double> xhat) const;

  const Grid& grid() const noexcept { return grid_; }
  const std::vector<Mat3>& error_matrices() const noexcept { return P_; }
  bool reduced() const noexcept { return reduced_; }

 private:
  Grid grid_;
  Vec3 z0_;
  bool reduced_ = false;
  std::vector<Mat3> P_;
  std::vector<Vec3> gain_;   // (P + D) a
  std::vector<Mat3> drift_;  // F + (P + D) a a^T
};

FilterTrajectory run_filter(const SystemSpec& spec, const Grid& grid, std::span<const double> y,
                            FilterPath path = FilterPath::Automatic);

/// Classical Kalman-Bucy filter for dX = theta X dt + sigma dB1, dY = mu X dt + dB2.
class KalmanBucyFilter {
 public:
  KalmanBucyFilter(double theta, double sigma, double mu, double x0_mean, double x0_var,
                   const Grid& grid);

  void run(std::span<const double> y, std::span<double> xtilde) const;
  const std::vector<double>& gamma() const noexcept { return gamma_; }
  const Grid& grid() const noexcept { return grid_; }

 private:
  double theta_;
  double mu_;
  double x0_mean_;
  Grid grid_;
  std::vector<double> gamma_;
};

struct KalmanBucyPath {
  std::vector<double> xtilde;
  std::vector<double> gamma;
};

/// gamma by RK4 on d gamma/dt = sigma^2 + 2 theta gamma - mu^2 gamma^2,
/// xtilde by Euler-Maruyama on dx = (theta - mu^2 gamma) x dt + mu gamma dY.
KalmanBucyPath kalman_bucy(double theta, double sigma, double mu, double x0_mean, double x0_var,
                           const Grid& grid, std::span<const double> y);

}  // namespace memfilter
