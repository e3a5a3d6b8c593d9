#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "memfilter/noise.hpp"

namespace memfilter {

// All estimators assume unit sample spacing. For samples taken every dt,
// divide lag times by dt and multiply u_j by 1/dt before comparing with U or H.

/// Lag statistics for lags j = 1..max_lag: u[j-1] and mean[j-1].
struct VarianceCurve {
  std::vector<double> u;
  std::vector<double> mean;
  std::size_t samples = 0;

  std::size_t max_lag() const noexcept { return u.size(); }
};

/// m_j = (N-j)^{-1} sum_i (v_{i+j} - v_i),
/// u_j = (j (N-j-1))^{-1} sum_{i=1}^{N-j} (v_{i+j} - v_i - m_j)^2.
/// Throws std::invalid_argument unless N >= max_lag + 2 and max_lag >= 1.
VarianceCurve empirical_u(std::span<const double> v, std::size_t max_lag);

/// Same statistics for the residuals x_{i+j} - e^{-theta j} x_i.
VarianceCurve empirical_h(std::span<const double> x, double theta, std::size_t max_lag);

/// Lag cross-moments of x that give h_j(theta) for any theta in O(J), equal to
/// empirical_h up to rounding.
class LagMoments {
 public:
  LagMoments(std::span<const double> x, std::size_t max_lag);
  VarianceCurve h(double theta) const;
  std::size_t max_lag() const noexcept { return lead_sq_.size(); }

 private:
  std::size_t samples_;
  double centre_ = 0.0;
  // Per lag j over i = 1..N-j of the centred samples:
  // sum x_{i+j}, sum x_i, sum x_{i+j}^2, sum x_i^2, sum x_i x_{i+j}.
  std::vector<double> lead_, lag_, lead_sq_, lag_sq_, cross_;
};

/// Variance ratio H(t) of the memory OU process dX = -theta X dt + sigma dV.
double ou_variance_ratio_h(double p, double q, double theta, double sigma, double t);

struct FitResult {
  std::vector<std::string> names;
  std::vector<double> params;
  double sse = 0.0;
  int iterations = 0;
  bool converged = false;
  /// |p| < 1e-3: q is not identifiable from the variance curve.
  bool p_ridge = false;

  double param(const std::string& name) const;
};

/// Least squares fit of U(j; p, q) to u_j, j = 1..J. Nelder-Mead runs on
/// (log r, log q), which keeps q > 0 and p > -q. Without `init` the best of a
/// 5x5 start grid q in [0.05, 3], p in [-0.9 q, 5] is returned.
FitResult fit_pq(const VarianceCurve& curve, std::optional<MemoryParams> init = std::nullopt);

/// Fits (p, q, theta, sigma) by minimizing sum_j (H(j) - h_j(theta))^2, with
/// h_j recomputed at every trial theta.
FitResult fit_ou_params(std::span<const double> x, std::size_t max_lag);

/// Same objective against a fixed target curve h_1..h_J that does not depend
/// on theta, optionally with theta held at a known value.
///
/// With theta free such a target does not pin the parameters down: H depends
/// on (theta, r) only through the decay rates {2 theta, theta + r}, and
/// swapping them, theta' = (theta + r) / 2 and r' = (3 theta - r) / 2,
/// generally gives a second exact fit.
FitResult fit_ou_to_curve(std::span<const double> h,
                          std::optional<double> fixed_theta = std::nullopt);

struct OuMemorySpec {
  MemoryParams noise;
  double theta = 1.0;
  double sigma = 1.0;
  double x0 = 0.0;
};

/// x_1..x_count of dX = -theta X dt + sigma dV at unit times, with V from the
/// state-space scheme on a sub-grid of `substeps` steps per unit time and X
/// advanced by X <- e^{-theta h} (X + sigma dV).
std::vector<double> simulate_ou_memory(const OuMemorySpec& spec, std::size_t count,
                                       std::size_t substeps, RandomStream& stream);

/// v_1..v_count of V at unit times (state-space scheme, `substeps` per unit).
std::vector<double> sample_memory_noise(const MemoryParams& params, std::size_t count,
                                        std::size_t substeps, RandomStream& stream);

}  // namespace memfilter
