#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "memfilter/grid.hpp"
#include "memfilter/linalg.hpp"
#include "memfilter/memory_filter.hpp"

namespace memfilter {

/// Lower-triangular table of 3x3 blocks indexed by node pairs (i, j), j <= i.
/// Column j is stored contiguously for i = j..N.
class TriangularTable {
 public:
  TriangularTable() = default;
  explicit TriangularTable(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  Mat3& at(std::size_t i, std::size_t j);
  const Mat3& at(std::size_t i, std::size_t j) const;

 private:
  std::size_t offset(std::size_t i, std::size_t j) const;

  Grid grid_;
  std::vector<std::size_t> column_start_;
  std::vector<Mat3> blocks_;
};

/// Gamma(t_i, s_j) = E[Z(t_i) Z(s_j)^T] for Z = (X, U, alpha), s_j <= t_i.
using GammaTable = TriangularTable;

/// Observation Y(t) = int_0^t mu(s) X(s) ds + V(t) with V = B - int alpha ds and
/// alpha(t) = int_0^t l(t, s) dB(s). Then a(s) = (mu(s), 0, -1) and D(t, s) has
/// l(t, s) / mu(s) in position (3, 1).
struct ObservationKernelSpec {
  std::function<double(double)> mu;
  std::function<double(double, double)> l;
};

/// mu(t) = spec.mu and l = kernel_l(spec.noise2).
ObservationKernelSpec observation_kernel(const SystemSpec& spec);

/// Gamma for Z = (X, alpha1, alpha2) of the linear system, with every integral
/// over [0, s_j] taken by the composite trapezoid rule on the grid nodes. X is
/// centred: only x0_var enters.
GammaTable build_gamma_for_system(const SystemSpec& spec, const Grid& grid);

/// Same entry as build_gamma_for_system(spec, grid).at(i, j), computed by
/// direct trapezoid sums over the state kernel. O(j) per call; meant for checks.
Mat3 gamma_entry_direct(const SystemSpec& spec, const Grid& grid, std::size_t i, std::size_t j);

/// Solution of the error-matrix integral equation. Stores the gain vectors
/// w(i, j) = (P(t_i, s_j) + D(t_i, s_j)) a(s_j), the diagonal P(t_j, t_j), and
/// evaluates off-diagonal P on demand.
class ErrorTable {
 public:
  const Grid& grid() const noexcept { return grid_; }
  /// P(t_i, s_j), j <= i. O(j).
  Mat3 at(std::size_t i, std::size_t j) const;
  const Mat3& diagonal(std::size_t j) const { return diag_.at(j); }
  Vec3 gain(std::size_t i, std::size_t j) const;

 private:
  friend ErrorTable solve_error_table(std::shared_ptr<const GammaTable> gamma,
                                      const ObservationKernelSpec& obs, const Grid& grid);
  const double* column(std::size_t j) const { return w_.data() + 3 * column_start_[j]; }

  Grid grid_;
  std::shared_ptr<const GammaTable> gamma_;
  std::vector<std::size_t> column_start_;
  std::vector<double> w_;
  std::vector<Mat3> diag_;
};

/// Explicit march in s: P(t_i, s_j) = Gamma(t_i, s_j)
///   - dt sum_{r<j} (P + D)(t_i, r) a(r) a(r)^T (P + D)(s_j, r)^T.
/// O(N^3) time.
ErrorTable solve_error_table(std::shared_ptr<const GammaTable> gamma,
                             const ObservationKernelSpec& obs, const Grid& grid);
ErrorTable solve_error_table(GammaTable gamma, const ObservationKernelSpec& obs, const Grid& grid);

/// Zhat(t_i) = sum_{k<i} w(i, k) (Y(t_{k+1}) - Y(t_k) - a(t_k)^T Zhat(t_k) dt).
/// Centred case: Zhat(0) = 0.
std::vector<Vec3> run_filter_volterra(const ErrorTable& ptable, const ObservationKernelSpec& obs,
                                      std::span<const double> y, const Grid& grid);

/// Volterra route for the linear system including a nonzero x0_mean: the known
/// mean e^{theta t} x0_mean is removed from Y, the centred problem is filtered,
/// and the mean is added back to the X component.
FilterTrajectory run_system_volterra(const SystemSpec& spec, const Grid& grid,
                                     std::span<const double> y);

}  // namespace memfilter
