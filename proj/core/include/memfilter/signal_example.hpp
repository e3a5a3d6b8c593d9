#pragma once

#include <string>
#include <vector>

#include "memfilter/grid.hpp"
#include "memfilter/linalg.hpp"
#include "memfilter/noise.hpp"

namespace memfilter {

// Estimating a constant signal rho ~ N(0, v2) from dY = rho dt + dV with V a
// memory noise. The error matrix of (rho, alpha) has a closed form in terms of
//   psi(t) = exp int_0^t (r - l(s)) ds,   phi(t) = int_0^t l psi ds,
//   xi(t)  = int_0^t (psi + phi) / psi^2 ds,
// and a fourth integral eta. All integrals use the cumulative trapezoid rule.

enum class SignalClosedForm {
  /// eta = int (1 - l psi xi + phi / psi) ds and P22 = c phi^2 / psi^2.
  /// This is what linearizing the Riccati equation gives.
  Corrected,
  /// eta = int (1 - psi xi + phi / psi) ds and P22 = c v2 phi^2 / psi^2,
  /// kept for comparison against the ODE.
  AsPrinted,
};

/// P(t_i) = c(t_i) [[1, -phi/psi], [-phi/psi, P22]] with c = v2 / (1 + v2 eta + v2 xi phi).
std::vector<Mat2> signal_example_error(double v2, const MemoryParams& noise, const Grid& grid,
                                       SignalClosedForm form = SignalClosedForm::Corrected);

/// RK4 solution of dP/dt = -H P - P H^T - P a a^T P with H = [[0, 0], [l, r - l]],
/// a = (1, -1) and P(0) = diag(v2, 0).
std::vector<Mat2> signal_example_riccati(double v2, const MemoryParams& noise, const Grid& grid);

struct SignalExampleReport {
  double max_gap_corrected = 0.0;
  double max_gap_printed = 0.0;
  /// max |P_ode(dt) - P_ode(dt/2)| over the coarse nodes.
  double ode_halving_gap = 0.0;
  double tolerance = 0.0;
  bool corrected_agrees = false;
  bool printed_agrees = false;
};

/// Compares both closed-form variants against the ODE on `grid`.
SignalExampleReport compare_signal_example(double v2, const MemoryParams& noise, const Grid& grid,
                                           double tolerance);

std::string to_json(const SignalExampleReport& report);

}  // namespace memfilter
