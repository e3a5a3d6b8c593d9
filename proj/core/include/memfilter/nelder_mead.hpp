#pragma once

#include <functional>
#include <vector>

namespace memfilter {

struct NelderMeadOptions {
  double initial_step = 0.25;
  /// Converged once the largest distance between two vertices drops below this.
  double diameter_tol = 1e-8;
  int max_iterations = 20000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Unconstrained minimization with the standard reflection / expansion /
/// contraction / shrink coefficients (1, 2, 1/2, 1/2). Non-finite objective
/// values are treated as +infinity.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& options = {});

}  // namespace memfilter
