#include "memfilter/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace memfilter {

std::vector<double> Grid::nodes() const {
  std::vector<double> t(size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = node(i);
  return t;
}

Grid make_grid(double horizon, double step) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("make_grid: horizon must be positive and finite");
  }
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument("make_grid: step must be positive and finite");
  }
  const double ratio = horizon / step;
  if (ratio < 2.0 - 1e-9) {
    throw std::invalid_argument("make_grid: horizon/step must be at least 2");
  }
  const auto count = static_cast<std::size_t>(std::llround(ratio));
  if (std::abs(static_cast<double>(count) * step - horizon) > 1e-9 * horizon) {
    throw std::invalid_argument("make_grid: step " + std::to_string(step) +
                                " does not divide horizon " + std::to_string(horizon));
  }
  return Grid{horizon, step, count};
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

void require_path_length(const Grid& grid, std::size_t length, const char* what) {
  if (length != grid.size()) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(grid.size()) +
                                " values, got " + std::to_string(length));
  }
}

}  // namespace memfilter
