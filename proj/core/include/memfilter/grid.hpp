#pragma once

#include <cstddef>
#include <vector>

namespace memfilter {

/// Uniform time mesh t_i = i * step, i = 0..count, on [0, horizon].
///
/// Every path, filter and metric in the library is indexed by the nodes of a
/// single Grid, so arrays produced by different components line up
/// index-by-index.
struct Grid {
  double horizon = 0.0;
  double step = 0.0;
  std::size_t count = 0;

  double node(std::size_t i) const noexcept { return static_cast<double>(i) * step; }
  std::size_t size() const noexcept { return count + 1; }
  std::vector<double> nodes() const;

  bool operator==(const Grid&) const = default;
};

/// Builds a grid with count = round(horizon / step). Throws std::invalid_argument
/// for non-positive inputs, fewer than two steps, or |count * step - horizon| > 1e-9 * horizon.
Grid make_grid(double horizon, double step);

/// Throws std::invalid_argument if the two grids differ or a series does not
/// have one value per node.
void require_same_grid(const Grid& a, const Grid& b, const char* what);
void require_path_length(const Grid& grid, std::size_t length, const char* what);

}  // namespace memfilter
