#include "memfilter/system.hpp"

#include <cmath>

namespace memfilter {

PathBundle simulate_system(const SystemSpec& spec, const Grid& grid, RandomStream& state_stream,
                           RandomStream& observation_stream) {
  validate(spec);
  PathBundle b;
  b.grid = grid;
  b.noise1 = simulate_v(spec.noise1, grid, state_stream);
  const double x0 = spec.x0_mean + std::sqrt(spec.x0_var) * state_stream.normal();
  b.noise2 = simulate_v(spec.noise2, grid, observation_stream);

  const std::size_t n = grid.size();
  const double dt = grid.step;
  b.x.resize(n);
  b.y.resize(n);
  b.x[0] = x0;
  b.y[0] = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double xi = b.x[i];
    b.x[i + 1] = xi + spec.theta * xi * dt + spec.sigma * (b.noise1.v[i + 1] - b.noise1.v[i]);
    b.y[i + 1] = b.y[i] + spec.mu * xi * dt + (b.noise2.v[i + 1] - b.noise2.v[i]);
  }
  return b;
}

}  // namespace memfilter
