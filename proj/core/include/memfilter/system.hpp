#pragma once

#include "memfilter/memory_filter.hpp"
#include "memfilter/noise.hpp"
#include "memfilter/random.hpp"

namespace memfilter {

/// Jointly sampled paths of one run of the linear system: both noise channels,
/// the state X and the observation Y on a common grid.
struct PathBundle {
  Grid grid;
  NoisePath noise1;
  NoisePath noise2;
  std::vector<double> x;
  std::vector<double> y;
};

/// V1 from `state_stream` (state-space scheme), then X0 ~ N(x0_mean, x0_var)
/// from the same stream; V2 from `observation_stream`. Euler steps
///   X_{i+1} = X_i + theta X_i dt + sigma dV1_i,   Y_{i+1} = Y_i + mu X_i dt + dV2_i.
PathBundle simulate_system(const SystemSpec& spec, const Grid& grid, RandomStream& state_stream,
                           RandomStream& observation_stream);

}  // namespace memfilter
