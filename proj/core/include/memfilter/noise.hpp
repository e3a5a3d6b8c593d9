#pragma once

#include <vector>

#include "memfilter/grid.hpp"
#include "memfilter/random.hpp"

namespace memfilter {

/// Memory parameters (p, q) of one noise channel V. Valid when q > 0 and
/// p > -q, so that r = p + q > 0. p = 0 is plain Brownian motion.
struct MemoryParams {
  double p = 0.0;
  double q = 1.0;

  double r() const noexcept { return p + q; }
  bool operator==(const MemoryParams&) const = default;
};

bool is_valid(const MemoryParams& params) noexcept;
/// Throws std::invalid_argument naming the violated bound.
void validate(const MemoryParams& params);

/// Kernel k(t, s) of alpha(t) = int_0^t k(t, s) dV(s), for 0 <= s <= t.
double kernel_k(const MemoryParams& params, double t, double s);

/// Resolvent kernel l(t, s) = p e^{-r(t-s)} (1 - 2pq / ((2q+p)^2 e^{2qs} - p^2)).
double kernel_l(const MemoryParams& params, double t, double s);

/// Diagonal l(t) = l(t, t). The correction term is dropped once q t > 300.
double diag_l(const MemoryParams& params, double t);

/// Var(V(t+s) - V(s)) / t for t > 0.
double variance_ratio_u(const MemoryParams& params, double t);

enum class NoiseScheme {
  /// V = W - int xi ds with xi the stationary OU memory state driven by W.
  StateSpace,
  /// V = B - int alpha ds with alpha(t) = int_0^t l(t, s) dB(s).
  Innovation,
};

/// One simulated noise path on a grid. `driver` is W (state-space scheme)
/// or B (innovation scheme); `memory` is xi or alpha respectively.
struct NoisePath {
  Grid grid;
  NoiseScheme scheme = NoiseScheme::StateSpace;
  std::vector<double> driver;
  std::vector<double> memory;
  std::vector<double> v;
};

/// State-space scheme. xi(0) is drawn from its stationary law
/// N(0, p^2 / (2(p+q))); xi is advanced by exact OU transitions jointly
/// Gaussian with the step's dW, and V(t_{i+1}) = V(t_i) + dW_i - xi(t_i) dt.
NoisePath simulate_v(const MemoryParams& params, const Grid& grid, RandomStream& stream);

/// Innovation scheme: alpha(t_{i+1}) = e^{-r dt} (alpha(t_i) + l(t_i) dB_i),
/// V(t_{i+1}) = V(t_i) + dB_i - alpha(t_i) dt.
NoisePath simulate_v_innovation(const MemoryParams& params, const Grid& grid,
                                RandomStream& stream);

NoisePath simulate_noise(const MemoryParams& params, const Grid& grid, RandomStream& stream,
                         NoiseScheme scheme);

struct ResolventResidual {
  /// max |l - k + int_s^t l(t,u) k(u,s) du|
  double left = 0.0;
  /// max |l - k + int_s^t k(t,u) l(u,s) du|
  double right = 0.0;
};

/// Maximum over node pairs s_j <= t_i of both resolvent identities, with the
/// integrals evaluated by the composite trapezoid rule on the grid nodes.
ResolventResidual resolvent_residual(const MemoryParams& params, const Grid& grid);

}  // namespace memfilter
