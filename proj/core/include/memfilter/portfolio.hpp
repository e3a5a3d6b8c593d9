#pragma once

#include <span>
#include <vector>

#include "memfilter/memory_filter.hpp"
#include "memfilter/system.hpp"

namespace memfilter {

/// dS = S (U dt + dV2), dU = theta U dt + sigma dV1, U(0) = rho ~ N(rho_mean, rho_var),
/// with a unit money market, unit volatility and no drift offset.
struct MarketSpec {
  double s0 = 1.0;
  double theta = 0.0;
  double sigma = 0.0;
  double rho_mean = 0.0;
  double rho_var = 0.0;
  MemoryParams noise1;
  MemoryParams noise2;
};

void validate(const MarketSpec& spec);

/// The filtering problem behind the market: X = U, mu = 1.
SystemSpec filter_system(const MarketSpec& spec);

struct MarketPath {
  PathBundle paths;  // paths.x is the drift U, paths.y the observation Y
  std::vector<double> s;
};

/// U and Y as in simulate_system, then S(t_{i+1}) = S(t_i) exp(Y(t_{i+1}) - Y(t_i) - dt/2).
MarketPath simulate_market(const MarketSpec& spec, const Grid& grid, RandomStream& state_stream,
                           RandomStream& observation_stream);

/// Y(t_i) = log(s(t_i) / s0) + t_i / 2. Throws for non-positive prices.
std::vector<double> price_to_observation(std::span<const double> s, double s0, const Grid& grid);
/// Inverse of price_to_observation.
std::vector<double> observation_to_price(std::span<const double> y, double s0, const Grid& grid);

struct StrategyPath {
  Grid grid;
  std::vector<Vec3> zhat;      // (Uhat, alpha1hat, alpha2hat)
  std::vector<double> ratio;   // a^T zhat = Uhat - alpha2hat
  std::vector<double> lhat;
  std::vector<double> pi0;
  std::vector<double> wealth;  // x / lhat
  /// Wealth rebuilt from X_{i+1} = X_i + pi0_i (S_{i+1} / S_i - 1).
  std::vector<double> recursion_wealth;
  /// max_i |recursion_wealth_i - wealth_i| / wealth_i
  double max_recursion_gap = 0.0;
  double terminal_recursion_gap = 0.0;
};

/// Filter with mu = 1, then L(t_{i+1}) = L(t_i) exp(-c dI - c^2 dt / 2) with
/// c = a^T zhat(t_i) and dI = dY - c dt; pi0 = x c / L and wealth = x / L.
StrategyPath run_strategy(const MarketSpec& spec, double x, const Grid& grid,
                          std::span<const double> y);
/// Same with a filter built once for filter_system(spec) on this grid.
StrategyPath run_strategy(const MemoryFilter& filter, const MarketSpec& spec, double x,
                          std::span<const double> y);

/// Our own baseline, not part of the optimality result: a constant fraction c
/// of wealth in the stock, stepped in log space, X_{i+1} = X_i exp(c dY - c^2 dt / 2).
std::vector<double> constant_proportion_wealth(double c, double x, const Grid& grid,
                                               std::span<const double> y);

}  // namespace memfilter
