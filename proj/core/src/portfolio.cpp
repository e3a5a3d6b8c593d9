#include "memfilter/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace memfilter {

void validate(const MarketSpec& spec) {
  if (!(spec.s0 > 0.0) || !std::isfinite(spec.s0))
    throw std::invalid_argument("s0 must be positive and finite");
  validate(filter_system(spec));
}

SystemSpec filter_system(const MarketSpec& spec) {
  SystemSpec s;
  s.theta = spec.theta;
  s.sigma = spec.sigma;
  s.mu = 1.0;
  s.x0_mean = spec.rho_mean;
  s.x0_var = spec.rho_var;
  s.noise1 = spec.noise1;
  s.noise2 = spec.noise2;
  return s;
}

MarketPath simulate_market(const MarketSpec& spec, const Grid& grid, RandomStream& state_stream,
                           RandomStream& observation_stream) {
  validate(spec);
  MarketPath m;
  m.paths = simulate_system(filter_system(spec), grid, state_stream, observation_stream);
  const std::vector<double>& y = m.paths.y;
  m.s.resize(grid.size());
  m.s[0] = spec.s0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    m.s[i + 1] = m.s[i] * std::exp(y[i + 1] - y[i] - 0.5 * grid.step);
  return m;
}

std::vector<double> price_to_observation(std::span<const double> s, double s0, const Grid& grid) {
  require_path_length(grid, s.size(), "price path");
  if (!(s0 > 0.0)) throw std::invalid_argument("s0 must be positive");
  std::vector<double> y(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] > 0.0))
      throw std::invalid_argument("price must be positive (node " + std::to_string(i) + ")");
    y[i] = std::log(s[i] / s0) + 0.5 * grid.node(i);
  }
  return y;
}

std::vector<double> observation_to_price(std::span<const double> y, double s0, const Grid& grid) {
  require_path_length(grid, y.size(), "observation path");
  if (!(s0 > 0.0)) throw std::invalid_argument("s0 must be positive");
  std::vector<double> s(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) s[i] = s0 * std::exp(y[i] - 0.5 * grid.node(i));
  return s;
}

StrategyPath run_strategy(const MemoryFilter& filter, const MarketSpec& spec, double x,
                          std::span<const double> y) {
  validate(spec);
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("initial capital must be > 0");
  const Grid& grid = filter.grid();
  require_path_length(grid, y.size(), "observation path");

  StrategyPath out;
  out.grid = grid;
  out.zhat = filter.run(y).zhat;
  const std::size_t n = grid.size();
  const double dt = grid.step;
  const Vec3 a(1.0, 0.0, -1.0);
  out.ratio.resize(n);
  out.lhat.resize(n);
  out.pi0.resize(n);
  out.wealth.resize(n);
  out.recursion_wealth.resize(n);

  for (std::size_t i = 0; i < n; ++i) out.ratio[i] = a.dot(out.zhat[i]);
  out.lhat[0] = 1.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double c = out.ratio[i];
    const double innovation = (y[i + 1] - y[i]) - c * dt;
    out.lhat[i + 1] = out.lhat[i] * std::exp(-c * innovation - 0.5 * c * c * dt);
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.wealth[i] = x / out.lhat[i];
    out.pi0[i] = x * out.ratio[i] / out.lhat[i];
  }

  const std::vector<double> s = observation_to_price(y, spec.s0, grid);
  out.recursion_wealth[0] = x;
  for (std::size_t i = 0; i + 1 < n; ++i)
    out.recursion_wealth[i + 1] = out.recursion_wealth[i] + out.pi0[i] * (s[i + 1] / s[i] - 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double gap = std::abs(out.recursion_wealth[i] - out.wealth[i]) / out.wealth[i];
    out.max_recursion_gap = std::max(out.max_recursion_gap, gap);
  }
  out.terminal_recursion_gap =
      std::abs(out.recursion_wealth[n - 1] - out.wealth[n - 1]) / out.wealth[n - 1];
  return out;
}

StrategyPath run_strategy(const MarketSpec& spec, double x, const Grid& grid,
                          std::span<const double> y) {
  validate(spec);
  return run_strategy(MemoryFilter(filter_system(spec), grid), spec, x, y);
}

std::vector<double> constant_proportion_wealth(double c, double x, const Grid& grid,
                                               std::span<const double> y) {
  require_path_length(grid, y.size(), "observation path");
  if (!(x > 0.0)) throw std::invalid_argument("initial capital must be > 0");
  std::vector<double> w(y.size());
  w[0] = x;
  for (std::size_t i = 0; i + 1 < y.size(); ++i)
    w[i + 1] = w[i] * std::exp(c * (y[i + 1] - y[i]) - 0.5 * c * c * grid.step);
  return w;
}

}  // namespace memfilter
