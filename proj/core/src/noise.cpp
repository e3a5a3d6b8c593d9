#include "memfilter/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "memfilter/ou.hpp"

namespace memfilter {
namespace {

constexpr double kCorrectionCutoff = 300.0;

void check_order(double t, double s, const char* what) {
  if (!(s >= 0.0)) throw std::invalid_argument(std::string(what) + ": s must be >= 0");
  if (s > t) throw std::invalid_argument(std::string(what) + ": requires s <= t");
}

// 2pq / ((2q+p)^2 e^{2qs} - p^2), written with e^{-2qs} so it never overflows.
double l_correction(const MemoryParams& c, double s) {
  if (c.p == 0.0 || c.q * s > kCorrectionCutoff) return 0.0;
  const double a = 2.0 * c.q + c.p;
  const double decay = std::exp(-2.0 * c.q * s);
  return 2.0 * c.p * c.q * decay / (a * a - c.p * c.p * decay);
}

}  // namespace

bool is_valid(const MemoryParams& params) noexcept {
  return std::isfinite(params.p) && std::isfinite(params.q) && params.q > 0.0 &&
         params.p > -params.q;
}

void validate(const MemoryParams& params) {
  if (!std::isfinite(params.p) || !std::isfinite(params.q)) {
    throw std::invalid_argument("MemoryParams: p and q must be finite");
  }
  if (!(params.q > 0.0)) throw std::invalid_argument("MemoryParams: q must be > 0");
  if (!(params.p > -params.q)) throw std::invalid_argument("MemoryParams: p must be > -q");
}

double kernel_k(const MemoryParams& params, double t, double s) {
  validate(params);
  check_order(t, s, "kernel_k");
  const double p = params.p;
  const double q = params.q;
  if (p == 0.0) return 0.0;
  const double a = 2.0 * q + p;
  // Numerator and denominator divided by e^{qt}; the denominator stays >= 4q(q+p) > 0.
  const double num = a - p * std::exp(-2.0 * q * s);
  const double den = a * a - p * p * std::exp(-2.0 * q * t);
  return p * a * std::exp(-q * (t - s)) * num / den;
}

double kernel_l(const MemoryParams& params, double t, double s) {
  validate(params);
  check_order(t, s, "kernel_l");
  if (params.p == 0.0) return 0.0;
  return params.p * std::exp(-params.r() * (t - s)) * (1.0 - l_correction(params, s));
}

double diag_l(const MemoryParams& params, double t) {
  validate(params);
  if (!(t >= 0.0)) throw std::invalid_argument("diag_l: t must be >= 0");
  return params.p * (1.0 - l_correction(params, t));
}

double variance_ratio_u(const MemoryParams& params, double t) {
  validate(params);
  if (!(t > 0.0)) throw std::invalid_argument("variance_ratio_u: t must be > 0");
  const double p = params.p;
  const double q = params.q;
  const double r = params.r();
  return q * q / (r * r) + p * (2.0 * q + p) / (r * r * r) * (-std::expm1(-r * t) / t);
}

NoisePath simulate_v(const MemoryParams& params, const Grid& grid, RandomStream& stream) {
  validate(params);
  const double dt = grid.step;
  const double r = params.r();
  const double sqdt = std::sqrt(dt);
  const std::size_t n = grid.size();

  // Correlation between dW over a step and the exact OU innovation over the
  // same step: Cov = p (1 - e^{-r dt}) / r, divided by the two std devs.
  const double unit_sd = ou_step_stddev(r, 1.0, dt);
  const double rho = std::min(1.0, -std::expm1(-r * dt) / (r * unit_sd * sqdt));
  const double rho_c = std::sqrt(std::max(0.0, 1.0 - rho * rho));

  NoisePath path{grid, NoiseScheme::StateSpace, std::vector<double>(n), std::vector<double>(n),
                 std::vector<double>(n)};
  path.memory[0] = std::abs(params.p) * std::sqrt(1.0 / (2.0 * r)) * stream.normal();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double z1 = stream.normal();
    const double z2 = stream.normal();
    const double dw = sqdt * z1;
    path.driver[i + 1] = path.driver[i] + dw;
    path.v[i + 1] = path.v[i] + dw - path.memory[i] * dt;
    path.memory[i + 1] = ou_exact_step(path.memory[i], r, params.p, dt, rho * z1 + rho_c * z2);
  }
  return path;
}

NoisePath simulate_v_innovation(const MemoryParams& params, const Grid& grid,
                                RandomStream& stream) {
  validate(params);
  const double dt = grid.step;
  const double decay = std::exp(-params.r() * dt);
  const double sqdt = std::sqrt(dt);
  const std::size_t n = grid.size();

  NoisePath path{grid, NoiseScheme::Innovation, std::vector<double>(n), std::vector<double>(n),
                 std::vector<double>(n)};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double db = sqdt * stream.normal();
    path.driver[i + 1] = path.driver[i] + db;
    path.v[i + 1] = path.v[i] + db - path.memory[i] * dt;
    path.memory[i + 1] = decay * (path.memory[i] + diag_l(params, grid.node(i)) * db);
  }
  return path;
}

NoisePath simulate_noise(const MemoryParams& params, const Grid& grid, RandomStream& stream,
                         NoiseScheme scheme) {
  return scheme == NoiseScheme::StateSpace ? simulate_v(params, grid, stream)
                                           : simulate_v_innovation(params, grid, stream);
}

ResolventResidual resolvent_residual(const MemoryParams& params, const Grid& grid) {
  validate(params);
  ResolventResidual result;
  if (params.p == 0.0) return result;

  const std::size_t n = grid.size();
  const double dt = grid.step;
  const double r = params.r();
  const double decay = std::exp(-r * dt);

  std::vector<double> lam(n);
  std::vector<double> r_decay(n);  // e^{-r m dt}
  for (std::size_t m = 0; m < n; ++m) {
    lam[m] = diag_l(params, grid.node(m));
    r_decay[m] = std::exp(-r * grid.node(m));
  }
  auto k = [&](std::size_t i, std::size_t j) {
    return kernel_k(params, grid.node(i), grid.node(j));
  };
  auto l = [&](std::size_t i, std::size_t j) { return r_decay[i - j] * lam[j]; };

  std::vector<double> k_col(n);
  // Left identity, column by column in s. With l(t,u) = e^{-r(t-u)} l(u), the
  // full-weight sum A_i = sum_{m=j..i} l(t_i,u_m) k(u_m,s_j) obeys a one-term recursion.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j; i < n; ++i) k_col[i] = k(i, j);
    double acc = lam[j] * k_col[j];
    result.left = std::max(result.left, std::abs(l(j, j) - k_col[j]));
    for (std::size_t i = j + 1; i < n; ++i) {
      acc = decay * acc + lam[i] * k_col[i];
      const double integral =
          dt * (acc - 0.5 * r_decay[i - j] * lam[j] * k_col[j] - 0.5 * lam[i] * k_col[i]);
      result.left = std::max(result.left, std::abs(l(i, j) - k_col[i] + integral));
    }
  }

  std::vector<double> k_row(n);
  // Right identity, row by row in t: C_j = sum_{m=j..i} k(t_i,u_m) e^{-r(u_m-s_j)}.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t m = 0; m <= i; ++m) k_row[m] = k(i, m);
    double acc = k_row[i];
    result.right = std::max(result.right, std::abs(l(i, i) - k_row[i]));
    for (std::size_t j = i; j-- > 0;) {
      acc = k_row[j] + decay * acc;
      const double integral =
          lam[j] * dt * (acc - 0.5 * k_row[j] - 0.5 * k_row[i] * r_decay[i - j]);
      result.right = std::max(result.right, std::abs(l(i, j) - k_row[j] + integral));
    }
  }
  return result;
}

}  // namespace memfilter
