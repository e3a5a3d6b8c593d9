#include "memfilter/volterra.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace memfilter {

namespace {

double trapezoid_weight(std::size_t m, std::size_t j, double dt) {
  return (m == 0 || m == j) ? 0.5 * dt : dt;
}

std::vector<std::size_t> column_starts(const Grid& grid) {
  const std::size_t n = grid.size();
  std::vector<std::size_t> start(n + 1);
  start[0] = 0;
  for (std::size_t j = 0; j < n; ++j) start[j + 1] = start[j] + (n - j);
  return start;
}

}  // namespace

TriangularTable::TriangularTable(const Grid& grid)
    : grid_(grid), column_start_(column_starts(grid)), blocks_(column_start_.back(), Mat3::Zero()) {}

std::size_t TriangularTable::offset(std::size_t i, std::size_t j) const {
  if (j > i || i >= grid_.size())
    throw std::out_of_range("triangular table index (" + std::to_string(i) + ", " +
                            std::to_string(j) + ") outside j <= i <= N");
  return column_start_[j] + (i - j);
}

Mat3& TriangularTable::at(std::size_t i, std::size_t j) { return blocks_[offset(i, j)]; }
const Mat3& TriangularTable::at(std::size_t i, std::size_t j) const { return blocks_[offset(i, j)]; }

ObservationKernelSpec observation_kernel(const SystemSpec& spec) {
  validate(spec);
  const double mu = spec.mu;
  const MemoryParams n2 = spec.noise2;
  return {[mu](double) { return mu; },
          [n2](double t, double s) { return kernel_l(n2, t, s); }};
}

GammaTable build_gamma_for_system(const SystemSpec& spec, const Grid& grid) {
  validate(spec);
  const std::size_t n = grid.size();
  const double dt = grid.step;
  const double theta = spec.theta;
  const double sigma = spec.sigma;
  const double r1 = spec.noise1.r();
  const double r2 = spec.noise2.r();

  // Everything depends on the lag k = i - j through these.
  std::vector<double> growth(n), bk(n), decay1(n), decay2(n), l1(n), l2(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = grid.node(k);
    growth[k] = std::exp(theta * t);
    bk[k] = lemma_b(theta, r1, t);
    decay1[k] = std::exp(-r1 * t);
    decay2[k] = std::exp(-r2 * t);
    l1[k] = diag_l(spec.noise1, t);
    l2[k] = diag_l(spec.noise2, t);
  }

  // Trapezoid integrals over u in [0, s_j] of K(s_j,u)^2, K(s_j,u) l1(s_j,u),
  // l1(s_j,u)^2 and l2(s_j,u)^2, where K(s,u) = sigma (e^{theta(s-u)} - b(s-u) l1(u)).
  std::vector<double> ikk(n, 0.0), ikl(n, 0.0), ill(n, 0.0), il2(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    double skk = 0.0, skl = 0.0, sll = 0.0, s22 = 0.0;
    for (std::size_t m = 0; m <= j; ++m) {
      const std::size_t lag = j - m;
      const double w = trapezoid_weight(m, j, dt);
      const double kx = sigma * (growth[lag] - bk[lag] * l1[m]);
      const double a1 = decay1[lag] * l1[m];
      const double a2 = decay2[lag] * l2[m];
      skk += w * kx * kx;
      skl += w * kx * a1;
      sll += w * a1 * a1;
      s22 += w * a2 * a2;
    }
    ikk[j] = skk;
    ikl[j] = skl;
    ill[j] = sll;
    il2[j] = s22;
  }

  // For t = s + d: K(t,u) = e^{theta d} K(s,u) - sigma b(d) l1(s,u) and
  // l(t,u) = e^{-r d} l(s,u), so every entry is a combination of the diagonal
  // integrals above. This is the same trapezoid sum as evaluating K(t,.) directly.
  GammaTable gamma(grid);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = grid.node(j);
    const double x0_part = std::exp(2.0 * theta * s) * spec.x0_var;
    for (std::size_t i = j; i < n; ++i) {
      const std::size_t d = i - j;
      Mat3& g = gamma.at(i, j);
      g.setZero();
      g(0, 0) = growth[d] * (ikk[j] + x0_part) - sigma * bk[d] * ikl[j];
      g(0, 1) = growth[d] * ikl[j] - sigma * bk[d] * ill[j];
      g(1, 0) = decay1[d] * ikl[j];
      g(1, 1) = decay1[d] * ill[j];
      g(2, 2) = decay2[d] * il2[j];
    }
  }
  return gamma;
}

Mat3 gamma_entry_direct(const SystemSpec& spec, const Grid& grid, std::size_t i, std::size_t j) {
  validate(spec);
  if (j > i || i >= grid.size()) throw std::out_of_range("gamma entry index outside j <= i <= N");
  const double t = grid.node(i);
  const double s = grid.node(j);
  const double dt = grid.step;
  auto kx = [&](double at, double u) {
    return spec.sigma * (std::exp(spec.theta * (at - u)) -
                         lemma_b(spec.theta, spec.noise1.r(), at - u) * diag_l(spec.noise1, u));
  };
  Mat3 g = Mat3::Zero();
  for (std::size_t m = 0; m <= j && j > 0; ++m) {
    const double u = grid.node(m);
    const double w = trapezoid_weight(m, j, dt);
    g(0, 0) += w * kx(t, u) * kx(s, u);
    g(0, 1) += w * kx(t, u) * kernel_l(spec.noise1, s, u);
    g(1, 0) += w * kernel_l(spec.noise1, t, u) * kx(s, u);
    g(1, 1) += w * kernel_l(spec.noise1, t, u) * kernel_l(spec.noise1, s, u);
    g(2, 2) += w * kernel_l(spec.noise2, t, u) * kernel_l(spec.noise2, s, u);
  }
  g(0, 0) += std::exp(spec.theta * (t + s)) * spec.x0_var;
  return g;
}

Mat3 ErrorTable::at(std::size_t i, std::size_t j) const {
  if (j > i || i >= grid_.size()) throw std::out_of_range("error table index outside j <= i <= N");
  Mat3 p = gamma_->at(i, j);
  const double dt = grid_.step;
  for (std::size_t r = 0; r < j; ++r) {
    const Vec3 wi = gain(i, r);
    const Vec3 wj = gain(j, r);
    p.noalias() -= dt * wi * wj.transpose();
  }
  return p;
}

Vec3 ErrorTable::gain(std::size_t i, std::size_t j) const {
  if (j > i || i >= grid_.size()) throw std::out_of_range("gain index outside j <= i <= N");
  const double* w = column(j) + 3 * (i - j);
  return Vec3(w[0], w[1], w[2]);
}

ErrorTable solve_error_table(std::shared_ptr<const GammaTable> gamma,
                             const ObservationKernelSpec& obs, const Grid& grid) {
  if (!gamma) throw std::invalid_argument("gamma table is null");
  require_same_grid(gamma->grid(), grid, "gamma table");
  if (!obs.mu || !obs.l) throw std::invalid_argument("observation kernel is incomplete");

  const std::size_t n = grid.size();
  const double dt = grid.step;
  std::vector<Vec3> a(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double mu = obs.mu(grid.node(j));
    if (mu == 0.0 || !std::isfinite(mu))
      throw std::invalid_argument("observation gain mu must be finite and nonzero on the grid");
    a[j] = Vec3(mu, 0.0, -1.0);
  }

  ErrorTable table;
  table.grid_ = grid;
  table.gamma_ = gamma;
  table.column_start_ = column_starts(grid);
  table.w_.assign(3 * table.column_start_.back(), 0.0);
  table.diag_.resize(n);

  std::vector<double> acc;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t len = n - j;
    acc.assign(3 * len, 0.0);
    for (std::size_t i = j; i < n; ++i) {
      const Vec3 ga = gamma->at(i, j) * a[j];
      for (int c = 0; c < 3; ++c) acc[3 * (i - j) + c] = ga(c);
    }

    Mat3 pjj = gamma->at(j, j);
    for (std::size_t r = 0; r < j; ++r) {
      const double* col = table.column(r) + 3 * (j - r);
      const Vec3 wjr(col[0], col[1], col[2]);
      pjj.noalias() -= dt * wjr * wjr.transpose();
      const double coef = dt * wjr.dot(a[j]);
      for (std::size_t k = 0; k < 3 * len; ++k) acc[k] -= coef * col[k];
    }
    pjj = symmetrized(pjj);
    table.diag_[j] = pjj;

    const Vec3 diag_pa = pjj * a[j];
    for (int c = 0; c < 3; ++c) acc[c] = diag_pa(c);

    double* out = table.w_.data() + 3 * table.column_start_[j];
    const double sj = grid.node(j);
    for (std::size_t i = j; i < n; ++i) {
      const std::size_t k = 3 * (i - j);
      out[k] = acc[k];
      out[k + 1] = acc[k + 1];
      out[k + 2] = acc[k + 2] + obs.l(grid.node(i), sj);
    }
  }
  return table;
}

ErrorTable solve_error_table(GammaTable gamma, const ObservationKernelSpec& obs, const Grid& grid) {
  return solve_error_table(std::make_shared<const GammaTable>(std::move(gamma)), obs, grid);
}

std::vector<Vec3> run_filter_volterra(const ErrorTable& ptable, const ObservationKernelSpec& obs,
                                      std::span<const double> y, const Grid& grid) {
  require_same_grid(ptable.grid(), grid, "error table");
  require_path_length(grid, y.size(), "observation path");
  if (!obs.mu) throw std::invalid_argument("observation kernel is incomplete");

  const std::size_t n = grid.size();
  const double dt = grid.step;
  std::vector<Vec3> z(n, Vec3::Zero());
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const Vec3 a(obs.mu(grid.node(k)), 0.0, -1.0);
    const double innovation = (y[k + 1] - y[k]) - a.dot(z[k]) * dt;
    for (std::size_t i = k + 1; i < n; ++i) z[i] += ptable.gain(i, k) * innovation;
  }
  return z;
}

FilterTrajectory run_system_volterra(const SystemSpec& spec, const Grid& grid,
                                     std::span<const double> y) {
  validate(spec);
  require_path_length(grid, y.size(), "observation path");
  const std::size_t n = grid.size();

  std::vector<double> centred(n);
  std::vector<double> mean(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid.node(i);
    const double integral = spec.theta == 0.0 ? t : std::expm1(spec.theta * t) / spec.theta;
    mean[i] = std::exp(spec.theta * t) * spec.x0_mean;
    centred[i] = y[i] - spec.mu * spec.x0_mean * integral;
  }

  const ObservationKernelSpec obs = observation_kernel(spec);
  const ErrorTable table = solve_error_table(build_gamma_for_system(spec, grid), obs, grid);

  FilterTrajectory out;
  out.grid = grid;
  out.zhat = run_filter_volterra(table, obs, centred, grid);
  out.P.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.zhat[i](0) += mean[i];
    out.P[i] = table.diagonal(i);
  }
  return out;
}

}  // namespace memfilter
