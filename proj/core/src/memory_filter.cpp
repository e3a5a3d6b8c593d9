#include "memfilter/memory_filter.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace memfilter {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be finite");
}

// Classical RK4 for an autonomous-in-structure matrix ODE dP/dt = f(t, P).
template <typename M, typename Rhs>
std::vector<M> rk4_matrix(const Grid& grid, const M& p0, Rhs&& rhs) {
  std::vector<M> out(grid.size());
  out[0] = p0;
  const double h = grid.step;
  for (std::size_t i = 0; i < grid.count; ++i) {
    const double t = grid.node(i);
    const M& p = out[i];
    const M k1 = rhs(t, p);
    const M k2 = rhs(t + 0.5 * h, (p + 0.5 * h * k1).eval());
    const M k3 = rhs(t + 0.5 * h, (p + 0.5 * h * k2).eval());
    const M k4 = rhs(t + h, (p + h * k3).eval());
    M next = symmetrized(p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    if (!all_finite(next)) {
      throw std::runtime_error("Riccati integration blew up at node " + std::to_string(i + 1) +
                               " (t = " + std::to_string(grid.node(i + 1)) + ")");
    }
    out[i + 1] = next;
  }
  return out;
}

double observation_increment(std::span<const double> y, std::size_t i) { return y[i + 1] - y[i]; }

}  // namespace

void validate(const SystemSpec& spec) {
  require_finite(spec.theta, "theta");
  require_finite(spec.sigma, "sigma");
  require_finite(spec.mu, "mu");
  require_finite(spec.x0_mean, "x0_mean");
  require_finite(spec.x0_var, "x0_var");
  if (spec.mu == 0.0) throw std::invalid_argument("mu must be nonzero");
  if (spec.x0_var < 0.0) throw std::invalid_argument("x0_var must be nonnegative");
  validate(spec.noise1);
  validate(spec.noise2);
}

CoeffMatrices coeff_matrices(const SystemSpec& spec, double t) {
  validate(spec);
  const double r1 = spec.noise1.r();
  const double r2 = spec.noise2.r();
  const double l1 = diag_l(spec.noise1, t);
  const double l2 = diag_l(spec.noise2, t);
  const double s = spec.sigma;

  CoeffMatrices c;
  c.F << -spec.theta, s, 0.0,
         0.0, r1, 0.0,
         0.0, 0.0, r2;
  c.a << spec.mu, 0.0, -1.0;
  c.D.setZero();
  c.D(2, 0) = l2 / spec.mu;
  c.G << s * s, s * l1, 0.0,
         s * l1, l1 * l1, 0.0,
         0.0, 0.0, 0.0;
  c.H = c.F;
  c.H(2, 0) = spec.mu * l2;
  c.H(2, 2) = r2 - l2;
  return c;
}

double lemma_b(double theta, double r1, double t) {
  const double eps = theta + r1;
  const double growth = std::exp(theta * t);
  if (std::abs(eps) < 1e-8) return t * growth * (1.0 - 0.5 * eps * t);
  return growth * (-std::expm1(-eps * t)) / eps;
}

Mat3 transition_matrix(const SystemSpec& spec, double t) {
  const double r1 = spec.noise1.r();
  Mat3 m;
  m << std::exp(spec.theta * t), -spec.sigma * lemma_b(spec.theta, r1, t), 0.0,
       0.0, std::exp(-r1 * t), 0.0,
       0.0, 0.0, std::exp(-spec.noise2.r() * t);
  return m;
}

std::vector<Mat3> integrate_riccati(const SystemSpec& spec, const Grid& grid) {
  validate(spec);
  Mat3 p0 = Mat3::Zero();
  p0(0, 0) = spec.x0_var;
  return rk4_matrix<Mat3>(grid, p0, [&spec](double t, const Mat3& p) -> Mat3 {
    const CoeffMatrices c = coeff_matrices(spec, t);
    const Vec3 pa = p * c.a;
    return c.G - c.H * p - p * c.H.transpose() - pa * pa.transpose();
  });
}

namespace {

struct Reduced2 {
  Mat2 F;
  Mat2 D;
  Mat2 G;
  Mat2 H;
  Vec2 a;
};

Reduced2 reduced_coeffs(const SystemSpec& spec, ReducedModel model, double t) {
  Reduced2 c;
  const double s = spec.sigma;
  if (model == ReducedModel::StateMemoryOnly) {
    const double l1 = diag_l(spec.noise1, t);
    c.F << -spec.theta, s, 0.0, spec.noise1.r();
    c.a << spec.mu, 0.0;
    c.D.setZero();
    c.G << s * s, s * l1, s * l1, l1 * l1;
    c.H = c.F;
  } else {
    const double l2 = diag_l(spec.noise2, t);
    const double r2 = spec.noise2.r();
    c.F << -spec.theta, 0.0, 0.0, r2;
    c.a << spec.mu, -1.0;
    c.D << 0.0, 0.0, l2 / spec.mu, 0.0;
    c.G << s * s, 0.0, 0.0, 0.0;
    c.H << -spec.theta, 0.0, spec.mu * l2, r2 - l2;
  }
  return c;
}

void require_reducible(const SystemSpec& spec, ReducedModel model) {
  if (model == ReducedModel::StateMemoryOnly && spec.noise2.p != 0.0)
    throw std::invalid_argument("state-memory-only reduction requires noise2.p = 0");
  if (model == ReducedModel::ObservationMemoryOnly && spec.noise1.p != 0.0)
    throw std::invalid_argument("observation-memory-only reduction requires noise1.p = 0");
}

// Index of the reduced model's second component inside (X, alpha1, alpha2).
int embedded_index(ReducedModel model) { return model == ReducedModel::StateMemoryOnly ? 1 : 2; }

}  // namespace

std::vector<Mat2> integrate_riccati_reduced(const SystemSpec& spec, const Grid& grid,
                                            ReducedModel model) {
  validate(spec);
  require_reducible(spec, model);
  Mat2 p0 = Mat2::Zero();
  p0(0, 0) = spec.x0_var;
  return rk4_matrix<Mat2>(grid, p0, [&spec, model](double t, const Mat2& p) -> Mat2 {
    const Reduced2 c = reduced_coeffs(spec, model, t);
    const Vec2 pa = p * c.a;
    return c.G - c.H * p - p * c.H.transpose() - pa * pa.transpose();
  });
}

ReducedTrajectory run_filter_reduced(const SystemSpec& spec, const Grid& grid,
                                     std::span<const double> y, ReducedModel model) {
  require_path_length(grid, y.size(), "observation path");
  ReducedTrajectory out;
  out.grid = grid;
  out.model = model;
  out.P = integrate_riccati_reduced(spec, grid, model);
  out.zhat.resize(grid.size());
  out.zhat[0] = Vec2(spec.x0_mean, 0.0);
  const double dt = grid.step;
  for (std::size_t i = 0; i < grid.count; ++i) {
    const Reduced2 c = reduced_coeffs(spec, model, grid.node(i));
    const Vec2 gain = (out.P[i] + c.D) * c.a;
    const Vec2& z = out.zhat[i];
    out.zhat[i + 1] = z - (c.F * z + gain * c.a.dot(z)) * dt + gain * observation_increment(y, i);
  }
  return out;
}

FilterTrajectory embed(const ReducedTrajectory& reduced) {
  const int k = embedded_index(reduced.model);
  FilterTrajectory out;
  out.grid = reduced.grid;
  out.zhat.resize(reduced.zhat.size());
  out.P.resize(reduced.P.size());
  for (std::size_t i = 0; i < reduced.zhat.size(); ++i) {
    Vec3 z = Vec3::Zero();
    z(0) = reduced.zhat[i](0);
    z(k) = reduced.zhat[i](1);
    out.zhat[i] = z;
  }
  for (std::size_t i = 0; i < reduced.P.size(); ++i) {
    const Mat2& p = reduced.P[i];
    Mat3 m = Mat3::Zero();
    m(0, 0) = p(0, 0);
    m(0, k) = p(0, 1);
    m(k, 0) = p(1, 0);
    m(k, k) = p(1, 1);
    out.P[i] = m;
  }
  return out;
}

MemoryFilter::MemoryFilter(const SystemSpec& spec, const Grid& grid, FilterPath path)
    : grid_(grid), z0_(spec.x0_mean, 0.0, 0.0) {
  validate(spec);
  const std::size_t n = grid.size();
  gain_.resize(n);
  drift_.resize(n);

  if (path == FilterPath::Automatic && (spec.noise2.p == 0.0 || spec.noise1.p == 0.0)) {
    reduced_ = true;
    const ReducedModel model =
        spec.noise2.p == 0.0 ? ReducedModel::StateMemoryOnly : ReducedModel::ObservationMemoryOnly;
    const int k = embedded_index(model);
    const std::vector<Mat2> p2 = integrate_riccati_reduced(spec, grid, model);
    P_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Reduced2 c = reduced_coeffs(spec, model, grid.node(i));
      const Vec2 g = (p2[i] + c.D) * c.a;
      const Mat2 d = c.F + g * c.a.transpose();
      Mat3 p = Mat3::Zero();
      Mat3 dm = Mat3::Zero();
      Vec3 gv = Vec3::Zero();
      const int idx[2] = {0, k};
      for (int r = 0; r < 2; ++r) {
        gv(idx[r]) = g(r);
        for (int col = 0; col < 2; ++col) {
          p(idx[r], idx[col]) = p2[i](r, col);
          dm(idx[r], idx[col]) = d(r, col);
        }
      }
      P_[i] = p;
      gain_[i] = gv;
      drift_[i] = dm;
    }
    return;
  }

  P_ = integrate_riccati(spec, grid);
  for (std::size_t i = 0; i < n; ++i) {
    const CoeffMatrices c = coeff_matrices(spec, grid.node(i));
    gain_[i] = (P_[i] + c.D) * c.a;
    drift_[i] = c.F + gain_[i] * c.a.transpose();
  }
}

FilterTrajectory MemoryFilter::run(std::span<const double> y) const {
  require_path_length(grid_, y.size(), "observation path");
  FilterTrajectory out;
  out.grid = grid_;
  out.P = P_;
  out.zhat.resize(grid_.size());
  out.zhat[0] = z0_;
  const double dt = grid_.step;
  for (std::size_t i = 0; i < grid_.count; ++i) {
    const Vec3& z = out.zhat[i];
    out.zhat[i + 1] = z - (drift_[i] * z) * dt + gain_[i] * observation_increment(y, i);
  }
  return out;
}

void MemoryFilter::run_state(std::span<const double> y, std::span<double> xhat) const {
  require_path_length(grid_, y.size(), "observation path");
  require_path_length(grid_, xhat.size(), "filtered state output");
  const double dt = grid_.step;
  Vec3 z = z0_;
  xhat[0] = z(0);
  for (std::size_t i = 0; i < grid_.count; ++i) {
    z = z - (drift_[i] * z) * dt + gain_[i] * observation_increment(y, i);
    xhat[i + 1] = z(0);
  }
}

FilterTrajectory run_filter(const SystemSpec& spec, const Grid& grid, std::span<const double> y,
                            FilterPath path) {
  return MemoryFilter(spec, grid, path).run(y);
}

KalmanBucyFilter::KalmanBucyFilter(double theta, double sigma, double mu, double x0_mean,
                                   double x0_var, const Grid& grid)
    : theta_(theta), mu_(mu), x0_mean_(x0_mean), grid_(grid) {
  require_finite(theta, "theta");
  require_finite(sigma, "sigma");
  require_finite(mu, "mu");
  require_finite(x0_mean, "x0_mean");
  require_finite(x0_var, "x0_var");
  if (x0_var < 0.0) throw std::invalid_argument("x0_var must be nonnegative");

  const double s2 = sigma * sigma;
  const double m2 = mu * mu;
  auto rhs = [=](double g) { return s2 + 2.0 * theta * g - m2 * g * g; };
  const double h = grid.step;
  gamma_.resize(grid.size());
  gamma_[0] = x0_var;
  for (std::size_t i = 0; i < grid.count; ++i) {
    const double g = gamma_[i];
    const double k1 = rhs(g);
    const double k2 = rhs(g + 0.5 * h * k1);
    const double k3 = rhs(g + 0.5 * h * k2);
    const double k4 = rhs(g + h * k3);
    gamma_[i + 1] = g + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
}

void KalmanBucyFilter::run(std::span<const double> y, std::span<double> xtilde) const {
  require_path_length(grid_, y.size(), "observation path");
  require_path_length(grid_, xtilde.size(), "filtered state output");
  const double dt = grid_.step;
  const double m2 = mu_ * mu_;
  double x = x0_mean_;
  xtilde[0] = x;
  for (std::size_t i = 0; i < grid_.count; ++i) {
    const double g = gamma_[i];
    x = x + (theta_ - m2 * g) * x * dt + mu_ * g * observation_increment(y, i);
    xtilde[i + 1] = x;
  }
}

KalmanBucyPath kalman_bucy(double theta, double sigma, double mu, double x0_mean, double x0_var,
                           const Grid& grid, std::span<const double> y) {
  KalmanBucyFilter f(theta, sigma, mu, x0_mean, x0_var, grid);
  KalmanBucyPath out;
  out.gamma = f.gamma();
  out.xtilde.resize(grid.size());
  f.run(y, out.xtilde);
  return out;
}

}  // namespace memfilter
