#include "memfilter/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "memfilter/nelder_mead.hpp"

namespace memfilter {

namespace {

void require_lags(std::size_t n, std::size_t max_lag) {
  if (max_lag < 1) throw std::invalid_argument("max lag must be at least 1");
  if (n < max_lag + 2)
    throw std::invalid_argument("need at least max_lag + 2 samples (got " + std::to_string(n) +
                                " for max lag " + std::to_string(max_lag) + ")");
}

VarianceCurve lag_residual_curve(std::span<const double> x, double decay_per_lag_log,
                                 std::size_t max_lag) {
  const std::size_t n = x.size();
  require_lags(n, max_lag);
  VarianceCurve c;
  c.samples = n;
  c.u.resize(max_lag);
  c.mean.resize(max_lag);
  for (std::size_t j = 1; j <= max_lag; ++j) {
    const double a = std::exp(-decay_per_lag_log * static_cast<double>(j));
    const std::size_t count = n - j;
    double m = 0.0;
    for (std::size_t i = 0; i < count; ++i) m += x[i + j] - a * x[i];
    m /= static_cast<double>(count);
    double ss = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double d = x[i + j] - a * x[i] - m;
      ss += d * d;
    }
    c.mean[j - 1] = m;
    c.u[j - 1] = ss / (static_cast<double>(j) * static_cast<double>(n - j - 1));
  }
  return c;
}

double big_if_nonfinite(double v) { return std::isfinite(v) ? v : 1e300; }

void flag_ridge(FitResult& r) { r.p_ridge = std::abs(r.params[0]) < 1e-3; }

}  // namespace

VarianceCurve empirical_u(std::span<const double> v, std::size_t max_lag) {
  return lag_residual_curve(v, 0.0, max_lag);
}

VarianceCurve empirical_h(std::span<const double> x, double theta, std::size_t max_lag) {
  if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
  return lag_residual_curve(x, theta, max_lag);
}

LagMoments::LagMoments(std::span<const double> x, std::size_t max_lag) : samples_(x.size()) {
  require_lags(x.size(), max_lag);
  centre_ = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  std::vector<double> c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) c[i] = x[i] - centre_;

  lead_.resize(max_lag);
  lag_.resize(max_lag);
  lead_sq_.resize(max_lag);
  lag_sq_.resize(max_lag);
  cross_.resize(max_lag);
  for (std::size_t j = 1; j <= max_lag; ++j) {
    double s1 = 0.0, s0 = 0.0, s11 = 0.0, s00 = 0.0, s01 = 0.0;
    for (std::size_t i = 0; i + j < c.size(); ++i) {
      s1 += c[i + j];
      s0 += c[i];
      s11 += c[i + j] * c[i + j];
      s00 += c[i] * c[i];
      s01 += c[i] * c[i + j];
    }
    lead_[j - 1] = s1;
    lag_[j - 1] = s0;
    lead_sq_[j - 1] = s11;
    lag_sq_[j - 1] = s00;
    cross_[j - 1] = s01;
  }
}

VarianceCurve LagMoments::h(double theta) const {
  const std::size_t n = samples_;
  VarianceCurve c;
  c.samples = n;
  c.u.resize(lead_.size());
  c.mean.resize(lead_.size());
  for (std::size_t j = 1; j <= lead_.size(); ++j) {
    const std::size_t k = j - 1;
    const double a = std::exp(-theta * static_cast<double>(j));
    const double count = static_cast<double>(n - j);
    const double sum = lead_[k] - a * lag_[k];
    const double sum_sq = lead_sq_[k] - 2.0 * a * cross_[k] + a * a * lag_sq_[k];
    c.mean[k] = sum / count + (1.0 - a) * centre_;
    const double ss = std::max(0.0, sum_sq - sum * sum / count);
    c.u[k] = ss / (static_cast<double>(j) * static_cast<double>(n - j - 1));
  }
  return c;
}

double ou_variance_ratio_h(double p, double q, double theta, double sigma, double t) {
  validate(MemoryParams{p, q});
  if (!(theta > 0.0) || !std::isfinite(theta)) throw std::invalid_argument("theta must be > 0");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be > 0");
  if (!(t > 0.0)) throw std::invalid_argument("H(t) needs t > 0");
  const double r = p + q;
  const double s2 = sigma * sigma;
  const double memory = p * (2.0 * q + p) / (r * (theta + r));
  const double first = s2 * (1.0 - memory) * (-std::expm1(-2.0 * theta * t)) / (2.0 * theta * t);
  const double eps = theta - r;
  const double phi = std::abs(eps) < 1e-8 ? t * (1.0 + 0.5 * eps * t) : std::expm1(eps * t) / eps;
  const double second = s2 * memory * std::exp(-2.0 * theta * t) * phi / t;
  return first + second;
}

double FitResult::param(const std::string& name) const {
  for (std::size_t k = 0; k < names.size(); ++k)
    if (names[k] == name) return params[k];
  throw std::out_of_range("no fitted parameter named " + name);
}

FitResult fit_pq(const VarianceCurve& curve, std::optional<MemoryParams> init) {
  if (curve.u.empty()) throw std::invalid_argument("variance curve is empty");
  if (init) validate(*init);
  const std::vector<double>& u = curve.u;

  auto objective = [&u](const std::vector<double>& z) {
    const double r = std::exp(z[0]);
    const double q = std::exp(z[1]);
    const MemoryParams mp{r - q, q};
    double sse = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      const double d = variance_ratio_u(mp, static_cast<double>(k + 1)) - u[k];
      sse += d * d;
    }
    return big_if_nonfinite(sse);
  };

  std::vector<MemoryParams> starts;
  if (init) {
    starts.push_back(*init);
  } else {
    for (int a = 0; a < 5; ++a) {
      const double q = 0.05 + (3.0 - 0.05) * a / 4.0;
      for (int b = 0; b < 5; ++b) starts.push_back({-0.9 * q + (5.0 + 0.9 * q) * b / 4.0, q});
    }
  }

  FitResult best;
  bool have = false;
  int total_iterations = 0;
  for (const MemoryParams& s : starts) {
    const NelderMeadResult nm = nelder_mead(objective, {std::log(s.r()), std::log(s.q)});
    total_iterations += nm.iterations;
    if (!have || nm.value < best.sse) {
      have = true;
      const double r = std::exp(nm.x[0]);
      const double q = std::exp(nm.x[1]);
      best.names = {"p", "q"};
      best.params = {r - q, q};
      best.sse = nm.value;
      best.converged = nm.converged;
    }
  }
  best.iterations = total_iterations;
  flag_ridge(best);
  return best;
}

namespace {

template <typename Target>
FitResult fit_ou_generic(Target&& target, std::size_t lags, std::optional<double> fixed_theta) {
  // z = (log r, log q, log sigma[, log theta])
  auto unpack = [&](const std::vector<double>& z, double& p, double& q, double& theta,
                    double& sigma) {
    const double r = std::exp(z[0]);
    q = std::exp(z[1]);
    p = r - q;
    sigma = std::exp(z[2]);
    theta = fixed_theta ? *fixed_theta : std::exp(z[3]);
  };
  auto curve_sse = [&](const std::vector<double>& z) {
    double p, q, theta, sigma;
    unpack(z, p, q, theta, sigma);
    const std::vector<double>& h = target(theta);
    double sse = 0.0;
    for (std::size_t k = 0; k < lags; ++k) {
      const double d = ou_variance_ratio_h(p, q, theta, sigma, static_cast<double>(k + 1)) - h[k];
      sse += d * d;
    }
    return big_if_nonfinite(sse);
  };

  // sigma start from the sigma^2-linear least squares at the other start values.
  auto sigma_start = [&](double p, double q, double theta) {
    const std::vector<double>& h = target(theta);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < lags; ++k) {
      const double base = ou_variance_ratio_h(p, q, theta, 1.0, static_cast<double>(k + 1));
      num += base * h[k];
      den += base * base;
    }
    const double s2 = den > 0.0 ? num / den : 1.0;
    return s2 > 0.0 ? std::sqrt(s2) : 1.0;
  };

  std::vector<double> theta_starts = {0.2, 1.0, 3.0};
  if (fixed_theta) theta_starts = {*fixed_theta};

  FitResult best;
  bool have = false;
  int total_iterations = 0;
  for (double q : {0.3, 1.0, 2.5})
    for (double p : {-0.5 * q, 0.5, 2.0})
      for (double theta : theta_starts) {
        std::vector<double> z0 = {std::log(p + q), std::log(q), std::log(sigma_start(p, q, theta))};
        if (!fixed_theta) z0.push_back(std::log(theta));
        const NelderMeadResult nm = nelder_mead(curve_sse, z0);
        total_iterations += nm.iterations;
        if (!have || nm.value < best.sse) {
          have = true;
          double pp, qq, tt, ss;
          unpack(nm.x, pp, qq, tt, ss);
          best.names = {"p", "q", "theta", "sigma"};
          best.params = {pp, qq, tt, ss};
          best.sse = nm.value;
          best.converged = nm.converged;
        }
      }
  best.iterations = total_iterations;
  flag_ridge(best);
  return best;
}

}  // namespace

FitResult fit_ou_params(std::span<const double> x, std::size_t max_lag) {
  const LagMoments moments(x, max_lag);
  VarianceCurve cache;
  return fit_ou_generic(
      [&](double theta) -> const std::vector<double>& {
        cache = moments.h(theta);
        return cache.u;
      },
      max_lag, std::nullopt);
}

FitResult fit_ou_to_curve(std::span<const double> h, std::optional<double> fixed_theta) {
  if (h.empty()) throw std::invalid_argument("target curve is empty");
  if (fixed_theta && !(*fixed_theta > 0.0)) throw std::invalid_argument("theta must be > 0");
  const std::vector<double> fixed(h.begin(), h.end());
  return fit_ou_generic([&](double) -> const std::vector<double>& { return fixed; }, fixed.size(),
                        fixed_theta);
}

std::vector<double> sample_memory_noise(const MemoryParams& params, std::size_t count,
                                        std::size_t substeps, RandomStream& stream) {
  if (count < 1 || substeps < 1) throw std::invalid_argument("count and substeps must be >= 1");
  const Grid grid = make_grid(static_cast<double>(count), 1.0 / static_cast<double>(substeps));
  const NoisePath path = simulate_v(params, grid, stream);
  std::vector<double> out(count);
  for (std::size_t k = 1; k <= count; ++k) out[k - 1] = path.v[k * substeps];
  return out;
}

std::vector<double> simulate_ou_memory(const OuMemorySpec& spec, std::size_t count,
                                       std::size_t substeps, RandomStream& stream) {
  if (count < 1 || substeps < 1) throw std::invalid_argument("count and substeps must be >= 1");
  if (!(spec.theta > 0.0) || !(spec.sigma > 0.0))
    throw std::invalid_argument("theta and sigma must be positive");
  const Grid grid = make_grid(static_cast<double>(count), 1.0 / static_cast<double>(substeps));
  const NoisePath path = simulate_v(spec.noise, grid, stream);
  const double decay = std::exp(-spec.theta * grid.step);
  std::vector<double> out(count);
  double x = spec.x0;
  for (std::size_t i = 0; i < grid.count; ++i) {
    x = decay * (x + spec.sigma * (path.v[i + 1] - path.v[i]));
    if ((i + 1) % substeps == 0) out[(i + 1) / substeps - 1] = x;
  }
  return out;
}

}  // namespace memfilter
