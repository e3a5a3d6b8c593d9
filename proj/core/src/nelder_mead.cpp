#include "memfilter/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace memfilter {

namespace {

double safe_eval(const std::function<double(const std::vector<double>&)>& f,
                 const std::vector<double>& x) {
  const double v = f(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

double diameter(const std::vector<std::vector<double>>& simplex) {
  double worst = 0.0;
  for (std::size_t a = 0; a < simplex.size(); ++a)
    for (std::size_t b = a + 1; b < simplex.size(); ++b) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < simplex[a].size(); ++k) {
        const double d = simplex[a][k] - simplex[b][k];
        d2 += d * d;
      }
      worst = std::max(worst, d2);
    }
  return std::sqrt(worst);
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  if (n == 0) throw std::invalid_argument("nelder_mead needs at least one parameter");

  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t k = 0; k < n; ++k) simplex[k + 1][k] += options.initial_step;
  std::vector<double> values(n + 1);
  for (std::size_t k = 0; k <= n; ++k) values[k] = safe_eval(f, simplex[k]);

  std::vector<std::size_t> order(n + 1);
  auto point = [n](const std::vector<double>& base, const std::vector<double>& toward, double c) {
    std::vector<double> p(n);
    for (std::size_t k = 0; k < n; ++k) p[k] = base[k] + c * (toward[k] - base[k]);
    return p;
  };

  NelderMeadResult res;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&values](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    {
      std::vector<std::vector<double>> s(n + 1);
      std::vector<double> v(n + 1);
      for (std::size_t k = 0; k <= n; ++k) {
        s[k] = simplex[order[k]];
        v[k] = values[order[k]];
      }
      simplex.swap(s);
      values.swap(v);
    }
    if (diameter(simplex) < options.diameter_tol) {
      res.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[k][d] / static_cast<double>(n);

    const std::vector<double>& worst = simplex[n];
    const std::vector<double> reflected = point(centroid, worst, -1.0);
    const double fr = safe_eval(f, reflected);
    if (fr < values[0]) {
      const std::vector<double> expanded = point(centroid, worst, -2.0);
      const double fe = safe_eval(f, expanded);
      if (fe < fr) {
        simplex[n] = expanded;
        values[n] = fe;
      } else {
        simplex[n] = reflected;
        values[n] = fr;
      }
      continue;
    }
    if (fr < values[n - 1]) {
      simplex[n] = reflected;
      values[n] = fr;
      continue;
    }
    const bool outside = fr < values[n];
    const std::vector<double> contracted =
        outside ? point(centroid, reflected, 0.5) : point(centroid, worst, 0.5);
    const double fc = safe_eval(f, contracted);
    if (fc < (outside ? fr : values[n])) {
      simplex[n] = contracted;
      values[n] = fc;
      continue;
    }
    for (std::size_t k = 1; k <= n; ++k) {
      simplex[k] = point(simplex[0], simplex[k], 0.5);
      values[k] = safe_eval(f, simplex[k]);
    }
  }

  const auto best = std::min_element(values.begin(), values.end()) - values.begin();
  res.x = simplex[static_cast<std::size_t>(best)];
  res.value = values[static_cast<std::size_t>(best)];
  res.iterations = it;
  return res;
}

}  // namespace memfilter
