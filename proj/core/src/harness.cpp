#include "memfilter/harness.hpp"

#include <cmath>
#include <stdexcept>

#include "memfilter/parallel.hpp"
#include "memfilter/system.hpp"

namespace memfilter {

std::vector<ThetaPreset> preset_thetas() {
  return {
      {"theta1", {0.2, 0.3}, {0.5, 0.2}},
      {"theta2", {5.2, 0.3}, {-0.5, 0.6}},
      {"theta3", {0.0, 1.0}, {5.8, 0.7}},
      {"theta4", {5.4, 0.8}, {0.0, 1.0}},
      {"theta5", {5.1, 2.3}, {4.9, 1.3}},
  };
}

ThetaPreset find_preset(const std::string& label) {
  for (const ThetaPreset& p : preset_thetas())
    if (p.label == label) return p;
  throw std::invalid_argument("unknown preset '" + label + "' (expected theta1..theta5)");
}

SystemSpec experiment_system(const ThetaPreset& preset, const ExperimentSettings& settings) {
  SystemSpec s;
  s.theta = settings.theta;
  s.sigma = settings.sigma;
  s.mu = settings.mu;
  s.x0_mean = settings.x0;
  s.x0_var = 0.0;
  s.noise1 = preset.noise1;
  s.noise2 = preset.noise2;
  validate(s);
  return s;
}

bool ComparisonReport::operator==(const ComparisonReport& o) const {
  return theta_set == o.theta_set && grid == o.grid && aen_optimal == o.aen_optimal &&
         aen_kb == o.aen_kb && ae_optimal == o.ae_optimal && ae_kb == o.ae_kb && runs == o.runs &&
         seed == o.seed;
}

ComparisonReport monte_carlo_compare(const ThetaPreset& preset, std::size_t runs, const Grid& grid,
                                     std::uint64_t seed, const ExperimentSettings& settings) {
  if (runs == 0) throw std::invalid_argument("runs must be positive");
  const SystemSpec spec = experiment_system(preset, settings);
  const MemoryFilter optimal(spec, grid);
  const KalmanBucyFilter kb(spec.theta, spec.sigma, spec.mu, spec.x0_mean, spec.x0_var, grid);

  const std::size_t n = grid.count;
  std::vector<std::vector<double>> sq_opt(runs), sq_kb(runs);
  parallel_for(runs, settings.threads, [&](std::size_t run) {
    RandomStream s1(seed, 2 * run);
    RandomStream s2(seed, 2 * run + 1);
    const PathBundle paths = simulate_system(spec, grid, s1, s2);
    std::vector<double> xo(grid.size()), xk(grid.size());
    optimal.run_state(paths.y, xo);
    kb.run(paths.y, xk);
    std::vector<double>& eo = sq_opt[run];
    std::vector<double>& ek = sq_kb[run];
    eo.resize(n);
    ek.resize(n);
    for (std::size_t i = 1; i <= n; ++i) {
      const double d_opt = paths.x[i] - xo[i];
      const double d_kb = paths.x[i] - xk[i];
      eo[i - 1] = d_opt * d_opt;
      ek[i - 1] = d_kb * d_kb;
    }
  });

  ComparisonReport rep;
  rep.theta_set = preset.label;
  rep.preset = preset;
  rep.grid = grid;
  rep.runs = runs;
  rep.seed = seed;
  rep.ae_optimal.assign(n, 0.0);
  rep.ae_kb.assign(n, 0.0);
  for (std::size_t run = 0; run < runs; ++run)
    for (std::size_t i = 0; i < n; ++i) {
      rep.ae_optimal[i] += sq_opt[run][i];
      rep.ae_kb[i] += sq_kb[run][i];
    }
  double total_opt = 0.0, total_kb = 0.0;
  const double r = static_cast<double>(runs);
  for (std::size_t i = 0; i < n; ++i) {
    total_opt += rep.ae_optimal[i];
    total_kb += rep.ae_kb[i];
    rep.ae_optimal[i] = std::sqrt(rep.ae_optimal[i] / r);
    rep.ae_kb[i] = std::sqrt(rep.ae_kb[i] / r);
  }
  rep.aen_optimal = std::sqrt(total_opt / (r * static_cast<double>(n)));
  rep.aen_kb = std::sqrt(total_kb / (r * static_cast<double>(n)));
  return rep;
}

}  // namespace memfilter
