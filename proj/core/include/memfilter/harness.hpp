#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "memfilter/grid.hpp"
#include "memfilter/memory_filter.hpp"

namespace memfilter {

struct ThetaPreset {
  std::string label;
  MemoryParams noise1;
  MemoryParams noise2;
};

/// theta1..theta5, as (p1, q1, p2, q2):
/// (0.2, 0.3, 0.5, 0.2), (5.2, 0.3, -0.5, 0.6), (0.0, 1.0, 5.8, 0.7),
/// (5.4, 0.8, 0.0, 1.0), (5.1, 2.3, 4.9, 1.3).
std::vector<ThetaPreset> preset_thetas();
/// Throws std::invalid_argument for an unknown label.
ThetaPreset find_preset(const std::string& label);

/// System coefficients shared by every preset.
struct ExperimentSettings {
  double theta = -2.0;
  double sigma = 1.0;
  double mu = 5.0;
  double x0 = 0.0;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

SystemSpec experiment_system(const ThetaPreset& preset, const ExperimentSettings& settings);

struct ComparisonReport {
  std::string theta_set;
  ThetaPreset preset;
  Grid grid;
  double aen_optimal = 0.0;
  double aen_kb = 0.0;
  /// Errors at t_1..t_N.
  std::vector<double> ae_optimal;
  std::vector<double> ae_kb;
  std::size_t runs = 0;
  std::uint64_t seed = 0;

  bool operator==(const ComparisonReport&) const;
};

/// Run n draws V1 from stream (seed, 2n) and V2 from (seed, 2n + 1), simulates
/// the system, and filters the same Y with the memory filter and with
/// Kalman-Bucy. AEN = sqrt(mean over runs and i = 1..N of the squared error),
/// AE(t_i) = sqrt(mean over runs). Runs execute in parallel; sums are formed in
/// run order so the report is bitwise reproducible.
ComparisonReport monte_carlo_compare(const ThetaPreset& preset, std::size_t runs, const Grid& grid,
                                     std::uint64_t seed, const ExperimentSettings& settings = {});

}  // namespace memfilter
