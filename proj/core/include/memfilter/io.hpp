#pragma once

#include <string>
#include <vector>

#include "memfilter/estimation.hpp"
#include "memfilter/memory_filter.hpp"
#include "memfilter/noise.hpp"
#include "memfilter/portfolio.hpp"

namespace memfilter {

/// Reads one value per data row, taking the last comma-separated field so that
/// both "v" and "t,v" layouts work. A non-numeric first row is a header.
std::vector<double> read_series_csv(const std::string& path);

/// Header row, then one row per index with '.' decimals and ',' separators.
/// All columns must have the same length.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// Long format: path, t, W_or_B, memory_state, V.
void write_noise_paths_csv(const std::string& path, const std::vector<NoisePath>& paths);

struct FilterConfig {
  SystemSpec system;
  double dt = 0.01;
};

struct PortfolioConfig {
  MarketSpec market;
  double capital = 1.0;
  double horizon = 1.0;
  double dt = 0.01;
};

/// Parsers for the documents described by schemas/*.schema.json. Unknown keys
/// and missing required keys throw std::invalid_argument.
SystemSpec parse_system_spec(const std::string& json_text);
FilterConfig parse_filter_config(const std::string& json_text);
PortfolioConfig parse_portfolio_config(const std::string& json_text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

std::string to_json(const FitResult& fit);
std::string to_json(const ResolventResidual& residual);

}  // namespace memfilter
