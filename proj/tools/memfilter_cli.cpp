// memfilter command-line tool.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "memfilter/estimation.hpp"
#include "memfilter/harness.hpp"
#include "memfilter/io.hpp"
#include "memfilter/memory_filter.hpp"
#include "memfilter/noise.hpp"
#include "memfilter/portfolio.hpp"
#include "memfilter/signal_example.hpp"
#include "memfilter/volterra.hpp"

using namespace memfilter;

namespace {

void add_memory_options(CLI::App* cmd, MemoryParams& mp) {
  cmd->add_option("--p", mp.p, "memory strength p")->required();
  cmd->add_option("--q", mp.q, "memory decay q")->required();
}

int simulate_noise_cmd(const MemoryParams& mp, double horizon, double dt, std::size_t paths,
                       std::uint64_t seed, const std::string& scheme, const std::string& out) {
  const Grid grid = make_grid(horizon, dt);
  const NoiseScheme s = scheme == "state" ? NoiseScheme::StateSpace : NoiseScheme::Innovation;
  std::vector<NoisePath> all;
  all.reserve(paths);
  for (std::size_t k = 0; k < paths; ++k) {
    RandomStream stream(seed, k);
    all.push_back(simulate_noise(mp, grid, stream, s));
  }
  write_noise_paths_csv(out, all);
  return 0;
}

int filter_cmd(const std::string& config_path, const std::string& obs_path,
               const std::string& method, const std::string& out) {
  const FilterConfig cfg = parse_filter_config(read_text_file(config_path));
  const std::vector<double> y = read_series_csv(obs_path);
  if (y.size() < 3) throw std::invalid_argument("observation file needs at least 3 values");
  const Grid grid = make_grid(cfg.dt * static_cast<double>(y.size() - 1), cfg.dt);
  const std::vector<double> t = grid.nodes();

  if (method == "kb") {
    const SystemSpec& s = cfg.system;
    const KalmanBucyPath kb = kalman_bucy(s.theta, s.sigma, s.mu, s.x0_mean, s.x0_var, grid, y);
    write_csv(out, {"t", "xtilde", "gamma"}, {t, kb.xtilde, kb.gamma});
    return 0;
  }
  const FilterTrajectory traj = method == "volterra" ? run_system_volterra(cfg.system, grid, y)
                                                     : run_filter(cfg.system, grid, y);
  std::vector<std::vector<double>> cols(10, std::vector<double>(grid.size()));
  cols[0] = t;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec3& z = traj.zhat[i];
    const Mat3& p = traj.P[i];
    cols[1][i] = z(0);
    cols[2][i] = z(1);
    cols[3][i] = z(2);
    cols[4][i] = p(0, 0);
    cols[5][i] = p(0, 1);
    cols[6][i] = p(0, 2);
    cols[7][i] = p(1, 1);
    cols[8][i] = p(1, 2);
    cols[9][i] = p(2, 2);
  }
  write_csv(out, {"t", "zhat1", "zhat2", "zhat3", "P11", "P12", "P13", "P22", "P23", "P33"}, cols);
  return 0;
}

int portfolio_cmd(const std::string& config_path, std::uint64_t seed, const std::string& out) {
  const PortfolioConfig cfg = parse_portfolio_config(read_text_file(config_path));
  const Grid grid = make_grid(cfg.horizon, cfg.dt);
  RandomStream s1(seed, 0), s2(seed, 1);
  const MarketPath market = simulate_market(cfg.market, grid, s1, s2);
  const std::vector<double> y = price_to_observation(market.s, cfg.market.s0, grid);
  const StrategyPath path = run_strategy(cfg.market, cfg.capital, grid, y);

  std::vector<std::vector<double>> cols(7, std::vector<double>(grid.size()));
  cols[0] = grid.nodes();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cols[1][i] = path.zhat[i](0);
    cols[2][i] = path.zhat[i](1);
    cols[3][i] = path.zhat[i](2);
  }
  cols[4] = path.lhat;
  cols[5] = path.pi0;
  cols[6] = path.wealth;
  write_csv(out, {"t", "Uhat", "alpha1hat", "alpha2hat", "Lhat", "pi0", "wealth"}, cols);
  std::printf("{\"terminal_wealth\": %.17g, \"max_recursion_gap\": %.17g}\n", path.wealth.back(),
              path.max_recursion_gap);
  return 0;
}

int compare_cmd(const std::string& preset, const MemoryParams& n1, const MemoryParams& n2,
                std::size_t runs, std::uint64_t seed, const std::string& out_dir, double horizon,
                double dt, const ExperimentSettings& settings) {
  std::vector<ThetaPreset> presets;
  if (preset == "all") {
    presets = preset_thetas();
  } else if (preset == "custom") {
    validate(n1);
    validate(n2);
    presets.push_back({"custom", n1, n2});
  } else {
    presets.push_back(find_preset(preset));
  }
  const Grid grid = make_grid(horizon, dt);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);

  std::ofstream aen(dir / "aen.csv");
  if (!aen) throw std::runtime_error("cannot write aen.csv in " + out_dir);
  aen << std::setprecision(17) << "preset,aen_optimal,aen_kb\n";
  for (const ThetaPreset& p : presets) {
    const ComparisonReport rep = monte_carlo_compare(p, runs, grid, seed, settings);
    aen << p.label << ',' << rep.aen_optimal << ',' << rep.aen_kb << '\n';
    std::vector<double> t(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i) t[i] = grid.node(i + 1);
    write_csv((dir / ("ae_" + p.label + ".csv")).string(), {"t", "ae_optimal", "ae_kb"},
              {t, rep.ae_optimal, rep.ae_kb});
    std::printf("%s: aen_optimal %.4f  aen_kb %.4f\n", p.label.c_str(), rep.aen_optimal,
                rep.aen_kb);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Filtering, estimation and portfolio tools for systems driven by memory noise"};
  app.require_subcommand(1);

  MemoryParams mp;
  double horizon = 1.0, dt = 0.01;
  std::size_t paths = 1;
  std::uint64_t seed = 0;
  std::string scheme = "state", out;

  auto* sim = app.add_subcommand("simulate-noise", "Simulate paths of the memory noise V");
  add_memory_options(sim, mp);
  sim->add_option("--T", horizon, "horizon")->required();
  sim->add_option("--dt", dt, "time step")->required();
  sim->add_option("--paths", paths, "number of paths")->check(CLI::PositiveNumber);
  sim->add_option("--seed", seed, "random seed");
  sim->add_option("--scheme", scheme, "simulation scheme")
      ->check(CLI::IsMember({"state", "innovation"}));
  sim->add_option("--out", out, "output CSV")->required();

  auto* res = app.add_subcommand("check-resolvent", "Residuals of both resolvent identities");
  add_memory_options(res, mp);
  res->add_option("--T", horizon, "horizon")->required();
  res->add_option("--dt", dt, "time step")->required();

  std::string config, obs, method = "memory";
  auto* filt = app.add_subcommand("filter", "Filter an observation path");
  filt->add_option("--config", config, "system JSON (schemas/filter_config.schema.json)")
      ->required()
      ->check(CLI::ExistingFile);
  filt->add_option("--obs", obs, "observation CSV (last column is Y)")
      ->required()
      ->check(CLI::ExistingFile);
  filt->add_option("--method", method, "filter")->check(CLI::IsMember({"memory", "kb", "volterra"}));
  filt->add_option("--out", out, "output CSV")->required();

  std::string in;
  std::size_t max_lag = 30;
  auto* epq = app.add_subcommand("estimate-pq", "Fit (p, q) to the variance ratio of V samples");
  auto* eou = app.add_subcommand("estimate-ou", "Fit (p, q, theta, sigma) to memory OU samples");
  for (CLI::App* cmd : {epq, eou}) {
    cmd->add_option("--in", in, "samples CSV, one value per line")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--max-lag", max_lag, "largest lag J")->check(CLI::PositiveNumber);
    cmd->add_option("--out", out, "output JSON")->required();
  }

  auto* port = app.add_subcommand("portfolio", "Simulate a market and run the log-optimal strategy");
  port->add_option("--config", config, "market JSON (schemas/portfolio_config.schema.json)")
      ->required()
      ->check(CLI::ExistingFile);
  port->add_option("--seed", seed, "random seed");
  port->add_option("--out", out, "output CSV")->required();

  std::string preset = "all", out_dir;
  std::size_t runs = 100;
  MemoryParams n1, n2;
  ExperimentSettings settings;
  double cmp_horizon = 10.0, cmp_dt = 0.01;
  auto* cmp = app.add_subcommand("compare", "Monte Carlo comparison with Kalman-Bucy");
  cmp->add_option("--preset", preset, "theta1..theta5, custom or all")
      ->check(CLI::IsMember({"theta1", "theta2", "theta3", "theta4", "theta5", "custom", "all"}));
  cmp->add_option("--runs", runs, "Monte Carlo runs")->check(CLI::PositiveNumber);
  cmp->add_option("--seed", seed, "random seed");
  cmp->add_option("--out-dir", out_dir, "output directory")->required();
  cmp->add_option("--T", cmp_horizon, "horizon");
  cmp->add_option("--dt", cmp_dt, "time step");
  cmp->add_option("--sigma", settings.sigma, "state noise scale");
  cmp->add_option("--theta", settings.theta, "state drift");
  cmp->add_option("--mu", settings.mu, "observation gain");
  cmp->add_option("--threads", settings.threads, "worker threads (0 = all cores)");
  cmp->add_option("--p1", n1.p, "custom preset p1");
  cmp->add_option("--q1", n1.q, "custom preset q1");
  cmp->add_option("--p2", n2.p, "custom preset p2");
  cmp->add_option("--q2", n2.q, "custom preset q2");

  double v2 = 1.0;
  auto* sig = app.add_subcommand("signal-report",
                                 "Closed-form error matrix of the constant-signal problem vs its ODE");
  add_memory_options(sig, mp);
  sig->add_option("--v2", v2, "signal variance");
  sig->add_option("--T", horizon, "horizon")->required();
  sig->add_option("--dt", dt, "time step")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return simulate_noise_cmd(mp, horizon, dt, paths, seed, scheme, out);
    if (*res) {
      std::cout << to_json(resolvent_residual(mp, make_grid(horizon, dt))) << '\n';
      return 0;
    }
    if (*filt) return filter_cmd(config, obs, method, out);
    if (*epq) {
      const std::vector<double> v = read_series_csv(in);
      write_text_file(out, to_json(fit_pq(empirical_u(v, max_lag))));
      return 0;
    }
    if (*eou) {
      const std::vector<double> x = read_series_csv(in);
      write_text_file(out, to_json(fit_ou_params(x, max_lag)));
      return 0;
    }
    if (*port) return portfolio_cmd(config, seed, out);
    if (*cmp)
      return compare_cmd(preset, n1, n2, runs, seed, out_dir, cmp_horizon, cmp_dt, settings);
    if (*sig) {
      const Grid grid = make_grid(horizon, dt);
      std::cout << to_json(compare_signal_example(v2, mp, grid, 1e-6)) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
