#include "memfilter/io.hpp"

#include <cerrno>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace memfilter {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  std::istringstream in(t);
  in.imbue(std::locale::classic());
  in >> out;
  return !in.fail() && in.eof();
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.imbue(std::locale::classic());
  out << std::setprecision(17);
  return out;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const char* what) {
  if (!j.is_object()) throw std::invalid_argument(std::string(what) + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw std::invalid_argument(std::string("unknown key '") + it.key() + "' in " + what);
}

double number(const json& j, const char* key, const char* what) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("missing '") + key + "' in " + what);
  if (!j.at(key).is_number())
    throw std::invalid_argument(std::string("'") + key + "' in " + what + " must be a number");
  return j.at(key).get<double>();
}

double number_or(const json& j, const char* key, double fallback, const char* what) {
  return j.contains(key) ? number(j, key, what) : fallback;
}

MemoryParams memory_params(const json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("missing '") + key + "'");
  const json& m = j.at(key);
  reject_unknown(m, {"p", "q"}, key);
  MemoryParams mp{number(m, "p", key), number(m, "q", key)};
  validate(mp);
  return mp;
}

SystemSpec system_from(const json& j) {
  reject_unknown(j, {"theta", "sigma", "mu", "x0_mean", "x0_var", "noise1", "noise2"}, "system");
  SystemSpec s;
  s.theta = number(j, "theta", "system");
  s.sigma = number(j, "sigma", "system");
  s.mu = number(j, "mu", "system");
  s.x0_mean = number_or(j, "x0_mean", 0.0, "system");
  s.x0_var = number_or(j, "x0_var", 0.0, "system");
  s.noise1 = memory_params(j, "noise1");
  s.noise2 = memory_params(j, "noise2");
  validate(s);
  return s;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

std::vector<double> read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<double> out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto comma = line.find_last_of(',');
    const std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
    double v = 0.0;
    if (!parse_double(field, v)) {
      if (out.empty() && row == 1) continue;  // header
      throw std::invalid_argument("non-numeric value on line " + std::to_string(row) + " of " + path);
    }
    out.push_back(v);
  }
  return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size())
    throw std::invalid_argument("header and column counts differ");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw std::invalid_argument("CSV columns have different lengths");
  std::ofstream out = open_for_write(path);
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < columns.size(); ++k) out << (k ? "," : "") << columns[k][r];
    out << '\n';
  }
}

void write_noise_paths_csv(const std::string& path, const std::vector<NoisePath>& paths) {
  std::ofstream out = open_for_write(path);
  out << "path,t,W_or_B,memory_state,V\n";
  for (std::size_t k = 0; k < paths.size(); ++k) {
    const NoisePath& p = paths[k];
    for (std::size_t i = 0; i < p.v.size(); ++i)
      out << k << ',' << p.grid.node(i) << ',' << p.driver[i] << ',' << p.memory[i] << ','
          << p.v[i] << '\n';
  }
}

SystemSpec parse_system_spec(const std::string& json_text) { return system_from(parse(json_text)); }

FilterConfig parse_filter_config(const std::string& json_text) {
  const json j = parse(json_text);
  reject_unknown(j, {"system", "dt"}, "filter config");
  if (!j.contains("system")) throw std::invalid_argument("missing 'system' in filter config");
  FilterConfig c;
  c.system = system_from(j.at("system"));
  c.dt = number(j, "dt", "filter config");
  if (!(c.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  return c;
}

PortfolioConfig parse_portfolio_config(const std::string& json_text) {
  const json j = parse(json_text);
  reject_unknown(j, {"market", "capital", "T", "dt"}, "portfolio config");
  if (!j.contains("market")) throw std::invalid_argument("missing 'market' in portfolio config");
  const json& m = j.at("market");
  reject_unknown(m, {"s0", "theta", "sigma", "rho_mean", "rho_var", "noise1", "noise2"}, "market");
  PortfolioConfig c;
  c.market.s0 = number_or(m, "s0", 1.0, "market");
  c.market.theta = number(m, "theta", "market");
  c.market.sigma = number(m, "sigma", "market");
  c.market.rho_mean = number_or(m, "rho_mean", 0.0, "market");
  c.market.rho_var = number_or(m, "rho_var", 0.0, "market");
  c.market.noise1 = memory_params(m, "noise1");
  c.market.noise2 = memory_params(m, "noise2");
  validate(c.market);
  c.capital = number_or(j, "capital", 1.0, "portfolio config");
  c.horizon = number(j, "T", "portfolio config");
  c.dt = number(j, "dt", "portfolio config");
  if (!(c.capital > 0.0)) throw std::invalid_argument("capital must be positive");
  return c;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out = open_for_write(path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

std::string to_json(const FitResult& fit) {
  json params = json::object();
  for (std::size_t k = 0; k < fit.names.size(); ++k) params[fit.names[k]] = fit.params[k];
  json j;
  j["params"] = params;
  j["sse"] = fit.sse;
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  j["p_ridge"] = fit.p_ridge;
  return j.dump(2);
}

std::string to_json(const ResolventResidual& residual) {
  json j;
  j["left"] = residual.left;
  j["right"] = residual.right;
  return j.dump(2);
}

}  // namespace memfilter
