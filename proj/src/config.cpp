#include "awr/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace awr {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double number(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot read number '" + text + "'");
  }
}

std::string resolve_path(const std::string& path, const std::string& base_dir) {
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

// Rewrites "table:<relative path>" against the config directory.
std::string with_base(const std::string& text, const std::string& base_dir) {
  const std::string prefix = "table:";
  if (text.rfind(prefix, 0) != 0) return text;
  return prefix + resolve_path(trim(text.substr(prefix.size())), base_dir);
}

}  // namespace

const std::vector<std::string>& Config::known_keys() {
  static const std::vector<std::string> keys{
      "seed",
      "pressure.pressure",
      "initial_data.u0",
      "initial_data.g0",
      "characteristics.epsilon",
      "characteristics.window",
      "characteristics.ode_steps_per_unit_time",
      "characteristics.tol_foot",
      "characteristics.tol_inv",
      "characteristics.delta_blow",
      "characteristics.grid_n",
      "characteristics.t_max",
      "characteristics.fd_step_rel",
      "characteristics.n_cond",
      "fields.bounds_lattice",
      "fields.bounds_tau_max",
      "euler_map.n_quad",
      "euler_map.seed_x",
      "euler_map.seed_t",
      "experiments.epsilons",
      "experiments.t_star",
      "experiments.lattice",
      "experiments.tol_tb",
      "experiments.weak_tests",
      "experiments.weak_grid",
  };
  return keys;
}

Config Config::parse(const std::string& text, const std::string& base_dir) {
  Config cfg;
  cfg.base_dir_ = base_dir;
  std::istringstream in(text);
  std::string line, section;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    cfg.set(section.empty() ? key : section + "." + key, value);
  }
  return cfg;
}

Config Config::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  const auto parent = std::filesystem::path(path).parent_path();
  return parse(text.str(), parent.empty() ? "." : parent.string());
}

void Config::set(const std::string& key, const std::string& value) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw ConfigError("unknown config key '" + key + "'");
  }
  entries_[key] = value;
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
  std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  if (key.find('.') == std::string::npos && key != "seed") {
    std::vector<std::string> matches;
    for (const auto& k : known_keys()) {
      if (k.size() > key.size() && k.compare(k.size() - key.size(), key.size(), key) == 0 &&
          k[k.size() - key.size() - 1] == '.') {
        matches.push_back(k);
      }
    }
    if (matches.size() != 1) throw ConfigError("override key '" + key + "' is unknown or ambiguous");
    key = matches.front();
  }
  set(key, value);
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? number(key, get(key, "")) : fallback;
}

std::size_t Config::get_size(const std::string& key, std::size_t fallback) const {
  if (!has(key)) return fallback;
  const double v = number(key, get(key, ""));
  if (v < 0.0 || v != std::floor(v)) throw ConfigError("key '" + key + "' must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string text = get(key, "");
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' must be an unsigned integer");
  }
}

std::vector<double> Config::get_doubles(const std::string& key, std::vector<double> fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  for (const auto& part : split(get(key, ""), ',')) out.push_back(number(key, part));
  return out;
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

std::uint64_t Config::digest() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

PressureModel parse_pressure(const std::string& raw, const std::string& base_dir) {
  const std::string text = trim(raw);
  if (text == "log") return PressureModel::log_law();
  if (text.rfind("gamma:", 0) == 0) {
    const double g = number("pressure", trim(text.substr(6)));
    if (!(g >= 1.0)) throw ConfigError("gamma law needs gamma >= 1");
    return PressureModel::gamma_law(g);
  }
  if (text.rfind("table:", 0) == 0) {
    const std::string path = resolve_path(trim(text.substr(6)), base_dir);
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open pressure table '" + path + "'");
    std::vector<double> rho, p;
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      const auto cols = split(line, ',');
      if (cols.size() != 2) throw ConfigError("pressure table rows need two columns");
      try {
        rho.push_back(std::stod(cols[0]));
        p.push_back(std::stod(cols[1]));
      } catch (const std::exception&) {
        if (rho.empty()) continue;  // header
        throw ConfigError("non-numeric row in pressure table '" + path + "'");
      }
    }
    try {
      return PressureModel::tabulated(rho, p);
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("pressure table: ") + e.what());
    }
  }
  throw ConfigError("unknown pressure law '" + text + "'");
}

Numerics build_numerics(const Config& cfg) {
  Numerics n;
  n.ode_steps_per_unit_time = cfg.get_double("characteristics.ode_steps_per_unit_time", n.ode_steps_per_unit_time);
  n.tol_foot = cfg.get_double("characteristics.tol_foot", n.tol_foot);
  n.tol_inv = cfg.get_double("characteristics.tol_inv", n.tol_inv);
  n.delta_blow = cfg.get_double("characteristics.delta_blow", n.delta_blow);
  n.grid_n = cfg.get_size("characteristics.grid_n", n.grid_n);
  n.t_max = cfg.get_double("characteristics.t_max", n.t_max);
  n.fd_step_rel = cfg.get_double("characteristics.fd_step_rel", n.fd_step_rel);
  n.n_cond = cfg.get_size("characteristics.n_cond", n.n_cond);
  if (n.grid_n < 3) throw ConfigError("grid_n must be at least 3");
  if (!(n.ode_steps_per_unit_time >= 1.0)) throw ConfigError("ode_steps_per_unit_time must be >= 1");
  return n;
}

InitialData build_initial_data(const Config& cfg) {
  InitialData d;
  d.u0 = parse_function_spec(with_base(cfg.get("initial_data.u0", "expr:neg_tanh()"), cfg.base_dir()));
  d.g0 = parse_function_spec(with_base(cfg.get("initial_data.g0", "step:0,1,2"), cfg.base_dir()));
  return d;
}

Interval build_window(const Config& cfg) {
  const auto w = cfg.get_doubles("characteristics.window", {-5.0, 5.0});
  if (w.size() != 2 || !(w[1] > w[0])) throw ConfigError("window must be lo,hi with lo < hi");
  return {w[0], w[1]};
}

Scenario build_scenario(const Config& cfg) {
  const PressureModel model = parse_pressure(cfg.get("pressure.pressure", "log"), cfg.base_dir());
  const double eps = cfg.get_double("characteristics.epsilon", 0.1);
  try {
    return Scenario(model, build_initial_data(cfg), eps, build_window(cfg), build_numerics(cfg));
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }
}

SweepConfig build_sweep(const Config& cfg) {
  SweepConfig sw;
  sw.model = parse_pressure(cfg.get("pressure.pressure", "log"), cfg.base_dir());
  sw.data = build_initial_data(cfg);
  sw.window = build_window(cfg);
  sw.numerics = build_numerics(cfg);
  sw.epsilons = cfg.get_doubles("experiments.epsilons", sw.epsilons);
  sw.t_star = cfg.get_double("experiments.t_star", sw.t_star);
  const auto lattice = cfg.get_doubles("experiments.lattice", {201, 101});
  if (lattice.size() != 2 || lattice[0] < 2 || lattice[1] < 2) throw ConfigError("lattice must be nx,nt");
  sw.lattice_nx = static_cast<std::size_t>(lattice[0]);
  sw.lattice_nt = static_cast<std::size_t>(lattice[1]);
  sw.seeds = {{cfg.get_double("euler_map.seed_x", 0.0), cfg.get_double("euler_map.seed_t", sw.t_star)}};
  sw.foot_grid_n = sw.numerics.grid_n;
  for (std::size_t k = 1; k < sw.epsilons.size(); ++k) {
    if (!(sw.epsilons[k] < sw.epsilons[k - 1])) throw ConfigError("experiments.epsilons must decrease");
  }
  return sw;
}

}  // namespace awr
