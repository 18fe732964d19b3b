#include "meanfield/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace meanfield::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

const std::vector<Config::SchemaEntry>& Config::schema() {
  static const std::vector<SchemaEntry> entries = {
      {"scenario.kind", "string",
       "example1 | example2 | ou | constants (explicit K/M/delta)"},
      {"scenario.hurst", "double", "Hurst parameter in [1/2, 1)"},
      {"scenario.ctilde2", "double", "Brownian second-moment constant (default 1)"},
      {"scenario.beta_variant", "string", "definitive | alternate beta2 placement"},
      {"scenario.c1", "double", "example1 drift coefficient"},
      {"scenario.c2", "double", "example1 Brownian coefficient"},
      {"scenario.c3", "double", "example1 fBm coefficient"},
      {"scenario.b_variant", "string", "example1 ramp: literal | bounded"},
      {"scenario.modes", "int", "example1 spectral modes"},
      {"scenario.fbm_modes", "int", "example1 kept driver components"},
      {"scenario.lambda_decay", "double", "driver eigenvalue decay k^-p (0 = flat)"},
      {"scenario.nu", "double", "example2 weight rate"},
      {"scenario.g2_amp", "double", "example2 envelope amplitude"},
      {"scenario.x_max", "double", "example2 domain truncation"},
      {"scenario.nodes", "int", "example2 grid nodes (odd)"},
      {"scenario.delta", "double", "ou decay rate / constants delta"},
      {"scenario.sigma_w", "double", "ou Brownian diffusion"},
      {"scenario.sigma_fbm", "double", "ou fBm diffusion"},
      {"scenario.kappa", "double", "ou mean-reversion strength"},
      {"scenario.k", "double", "constants: joint Lipschitz constant"},
      {"scenario.m", "double", "constants: family bound M"},
      {"run.t0", "double", "window start"},
      {"run.t1", "double", "window end"},
      {"run.dt", "double", "step size"},
      {"run.burn_in", "double", "history truncation window"},
      {"run.particles", "int", "ensemble size"},
      {"run.seed", "int", "master seed"},
      {"run.threads", "int", "worker threads (never changes results)"},
      {"run.snapshot_stride", "int", "law snapshots every k-th step (0 = off)"},
      {"run.picard_iterations", "int", "law fixed-point iterations (0 = off)"},
      {"fbm.n", "int", "increments per path"},
      {"fbm.h", "double", "Hurst parameter"},
      {"fbm.dt", "double", "grid step"},
      {"fbm.validation_paths", "int", "paths for the covariance check"},
      {"fbm.validation_lags", "int", "checked autocovariance lags"},
      {"diagnose.mode", "string", "recurrence | distribution | sbc0 | bi_automorphy"},
      {"diagnose.curve", "string", "recurrence curve: sin | drift_modulation | ramp"},
      {"diagnose.shift_family", "string",
       "two_pi_integers | sqrt2_convergents | pi_convergents | list"},
      {"diagnose.shift_list", "double_list", "explicit shifts (shift_family = list)"},
      {"diagnose.shift_count", "int", "family size when generated"},
      {"diagnose.grid_t0", "double", "evaluation window start"},
      {"diagnose.grid_t1", "double", "evaluation window end"},
      {"diagnose.grid_points", "int", "evaluation grid size"},
      {"diagnose.tol", "double", "recurrence tolerance (squared error)"},
      {"diagnose.trace", "string", "sbc0 trace: ramp_squared | constant | simulate"},
      {"diagnose.rho", "string", "weight: exp_neg | one"},
      {"diagnose.q_list", "double_list", "sbc0 window radii"},
      {"diagnose.slope_tol", "double", "sbc0 membership threshold"},
      {"diagnose.dbl_centers", "int", "d_BL tent-center count (dictionary richness)"},
      {"diagnose.dbl_widths", "double_list", "d_BL tent widths, each >= 1"},
      {"diagnose.probes", "int", "bi-automorphy probe states"},
      {"output.dir", "string", "artifact directory"},
  };
  return entries;
}

void Config::validate_key(const std::string& key) const {
  for (const auto& e : schema())
    if (e.key == key) return;
  throw config_error("unknown config key: " + key);
}

void Config::set(const std::string& section_key, const std::string& value) {
  validate_key(section_key);
  values_[section_key] = trim(value);
}

bool Config::has(const std::string& section_key) const {
  return values_.count(section_key) > 0;
}

Config Config::from_string(const std::string& text) {
  Config cfg;
  std::istringstream is(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw config_error("config line " + std::to_string(lineno) + ": bad section");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty())
        throw config_error("config line " + std::to_string(lineno) + ": empty section");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    if (section.empty())
      throw config_error("config line " + std::to_string(lineno) + ": key outside section");
    const std::string full = section + "." + key;
    if (cfg.values_.count(full))
      throw config_error("config line " + std::to_string(lineno) + ": duplicate key " + full);
    cfg.set(full, t.substr(eq + 1));
  }
  return cfg;
}

Config Config::from_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw config_error("cannot open config file: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return from_string(os.str());
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw config_error("config value for " + key + " is not a number: " + it->second);
  }
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw config_error("config value for " + key + " is not an integer: " + it->second);
  }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw config_error("config value for " + key + " is not a bool: " + it->second);
}

std::vector<double> Config::get_double_list(const std::string& key,
                                            std::vector<double> fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  std::istringstream is(it->second);
  std::string cell;
  while (std::getline(is, cell, ',')) {
    cell = trim(cell);
    if (cell.empty()) continue;
    try {
      out.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw config_error("config value for " + key + " has a bad entry: " + cell);
    }
  }
  if (out.empty()) throw config_error("config value for " + key + " is empty");
  return out;
}

std::string Config::canonical() const {
  std::ostringstream os;
  for (const auto& [k, v] : values_) {
    // thread count and artifact location never affect results
    if (k == "run.threads" || k == "output.dir") continue;
    os << k << "=" << v << "\n";
  }
  return os.str();
}

std::uint64_t Config::content_hash() const { return fnv1a(canonical()); }

}  // namespace meanfield::cli
