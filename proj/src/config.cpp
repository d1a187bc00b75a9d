#include "relaylab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <string>

#include "relaylab/errors.hpp"

namespace relaylab {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const char* what) {
  throw ConfigError(key + ": expected " + what + ", got '" + value + "'");
}

double parse_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v.empty()) bad_value(key, value, "a number");
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size()) bad_value(key, value, "a number");
  return x;
}

long long parse_int(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v.empty()) bad_value(key, value, "an integer");
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size()) bad_value(key, value, "an integer");
  return x;
}

std::uint64_t parse_seed(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v.empty()) bad_value(key, value, "an unsigned integer");
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 0);
  if (end != v.c_str() + v.size()) bad_value(key, value, "an unsigned integer");
  return static_cast<std::uint64_t>(x);
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, value, "true or false");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  for (char c : value) {
    if (c == ',') {
      out.push_back(trim(item));
      item.clear();
    } else {
      item.push_back(c);
    }
  }
  item = trim(item);
  if (!item.empty() || !out.empty()) out.push_back(item);
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

std::vector<double> parse_grid(const std::string& key, const std::string& value) {
  std::vector<double> grid;
  for (const std::string& item : split_list(value)) {
    if (item.empty()) bad_value(key, value, "a comma-separated number list");
    grid.push_back(parse_double(key, item));
  }
  return grid;
}

void require(bool ok, const std::string& field, const std::string& rule) {
  if (!ok) throw ConfigError(field + ": " + rule);
}

}  // namespace

const char* experiment_name(ExperimentId id) {
  switch (id) {
    case ExperimentId::Fig2: return "fig2";
    case ExperimentId::Fig3: return "fig3";
    case ExperimentId::Fig4: return "fig4";
    case ExperimentId::Custom: return "custom";
  }
  return "unknown";
}

ExperimentId experiment_from_name(const std::string& name) {
  for (ExperimentId id : {ExperimentId::Fig2, ExperimentId::Fig3,
                          ExperimentId::Fig4, ExperimentId::Custom})
    if (name == experiment_name(id)) return id;
  throw ConfigError("unknown experiment '" + name +
                    "' (expected fig2, fig3, fig4, or custom)");
}

void ExperimentConfig::validate() const {
  system.validate();
  quad.validate();
  const bool swept = experiment == ExperimentId::Fig2 || experiment == ExperimentId::Fig3;
  if (experiment == ExperimentId::Fig2)
    require(sweep == "zeta", "experiment.sweep", "must be 'zeta' for fig2");
  if (experiment == ExperimentId::Fig3)
    require(sweep == "e_c", "experiment.sweep", "must be 'e_c' for fig3");
  if (swept) {
    require(!grid.empty(), "experiment.grid", "must be nonempty");
    for (double g : grid)
      require(std::isfinite(g) && g > 0.0, "experiment.grid", "values must be finite and > 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
      require(grid[i] > grid[i - 1], "experiment.grid", "values must be strictly increasing");
    if (experiment == ExperimentId::Fig3)
      for (double g : grid)
        require(g > system.e_a, "experiment.grid",
                "capacities must exceed the active circuit cost e_a");
  }
  require(n_slots >= 1, "experiment.n_slots", "must be >= 1");
  require(n_replications >= 1, "experiment.replications", "must be >= 1");
  require(horizon >= 2, "experiment.horizon", "must be >= 2");
  require(segments >= 1, "experiment.segments", "must be >= 1");
  require(horizon / segments >= 1, "experiment.segments",
          "must not exceed the horizon");
  require(gamma > 0.0 && gamma <= 1.0, "experiment.gamma", "must lie in (0, 1]");
  require(etc_m >= 1, "experiment.etc_m", "must be >= 1");
  require(tail_fraction > 0.0 && tail_fraction <= 1.0, "experiment.tail_fraction",
          "must lie in (0, 1]");
  require(threads >= 1 && threads <= 256, "experiment.threads",
          "must lie in [1, 256]");
  require(!out_dir.empty(), "experiment.out_dir", "must be nonempty");
  if (experiment == ExperimentId::Fig4)
    require(!policies.empty(), "experiment.policies", "must list at least one policy");
  if (swept)
    require(!policies.empty(), "experiment.policies",
            "needs at least one policy for the bandit column");
}

ExperimentConfig default_config(ExperimentId id) {
  ExperimentConfig c;
  c.experiment = id;
  switch (id) {
    case ExperimentId::Fig2:
      c.sweep = "zeta";
      // log-spaced densities over [1e-4, 1e-2]
      c.grid = {1e-4, 3.1622776601683794e-4, 1e-3, 3.1622776601683794e-3, 1e-2};
      c.policies = {PolicyKind::DiscountedKlUcb};
      break;
    case ExperimentId::Fig3:
      c.sweep = "e_c";
      // linear capacities over [5e-4, 5e-3] joules
      c.grid = {5e-4, 1e-3, 2e-3, 3e-3, 4e-3, 5e-3};
      c.policies = {PolicyKind::DiscountedKlUcb};
      break;
    case ExperimentId::Fig4:
      c.sweep = "none";
      c.n_replications = 50;
      c.policies = {PolicyKind::Ucb, PolicyKind::ExploreThenCommit,
                    PolicyKind::Random, PolicyKind::KlUcb,
                    PolicyKind::DiscountedUcb, PolicyKind::DiscountedKlUcb};
      break;
    case ExperimentId::Custom:
      c.sweep = "none";
      break;
  }
  return c;
}

namespace {

void apply_system_key(SystemParams& p, const std::string& key,
                      const std::string& field, const std::string& value) {
  if (field == "d_sr") p.d_sr = parse_double(key, value);
  else if (field == "d_rd") p.d_rd = parse_double(key, value);
  else if (field == "p_t") p.p_t = parse_double(key, value);
  else if (field == "p_t_dbm") p.p_t = dbm_to_watts(parse_double(key, value));
  else if (field == "ptilde_t") p.ptilde_t = parse_double(key, value);
  else if (field == "ptilde_t_dbm") p.ptilde_t = dbm_to_watts(parse_double(key, value));
  else if (field == "zeta") p.zeta = parse_double(key, value);
  else if (field == "zeta_tilde") p.zeta_tilde = parse_double(key, value);
  else if (field == "p_s") p.p_s = parse_double(key, value);
  else if (field == "p_s_dbm") p.p_s = dbm_to_watts(parse_double(key, value));
  else if (field == "e_a") p.e_a = parse_double(key, value);
  else if (field == "e_p") p.e_p = parse_double(key, value);
  else if (field == "e_c") p.e_c = parse_double(key, value);
  else if (field == "alpha") p.alpha = parse_double(key, value);
  else if (field == "alpha_tilde") p.alpha_tilde = parse_double(key, value);
  else if (field == "beta") p.beta = parse_double(key, value);
  else if (field == "gamma_refl") p.gamma_refl = parse_double(key, value);
  else if (field == "eta") p.eta = parse_double(key, value);
  else if (field == "xi") p.xi = parse_double(key, value);
  else if (field == "sigma2") p.sigma2 = parse_double(key, value);
  else if (field == "sigma2_tilde") p.sigma2_tilde = parse_double(key, value);
  else if (field == "tau_a") p.tau_a = parse_double(key, value);
  else if (field == "tau_a_db") p.tau_a = db_to_linear(parse_double(key, value));
  else if (field == "tau_p") p.tau_p = parse_double(key, value);
  else if (field == "tau_p_db") p.tau_p = db_to_linear(parse_double(key, value));
  else if (field == "r_max") p.r_max = parse_double(key, value);
  else if (field == "saturation") {
    const std::string v = trim(value);
    if (v == "transmit_power") p.saturation = SaturationRule::TransmitPower;
    else if (v == "energy_headroom") p.saturation = SaturationRule::EnergyHeadroom;
    else bad_value(key, value, "'transmit_power' or 'energy_headroom'");
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

void apply_quadrature_key(QuadratureSpec& q, const std::string& key,
                          const std::string& field, const std::string& value) {
  if (field == "rel_tol") q.rel_tol = parse_double(key, value);
  else if (field == "abs_tol") q.abs_tol = parse_double(key, value);
  else if (field == "max_subdivisions")
    q.max_subdivisions = static_cast<int>(parse_int(key, value));
  else if (field == "talbot_nodes")
    q.talbot_nodes = static_cast<int>(parse_int(key, value));
  else if (field == "stehfest_terms")
    q.stehfest_terms = static_cast<int>(parse_int(key, value));
  else if (field == "inversion") {
    const std::string v = trim(value);
    if (v == "talbot") q.inversion = InversionMethod::Talbot;
    else if (v == "stehfest") q.inversion = InversionMethod::GaverStehfest;
    else bad_value(key, value, "'talbot' or 'stehfest'");
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

void apply_experiment_key(ExperimentConfig& c, const std::string& key,
                          const std::string& field, const std::string& value) {
  if (field == "grid") c.grid = parse_grid(key, value);
  else if (field == "sweep") c.sweep = trim(value);
  else if (field == "n_slots") c.n_slots = parse_int(key, value);
  else if (field == "replications")
    c.n_replications = static_cast<int>(parse_int(key, value));
  else if (field == "horizon") c.horizon = parse_int(key, value);
  else if (field == "segments") c.segments = static_cast<int>(parse_int(key, value));
  else if (field == "policies") {
    std::vector<PolicyKind> kinds;
    for (const std::string& name : split_list(value)) {
      PolicyKind k;
      if (!policy_from_name(name, k))
        bad_value(key, name,
                  "a policy among klucb, dklucb, ucb, ducb, etc, random, oracle");
      kinds.push_back(k);
    }
    c.policies = std::move(kinds);
  } else if (field == "gamma") c.gamma = parse_double(key, value);
  else if (field == "etc_m") c.etc_m = static_cast<int>(parse_int(key, value));
  else if (field == "canonical_discount") c.canonical_discount = parse_bool(key, value);
  else if (field == "tail_fraction") c.tail_fraction = parse_double(key, value);
  else if (field == "regret_baseline") {
    const std::string v = trim(value);
    if (v == "dynamic") c.baseline = RegretBaseline::Dynamic;
    else if (v == "static") c.baseline = RegretBaseline::Static;
    else bad_value(key, value, "'dynamic' or 'static'");
  } else if (field == "master_seed") c.master_seed = parse_seed(key, value);
  else if (field == "schedule_seed") c.schedule_seed = parse_seed(key, value);
  else if (field == "out_dir") c.out_dir = trim(value);
  else if (field == "threads") c.threads = static_cast<int>(parse_int(key, value));
  else throw ConfigError("unknown key '" + key + "'");
}

}  // namespace

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const std::size_t dot = key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 >= key.size())
    throw ConfigError("key '" + key + "' must look like section.field");
  const std::string section = key.substr(0, dot);
  const std::string field = key.substr(dot + 1);
  if (section == "system") apply_system_key(cfg.system, key, field, value);
  else if (section == "quadrature") apply_quadrature_key(cfg.quad, key, field, value);
  else if (section == "experiment") apply_experiment_key(cfg, key, field, value);
  else throw ConfigError("unknown section '" + section + "' in key '" + key + "'");
}

void load_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no) + ": ";
    if (text.front() == '[') {
      if (text.back() != ']')
        throw ConfigError(where + "unterminated section header");
      section = trim(text.substr(1, text.size() - 2));
      if (section != "system" && section != "quadrature" && section != "experiment")
        throw ConfigError(where + "unknown section '" + section + "'");
      continue;
    }
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + "expected key = value");
    if (section.empty())
      throw ConfigError(where + "key outside any [section]");
    const std::string field = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (field.empty()) throw ConfigError(where + "empty key");
    try {
      apply_key(cfg, section + "." + field, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
}

}  // namespace relaylab
