#include "netmimo/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "netmimo/geometry.hpp"
#include "netmimo/units.hpp"

namespace netmimo {

namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;
  const std::string& origin;

  bool done() const { return i >= s.size(); }
  char peek() const { return s[i]; }
  void skip_space() {
    while (!done() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw UsageError(origin + ": " + msg);
  }
};

ConfigValue parse_value(Cursor& c);

ConfigValue parse_list(Cursor& c) {
  ConfigValue v;
  v.kind = ConfigValue::Kind::list;
  ++c.i;  // consume '['
  c.skip_space();
  if (!c.done() && c.peek() == ']') {
    ++c.i;
    return v;
  }
  while (true) {
    v.items.push_back(parse_value(c));
    c.skip_space();
    if (c.done()) c.fail("unterminated array");
    if (c.peek() == ',') {
      ++c.i;
      c.skip_space();
      // Allow a trailing comma before the closing bracket.
      if (!c.done() && c.peek() == ']') {
        ++c.i;
        return v;
      }
      continue;
    }
    if (c.peek() == ']') {
      ++c.i;
      return v;
    }
    c.fail("expected ',' or ']' in array");
  }
}

ConfigValue parse_value(Cursor& c) {
  c.skip_space();
  if (c.done()) c.fail("missing value");
  char ch = c.peek();
  if (ch == '[') return parse_list(c);
  ConfigValue v;
  if (ch == '"') {
    ++c.i;
    size_t start = c.i;
    while (!c.done() && c.peek() != '"') ++c.i;
    if (c.done()) c.fail("unterminated string");
    v.kind = ConfigValue::Kind::string;
    v.text = c.s.substr(start, c.i - start);
    ++c.i;
    return v;
  }
  size_t start = c.i;
  while (!c.done() && c.peek() != ',' && c.peek() != ']' && c.peek() != ' ' && c.peek() != '\t') ++c.i;
  std::string tok = c.s.substr(start, c.i - start);
  if (tok.empty()) c.fail("missing value");
  const char* b = tok.data();
  const char* e = b + tok.size();
  double num = 0;
  auto [p, ec] = std::from_chars(b, e, num);
  if (ec == std::errc() && p == e) {
    v.kind = ConfigValue::Kind::number;
    v.number = num;
  } else {
    v.kind = ConfigValue::Kind::string;
    v.text = tok;
  }
  return v;
}

// Strip a '#' comment, respecting double-quoted strings.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

int bracket_depth(const std::string& s) {
  int depth = 0;
  bool in_string = false;
  for (char ch : s) {
    if (ch == '"') in_string = !in_string;
    if (in_string) continue;
    if (ch == '[') ++depth;
    if (ch == ']') --depth;
  }
  return depth;
}

void parse_assignment(const std::string& stmt, const std::string& origin, ConfigMap& out) {
  size_t eq = stmt.find('=');
  if (eq == std::string::npos) {
    throw UsageError(origin + ": expected 'key = value', got '" + stmt + "'");
  }
  std::string key = stmt.substr(0, eq);
  while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
  size_t ks = key.find_first_not_of(" \t");
  if (ks == std::string::npos) throw UsageError(origin + ": empty key");
  key = key.substr(ks);
  std::string rest = stmt.substr(eq + 1);
  Cursor c{rest, 0, origin};
  ConfigValue v = parse_value(c);
  c.skip_space();
  if (!c.done()) c.fail("trailing characters after value for key '" + key + "'");
  out[key] = std::move(v);
}

double want_number(const ConfigValue& v, const std::string& key, const std::string& origin) {
  if (v.kind != ConfigValue::Kind::number) {
    throw UsageError(origin + ": key '" + key + "' must be a number");
  }
  return v.number;
}

std::string want_string(const ConfigValue& v, const std::string& key, const std::string& origin) {
  if (v.kind != ConfigValue::Kind::string) {
    throw UsageError(origin + ": key '" + key + "' must be a string");
  }
  return v.text;
}

std::vector<double> want_number_list(const ConfigValue& v, const std::string& key,
                                     const std::string& origin) {
  if (v.kind == ConfigValue::Kind::number) return {v.number};
  if (v.kind != ConfigValue::Kind::list) {
    throw UsageError(origin + ": key '" + key + "' must be a number or array of numbers");
  }
  std::vector<double> out;
  for (const auto& item : v.items) out.push_back(want_number(item, key, origin));
  return out;
}

std::vector<std::vector<double>> want_matrix(const ConfigValue& v, const std::string& key,
                                             const std::string& origin) {
  if (v.kind != ConfigValue::Kind::list) {
    throw UsageError(origin + ": key '" + key + "' must be an array of rows");
  }
  std::vector<std::vector<double>> out;
  for (const auto& row : v.items) {
    if (row.kind != ConfigValue::Kind::list) {
      throw UsageError(origin + ": key '" + key + "' rows must be arrays");
    }
    out.push_back(want_number_list(row, key, origin));
  }
  return out;
}

int want_int(const ConfigValue& v, const std::string& key, const std::string& origin) {
  double d = want_number(v, key, origin);
  double r = std::round(d);
  if (std::abs(d - r) > 1e-9) throw UsageError(origin + ": key '" + key + "' must be an integer");
  return int(r);
}

void check_known_keys(const ConfigMap& config, const std::set<std::string>& known,
                      const std::string& origin) {
  for (const auto& [key, value] : config) {
    (void)value;
    if (!known.count(key)) {
      throw UsageError(origin + ": unknown configuration key '" + key + "'");
    }
  }
}

void apply_override_strings(ConfigMap& config, const std::vector<std::string>& overrides) {
  for (const auto& ov : overrides) {
    parse_assignment(ov, "override '" + ov + "'", config);
  }
}

}  // namespace

ConfigMap parse_config_text(const std::string& text, const std::string& origin) {
  ConfigMap out;
  std::istringstream in(text);
  std::string line;
  std::string pending;
  int depth = 0;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = strip_comment(line);
    if (pending.empty()) {
      size_t start = body.find_first_not_of(" \t\r");
      if (start == std::string::npos) continue;
      pending = body;
    } else {
      pending += " " + body;
    }
    depth = bracket_depth(pending);
    if (depth > 0) continue;  // array continues on the next line
    if (depth < 0) throw UsageError(origin + ":" + std::to_string(line_no) + ": unbalanced ']'");
    // Trim trailing whitespace/CR before parsing the full statement.
    while (!pending.empty() && (pending.back() == ' ' || pending.back() == '\t' || pending.back() == '\r')) {
      pending.pop_back();
    }
    if (!pending.empty()) {
      parse_assignment(pending, origin + ":" + std::to_string(line_no), out);
    }
    pending.clear();
  }
  if (!pending.empty()) throw UsageError(origin + ": unterminated array at end of file");
  return out;
}

ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

ScenarioSpec scenario_from_config(ConfigMap config, const std::vector<std::string>& overrides,
                                  std::optional<uint64_t> seed_override) {
  const std::string origin = "scenario config";
  apply_override_strings(config, overrides);
  static const std::set<std::string> known = {
      "layout",        "bs_positions",   "cell_radius_km", "n_t",         "n_t_p",
      "n_t_c",         "n_r",            "bs_power_dbm",   "noise_power_dbm",
      "sigma_shadow_db", "mobiles",      "gain_override_db", "rng_seed",
      "xi_p_db",       "xi_c_db",        "m_c_max",        "r_p",         "r_c",
      "d_total",       "d_m"};
  check_known_keys(config, known, origin);
  auto get = [&](const std::string& key) -> const ConfigValue* {
    auto it = config.find(key);
    return it == config.end() ? nullptr : &it->second;
  };
  auto require = [&](const std::string& key) -> const ConfigValue& {
    const ConfigValue* v = get(key);
    if (!v) throw UsageError(origin + ": missing required key '" + key + "'");
    return *v;
  };

  ScenarioSpec spec;
  Scenario& sc = spec.scenario;

  sc.topology.cell_radius_km = get("cell_radius_km")
                                   ? want_number(*get("cell_radius_km"), "cell_radius_km", origin)
                                   : 5.0;
  sc.topology.n_t = get("n_t") ? want_int(*get("n_t"), "n_t", origin) : 4;
  sc.topology.n_t_p = get("n_t_p") ? want_int(*get("n_t_p"), "n_t_p", origin) : 2;
  sc.topology.n_t_c = get("n_t_c") ? want_int(*get("n_t_c"), "n_t_c", origin) : 2;

  std::string layout = get("layout") ? want_string(*get("layout"), "layout", origin) : "hexagonal";
  int n_bs = 0;
  if (layout == "explicit") {
    sc.topology.layout = Layout::explicit_positions;
    auto rows = want_matrix(require("bs_positions"), "bs_positions", origin);
    for (const auto& row : rows) {
      if (row.size() != 2) throw UsageError(origin + ": bs_positions rows must be [x_km, y_km]");
      sc.topology.bs_positions.push_back({row[0], row[1]});
    }
    n_bs = int(rows.size());
  } else if (layout == "hexagonal") {
    sc.topology.layout = Layout::hexagonal;
    if (get("bs_positions")) {
      throw UsageError(origin + ": bs_positions is only valid with layout = explicit");
    }
    // Cell count comes from the power vector length under hexagonal layout.
    n_bs = int(want_number_list(require("bs_power_dbm"), "bs_power_dbm", origin).size());
    sc.topology.bs_positions = hexagonal_layout(n_bs, sc.topology.cell_radius_km);
  } else {
    throw UsageError(origin + ": layout must be 'hexagonal' or 'explicit'");
  }

  auto powers_dbm = want_number_list(require("bs_power_dbm"), "bs_power_dbm", origin);
  if (int(powers_dbm.size()) == 1 && n_bs > 1) powers_dbm.assign(size_t(n_bs), powers_dbm[0]);
  if (int(powers_dbm.size()) != n_bs) {
    throw UsageError(origin + ": bs_power_dbm length must match the BS count");
  }
  for (double p : powers_dbm) sc.bs_power_w.push_back(dbm_to_watts(p));

  double noise_dbm = get("noise_power_dbm")
                         ? want_number(*get("noise_power_dbm"), "noise_power_dbm", origin)
                         : -97.0;
  spec.sigma_shadow_db = get("sigma_shadow_db")
                             ? want_number(*get("sigma_shadow_db"), "sigma_shadow_db", origin)
                             : 8.0;

  int n_r = get("n_r") ? want_int(*get("n_r"), "n_r", origin) : 2;
  auto ms_rows = want_matrix(require("mobiles"), "mobiles", origin);
  int next_id = 1;
  for (const auto& row : ms_rows) {
    if (row.size() != 4) {
      throw UsageError(origin + ": mobiles rows must be [x_km, y_km, weight, speed_kmh]");
    }
    MsState ms;
    ms.id = next_id++;
    ms.position = {row[0], row[1]};
    ms.weight = row[2];
    ms.speed_kmh = row[3];
    ms.n_r = n_r;
    sc.mobiles.push_back(ms);
  }

  if (seed_override) {
    sc.rng_seed = *seed_override;
  } else if (get("rng_seed")) {
    double s = want_number(*get("rng_seed"), "rng_seed", origin);
    if (s < 0) throw UsageError(origin + ": rng_seed must be >= 0");
    sc.rng_seed = uint64_t(s);
  }

  auto xi_p = get("xi_p_db") ? want_number_list(*get("xi_p_db"), "xi_p_db", origin)
                             : std::vector<double>{20.0};
  if (int(xi_p.size()) == 1 && n_bs > 1) xi_p.assign(size_t(n_bs), xi_p[0]);
  sc.thresholds.xi_p_db = xi_p;
  sc.thresholds.xi_c_db = get("xi_c_db") ? want_number(*get("xi_c_db"), "xi_c_db", origin) : 5.0;
  sc.thresholds.m_c_max = get("m_c_max") ? want_int(*get("m_c_max"), "m_c_max", origin) : 2;

  auto r_p = get("r_p") ? want_number_list(*get("r_p"), "r_p", origin) : std::vector<double>{1.0};
  if (int(r_p.size()) == 1 && n_bs > 1) r_p.assign(size_t(n_bs), r_p[0]);
  sc.rates.r_p = r_p;
  sc.rates.r_c = get("r_c") ? want_number(*get("r_c"), "r_c", origin) : 1.0;
  sc.rates.d_total = get("d_total") ? want_int(*get("d_total"), "d_total", origin) : 2;
  if (get("d_m")) {
    auto pairs = want_matrix(*get("d_m"), "d_m", origin);
    for (const auto& pr : pairs) {
      if (pr.size() != 2) throw UsageError(origin + ": d_m rows must be [ms_id, streams]");
      sc.rates.d_m[int(pr[0])] = int(pr[1]);
    }
  }

  std::optional<std::vector<std::vector<double>>> override_db;
  if (get("gain_override_db")) {
    override_db = want_matrix(*get("gain_override_db"), "gain_override_db", origin);
    spec.has_gain_override = true;
  }

  Rng rng(derive_seed(sc.rng_seed, 0));
  sc.gain_map = build_gain_map(sc.topology, sc.mobiles, {spec.sigma_shadow_db}, rng,
                               dbm_to_watts(noise_dbm), override_db);
  sc.validate();
  return spec;
}

ScenarioSpec load_scenario(const std::string& path, const std::vector<std::string>& overrides,
                           std::optional<uint64_t> seed_override) {
  return scenario_from_config(parse_config_file(path), overrides, seed_override);
}

void CampaignConfig::validate() const {
  if (n_cells < 1) throw UsageError("campaign: n_cells must be >= 1");
  if (n_drops < 1) throw UsageError("campaign: n_drops must be >= 1");
  if (n_ms_type1 < 0 || n_ms_type2 < 0 || n_ms_type1 + n_ms_type2 < 1) {
    throw UsageError("campaign: need at least one MS");
  }
  if (!(w_type1 > 0) || !(w_type2 > 0)) throw UsageError("campaign: weights must be positive");
  if (power_sweep_dbm.empty() && xi_p_sweep_db.empty() && xi_c_sweep_db.empty()) {
    throw UsageError("campaign: at least one sweep axis must be non-empty");
  }
  for (const auto* sweep : {&power_sweep_dbm, &xi_p_sweep_db, &xi_c_sweep_db}) {
    std::set<double> unique(sweep->begin(), sweep->end());
    if (unique.size() != sweep->size()) {
      throw UsageError("campaign: sweep values must be distinct");
    }
  }
  if (schemes.empty()) throw UsageError("campaign: at least one scheme required");
  static const std::set<std::string> valid_schemes = {"proposed", "baseline1", "baseline2",
                                                      "baseline3"};
  for (const auto& s : schemes) {
    if (!valid_schemes.count(s)) throw UsageError("campaign: unknown scheme '" + s + "'");
  }
  if (!(tau > 0) || !(tau < 1)) throw UsageError("campaign: tau must lie in (0, 1)");
  if (!(grid_step > 0) || grid_step > 0.5) throw UsageError("campaign: grid_step out of range");
  if (mobility_steps < 0) throw UsageError("campaign: mobility_steps must be >= 0");
  if (!(mobility_dt_s > 0)) throw UsageError("campaign: mobility_dt_s must be positive");
  if (ms_speed_kmh < 0) throw UsageError("campaign: ms_speed_kmh must be >= 0");
}

CampaignConfig load_campaign_config(const std::string& path, const std::vector<std::string>& overrides,
                                    std::optional<uint64_t> seed_override) {
  ConfigMap config = parse_config_file(path);
  apply_override_strings(config, overrides);
  const std::string origin = "campaign config";
  static const std::set<std::string> known = {
      "n_cells",       "cell_radius_km", "n_ms_type1",   "n_ms_type2",  "w_type1",
      "w_type2",       "power_sweep_dbm", "xi_p_sweep_db", "xi_c_sweep_db", "n_drops",
      "schemes",       "seed",           "power_dbm",    "xi_p_db",     "xi_c_db",
      "m_c_max",       "noise_power_dbm", "sigma_shadow_db", "n_t",      "n_t_p",
      "n_t_c",         "n_r",            "r_p",          "r_c",         "d_total",
      "tau",           "grid_step",      "scenario_file", "mobility_steps", "mobility_dt_s",
      "ms_speed_kmh"};
  check_known_keys(config, known, origin);
  auto get = [&](const std::string& key) -> const ConfigValue* {
    auto it = config.find(key);
    return it == config.end() ? nullptr : &it->second;
  };
  CampaignConfig cfg;
  auto set_num = [&](const char* key, double& field) {
    if (get(key)) field = want_number(*get(key), key, origin);
  };
  auto set_int = [&](const char* key, int& field) {
    if (get(key)) field = want_int(*get(key), key, origin);
  };
  set_int("n_cells", cfg.n_cells);
  set_num("cell_radius_km", cfg.cell_radius_km);
  set_int("n_ms_type1", cfg.n_ms_type1);
  set_int("n_ms_type2", cfg.n_ms_type2);
  set_num("w_type1", cfg.w_type1);
  set_num("w_type2", cfg.w_type2);
  if (get("power_sweep_dbm")) {
    cfg.power_sweep_dbm = want_number_list(*get("power_sweep_dbm"), "power_sweep_dbm", origin);
  }
  if (get("xi_p_sweep_db")) {
    cfg.xi_p_sweep_db = want_number_list(*get("xi_p_sweep_db"), "xi_p_sweep_db", origin);
  }
  if (get("xi_c_sweep_db")) {
    cfg.xi_c_sweep_db = want_number_list(*get("xi_c_sweep_db"), "xi_c_sweep_db", origin);
  }
  set_int("n_drops", cfg.n_drops);
  if (get("schemes")) {
    cfg.schemes.clear();
    const ConfigValue& v = *get("schemes");
    if (v.kind != ConfigValue::Kind::list) throw UsageError(origin + ": schemes must be an array");
    for (const auto& item : v.items) cfg.schemes.push_back(want_string(item, "schemes", origin));
  }
  if (seed_override) {
    cfg.seed = *seed_override;
  } else if (get("seed")) {
    cfg.seed = uint64_t(want_number(*get("seed"), "seed", origin));
  }
  set_num("power_dbm", cfg.power_dbm);
  set_num("xi_p_db", cfg.xi_p_db);
  set_num("xi_c_db", cfg.xi_c_db);
  set_int("m_c_max", cfg.m_c_max);
  set_num("noise_power_dbm", cfg.noise_power_dbm);
  set_num("sigma_shadow_db", cfg.sigma_shadow_db);
  set_int("n_t", cfg.n_t);
  set_int("n_t_p", cfg.n_t_p);
  set_int("n_t_c", cfg.n_t_c);
  set_int("n_r", cfg.n_r);
  set_num("r_p", cfg.r_p);
  set_num("r_c", cfg.r_c);
  set_int("d_total", cfg.d_total);
  set_num("tau", cfg.tau);
  set_num("grid_step", cfg.grid_step);
  if (get("scenario_file")) {
    cfg.scenario_file = want_string(*get("scenario_file"), "scenario_file", origin);
  }
  set_int("mobility_steps", cfg.mobility_steps);
  set_num("mobility_dt_s", cfg.mobility_dt_s);
  set_num("ms_speed_kmh", cfg.ms_speed_kmh);
  cfg.validate();
  return cfg;
}

}  // namespace netmimo
