#pragma once
// Structured text configuration: `key = value` lines with numbers, bare or
// quoted strings, and bracketed arrays (one nesting level for matrices).
// Unknown keys are rejected so typos fail loudly instead of silently using a
// default. The same grammar drives scenario files, campaign files, and
// command-line `--set key=value` overrides.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netmimo/model.hpp"

namespace netmimo {

struct ConfigValue {
  enum class Kind { number, string, list };
  Kind kind = Kind::number;
  double number = 0.0;
  std::string text;
  std::vector<ConfigValue> items;
};

// Raw parsed file: insertion-ordered key/value pairs, later keys override.
using ConfigMap = std::map<std::string, ConfigValue>;

ConfigMap parse_config_text(const std::string& text, const std::string& origin);
ConfigMap parse_config_file(const std::string& path);

// A scenario file plus the pieces that only matter at build time (layout
// requests, shadowing sigma, optional explicit gain matrix).
struct ScenarioSpec {
  Scenario scenario;                 // fully built and validated
  double sigma_shadow_db = 8.0;
  bool has_gain_override = false;
};

// Parse, apply overrides (same grammar, "key=value" strings), then build the
// gain map and validate. seed_override replaces the file's rng_seed.
ScenarioSpec load_scenario(const std::string& path, const std::vector<std::string>& overrides = {},
                           std::optional<uint64_t> seed_override = std::nullopt);
ScenarioSpec scenario_from_config(ConfigMap config, const std::vector<std::string>& overrides = {},
                                  std::optional<uint64_t> seed_override = std::nullopt);

struct CampaignConfig {
  int n_cells = 3;
  double cell_radius_km = 5.0;
  int n_ms_type1 = 10;
  int n_ms_type2 = 10;
  double w_type1 = 1.0;
  double w_type2 = 2.0;
  std::vector<double> power_sweep_dbm;
  std::vector<double> xi_p_sweep_db;
  std::vector<double> xi_c_sweep_db;
  int n_drops = 100;
  std::vector<std::string> schemes{"proposed", "baseline1", "baseline2", "baseline3"};
  uint64_t seed = 1;
  // Fixed-axis values used while the other axes sweep.
  double power_dbm = 35.0;
  double xi_p_db = 20.0;
  double xi_c_db = 5.0;
  int m_c_max = 2;
  double noise_power_dbm = -97.0;
  double sigma_shadow_db = 8.0;
  int n_t = 4, n_t_p = 2, n_t_c = 2, n_r = 2;
  double r_p = 1.0, r_c = 1.0;
  int d_total = 2;
  double tau = 0.5;          // baseline1 time share
  double grid_step = 0.01;   // baseline3 resolution
  std::optional<std::string> scenario_file;  // evaluate a fixed scenario instead of random drops
  int mobility_steps = 0;
  double mobility_dt_s = 1.0;
  double ms_speed_kmh = 3.0;

  void validate() const;
};

CampaignConfig load_campaign_config(const std::string& path, const std::vector<std::string>& overrides = {},
                                    std::optional<uint64_t> seed_override = std::nullopt);

}  // namespace netmimo
