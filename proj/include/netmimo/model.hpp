#pragma once
// Value types shared by every stage: cell geometry, per-mobile state,
// long-term gain maps, scheduling thresholds, code rates, and power splits.
// All are plain data with validation helpers; no behavior lives here.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace netmimo {

// Domain problems (infeasible scenario, non-convergence) versus caller
// mistakes (bad config keys, malformed values). The CLI maps them to
// different exit codes.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Point {
  double x_km = 0.0;
  double y_km = 0.0;
};

enum class Layout { hexagonal, explicit_positions };

struct Topology {
  std::vector<Point> bs_positions;
  double cell_radius_km = 5.0;
  int n_t = 4;    // transmit antennas per BS
  int n_t_p = 2;  // antennas carrying the private stream
  int n_t_c = 2;  // antennas carrying the shared stream
  Layout layout = Layout::hexagonal;

  int n_bs() const { return int(bs_positions.size()); }
  void validate() const;
};

struct MsState {
  int id = 0;  // 1-based, stable across a run
  Point position;
  double weight = 1.0;
  int n_r = 2;  // receive antennas
  double speed_kmh = 0.0;
};

struct GainMap {
  int n_ms = 0;
  int n_bs = 0;
  std::vector<double> gains;  // linear power ratios, row-major [ms][bs]
  double noise_power_w = 0.0;

  double at(int m, int k) const { return gains[size_t(m) * n_bs + k]; }
  double& at(int m, int k) { return gains[size_t(m) * n_bs + k]; }
  void validate() const;
};

struct Thresholds {
  std::vector<double> xi_p_db;  // per-BS private selection margin
  double xi_c_db = 0.0;         // shared-set balance tolerance
  int m_c_max = 1;              // cap on the shared set size

  // The margin relation xi_p >= (K-1)/K * xi_c makes the private and shared
  // labels provably disjoint; enforced here so downstream code can rely on it.
  void validate(int n_bs) const;
};

struct OstbcRates {
  std::vector<double> r_p;     // per-BS private code rate, (0, 1]
  double r_c = 1.0;            // shared code rate, (0, 1]
  int d_total = 1;             // total streams in the shared codeword
  std::map<int, int> d_m;      // MS id -> streams assigned to that MS

  void validate(int n_bs) const;
};

struct PowerSplit {
  std::vector<double> theta_c;  // per-BS fraction of power on the shared codeword

  void validate() const;
};

struct UserSets {
  // One scheduled MS id per BS (empty slot allowed), the shared set in
  // ascending id order, and everything else.
  std::vector<std::optional<int>> private_ms;
  std::vector<int> common;
  std::vector<int> unassigned;

  int n_private() const {
    int n = 0;
    for (const auto& p : private_ms) n += p.has_value() ? 1 : 0;
    return n;
  }
  void validate(int n_bs, int n_ms) const;
};

struct Scenario {
  Topology topology;
  std::vector<MsState> mobiles;
  GainMap gain_map;
  std::vector<double> bs_power_w;
  OstbcRates rates;
  Thresholds thresholds;
  uint64_t rng_seed = 1;

  int n_bs() const { return topology.n_bs(); }
  int n_ms() const { return int(mobiles.size()); }
  // Index of an MS id inside mobiles/gain_map rows.
  int ms_index(int ms_id) const;
  void validate() const;
};

struct ThroughputReport {
  std::map<int, double> per_ms;  // MS id -> long-term throughput, bits/s/Hz
  double min_weighted = 0.0;     // min over MSs of weight * throughput
  int binding_ms = -1;           // MS achieving that minimum (lowest id on ties)
};

}  // namespace netmimo
