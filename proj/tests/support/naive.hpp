#pragma once
// Test-side reference material: a long-double transliteration of the rate
// model written straight from the formula definitions, plus hand-built
// scenarios with independently derived expected values. The evaluator here
// deliberately shares no code with the library so the two can cross-check
// each other.
#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "netmimo/model.hpp"
#include "netmimo/rng.hpp"

namespace naive {

struct Model {
  int n_bs = 0;
  std::vector<int> common_ids;                   // ascending
  std::map<int, std::vector<long double>> s;     // ms id -> per-BS SNR terms
  std::map<int, long double> weight;             // ms id -> w_m
  std::map<int, long double> share;              // common id -> D_m / D
  std::map<int, int> private_of;                 // bs -> its private MS id
  std::vector<long double> r_p;                  // per-BS private code rate
  long double r_c = 1;

  long double cmw() const {
    long double best = 0;
    bool first = true;
    for (int j : common_ids) {
      long double v = weight.at(j) * share.at(j);
      if (first || v < best) best = v;
      first = false;
    }
    return best;
  }

  // Shared-stream rate at common MS j: every BS adds signal, BSs with a
  // private MS add interference.
  long double common_rate(int j, const std::vector<double>& theta) const {
    const std::vector<long double>& row = s.at(j);
    long double num = 0, den = 1;
    for (int k = 0; k < n_bs; ++k) {
      num += row[size_t(k)] * (long double)theta[size_t(k)] * r_c;
      if (private_of.count(k)) {
        den += row[size_t(k)] * (1 - (long double)theta[size_t(k)]) * r_p[size_t(k)];
      }
    }
    return std::log2(1 + num / den);
  }

  // Shared-stream decode rate at BS k's private MS (only BS k reaches it).
  long double sic_rate(int k, double theta_k) const {
    long double sv = s.at(private_of.at(k))[size_t(k)];
    long double num = sv * (long double)theta_k * r_c;
    long double den = 1 + sv * (1 - (long double)theta_k) * r_p[size_t(k)];
    return std::log2(1 + num / den);
  }

  long double private_rate(int k, double theta_k) const {
    long double sv = s.at(private_of.at(k))[size_t(k)];
    return std::log2(1 + sv * (1 - (long double)theta_k) * r_p[size_t(k)]);
  }

  // min over served MSs of weight * long-term throughput.
  long double objective(const std::vector<double>& theta) const {
    bool have = false;
    long double best = 0;
    if (!common_ids.empty()) {
      long double cmin = 0;
      bool first = true;
      for (int j : common_ids) {
        long double v = common_rate(j, theta);
        if (first || v < cmin) cmin = v;
        first = false;
      }
      for (const auto& [k, ms] : private_of) {
        (void)ms;
        long double v = sic_rate(k, theta[size_t(k)]);
        if (v < cmin) cmin = v;
      }
      for (int j : common_ids) {
        long double v = weight.at(j) * share.at(j) * cmin;
        if (!have || v < best) best = v;
        have = true;
      }
    }
    for (const auto& [k, ms] : private_of) {
      long double v = weight.at(ms) * private_rate(k, theta[size_t(k)]);
      if (!have || v < best) best = v;
      have = true;
    }
    return best;
  }
};

// Reads the scenario's raw data (gains, powers, noise, weights, stream
// shares) into the reference model. Stream shares follow the same even-split
// rule the library documents: d_total / |common| each, remainder to the
// lowest ids.
inline Model from_scenario(const netmimo::Scenario& sc, const netmimo::UserSets& sets) {
  Model m;
  m.n_bs = sc.n_bs();
  m.common_ids = sets.common;
  m.r_c = sc.rates.r_c;
  for (double r : sc.rates.r_p) m.r_p.push_back(r);
  for (const netmimo::MsState& ms : sc.mobiles) {
    m.weight[ms.id] = ms.weight;
    std::vector<long double> row;
    int idx = sc.ms_index(ms.id);
    for (int k = 0; k < m.n_bs; ++k) {
      row.push_back((long double)sc.bs_power_w[size_t(k)] * sc.gain_map.at(idx, k) /
                    sc.gain_map.noise_power_w);
    }
    m.s[ms.id] = row;
  }
  for (int k = 0; k < m.n_bs; ++k) {
    if (sets.private_ms[size_t(k)]) m.private_of[k] = *sets.private_ms[size_t(k)];
  }
  int n_common = int(sets.common.size());
  if (n_common > 0) {
    if (!sc.rates.d_m.empty()) {
      for (int j : sets.common) {
        m.share[j] = (long double)sc.rates.d_m.at(j) / sc.rates.d_total;
      }
    } else {
      int base = sc.rates.d_total / n_common;
      int rem = sc.rates.d_total % n_common;
      for (int i = 0; i < n_common; ++i) {
        m.share[sets.common[size_t(i)]] =
            (long double)(base + (i < rem ? 1 : 0)) / sc.rates.d_total;
      }
    }
  }
  return m;
}

struct Built {
  netmimo::Scenario scenario;
  netmimo::UserSets sets;
};

// Bare scenario shell with unit powers and unit noise, so gain values are the
// SNR terms themselves.
inline netmimo::Scenario shell(int n_bs, int n_ms) {
  netmimo::Scenario sc;
  sc.topology.layout = netmimo::Layout::explicit_positions;
  for (int k = 0; k < n_bs; ++k) {
    sc.topology.bs_positions.push_back({10.0 * k, 0.0});
  }
  for (int m = 0; m < n_ms; ++m) {
    netmimo::MsState ms;
    ms.id = m + 1;
    ms.position = {1.0 + m, 1.0};
    sc.mobiles.push_back(ms);
  }
  sc.gain_map.n_ms = n_ms;
  sc.gain_map.n_bs = n_bs;
  sc.gain_map.gains.assign(size_t(n_ms) * size_t(n_bs), 1e-6);
  sc.gain_map.noise_power_w = 1.0;
  sc.bs_power_w.assign(size_t(n_bs), 1.0);
  sc.rates.r_p.assign(size_t(n_bs), 1.0);
  sc.rates.r_c = 1.0;
  sc.rates.d_total = 2;
  sc.thresholds.xi_p_db.assign(size_t(n_bs), 20.0);
  sc.thresholds.xi_c_db = 5.0;
  sc.thresholds.m_c_max = 4;
  return sc;
}

// Two mirrored cells built so every quantity at theta = (1/2, 1/2) equals
// exactly 1 bit: private SNR 4 with code rate 1/2 puts the local anchor at
// 1/2 (decode rate log2(1 + 2/2) meets private rate log2(1 + 1)), and
// shared-MS SNR 2 makes the common-set rate cross the private rate at the
// same point (the balance equation (3+2t)/(3-2t) = 3-2t has root t = 1/2).
// The equilibrium and the uniform-split baseline coincide by construction.
inline Built symmetric_pair() {
  Built b;
  b.scenario = shell(2, 3);
  b.scenario.gain_map.at(0, 0) = 4.0;
  b.scenario.gain_map.at(1, 1) = 4.0;
  b.scenario.gain_map.at(2, 0) = 2.0;
  b.scenario.gain_map.at(2, 1) = 2.0;
  b.scenario.rates.r_p = {0.5, 0.5};
  b.sets.private_ms = {1, 2};
  b.sets.common = {3};
  b.scenario.validate();
  b.sets.validate(2, 3);
  return b;
}
inline constexpr double symmetric_pair_theta = 0.5;
inline constexpr double symmetric_pair_objective = 1.0;

// Single cell, one private MS with SNR s_p and one shared MS. With unit code
// rates and unit weights the anchor equation "shared-stream decode rate
// equals private rate" reduces to s_p u^2 + 2u - 1 = 0 for u = 1 - eta, so
// eta = 1 - (sqrt(1 + s_p) - 1) / s_p in closed form.
inline Built anchor_single(double s_p, double s_c) {
  Built b;
  b.scenario = shell(1, 2);
  b.scenario.gain_map.at(0, 0) = s_p;
  b.scenario.gain_map.at(1, 0) = s_c;
  b.sets.private_ms = {1};
  b.sets.common = {2};
  b.scenario.validate();
  b.sets.validate(1, 2);
  return b;
}
inline double anchor_single_eta(double s_p) {
  return 1.0 - (std::sqrt(1.0 + s_p) - 1.0) / s_p;
}

// The pinned three-cell case: explicit dB gains, 30 dBm everywhere, noise
// -97 dBm, weights 2/1/1/1/2. MS1..MS3 are the private MSs of BS1..BS3 and
// MS4/MS5 form the shared set. Mirrors scenarios/convergence_3cell.toml.
inline const double k_pinned_gains_db[5][3] = {
    {-118.30, -140.14, -139.29},
    {-145.11, -115.56, -143.23},
    {-147.78, -139.65, -116.35},
    {-135.24, -136.08, -135.35},
    {-135.16, -135.91, -134.94},
};

inline Built pinned_three_cell() {
  Built b;
  b.scenario = shell(3, 5);
  b.scenario.topology.bs_positions = {{0.0, 0.0}, {8.66, 0.0}, {4.33, 7.5}};
  b.scenario.gain_map.noise_power_w = std::pow(10.0, -12.7);
  for (int m = 0; m < 5; ++m) {
    for (int k = 0; k < 3; ++k) {
      b.scenario.gain_map.at(m, k) = std::pow(10.0, k_pinned_gains_db[m][k] / 10.0);
    }
  }
  b.scenario.mobiles[0].weight = 2.0;
  b.scenario.mobiles[4].weight = 2.0;
  b.scenario.thresholds.m_c_max = 2;
  b.scenario.rng_seed = 42;
  b.sets.private_ms = {1, 2, 3};
  b.sets.common = {4, 5};
  b.scenario.validate();
  b.sets.validate(3, 5);
  return b;
}

// Frozen expectations for the pinned case, computed with an independent
// prototype of the same formulas (bisection to machine precision).
namespace pinned {
inline const double s_terms[5][3] = {
    {7.41310241301, 0.0485288500162, 0.0590201080172},
    {0.0154525443954, 13.9315680295, 0.0238231946936},
    {0.00835603018231, 0.0543250331492, 11.6144861384},
    {0.14996848355, 0.123594743344, 0.146217717446},
    {0.152756605824, 0.128528665994, 0.160694125301},
};
inline const double eta[3] = {0.928362440958995, 0.895025745918493, 0.885672238934895};
inline const double theta_star[3] = {0.987861088609664, 0.986500324643501, 0.983807148817136};
inline const double ne_objective = 0.248621839204158;
inline const double baseline1_half_tau = 0.1264170889655;
inline const double baseline2 = 0.115395952697194;
inline const double grid_005_objective = 0.247782420499363;
inline const double grid_005_theta[3] = {0.985, 0.985, 0.98};
}  // namespace pinned

// One active cell next to an idle one: BS2 serves nobody, so its power only
// ever helps the shared stream and it never appears in a denominator. MS1 is
// BS1's private MS, MS2 the shared MS; tests override MS2's gains.
inline Built inactive_bs_case() {
  Built b;
  b.scenario = shell(2, 2);
  b.scenario.gain_map.at(0, 0) = 5.0;
  b.scenario.gain_map.at(1, 0) = 0.3;
  b.scenario.gain_map.at(1, 1) = 0.8;
  b.sets.private_ms = {1, std::nullopt};
  b.sets.common = {2};
  b.scenario.validate();
  b.sets.validate(2, 2);
  return b;
}

// Two shared MSs with identical rows, weights and stream shares: their
// weighted throughputs tie bit-for-bit at every split.
inline Built tied_common_pair() {
  Built b;
  b.scenario = shell(2, 3);
  b.scenario.gain_map.at(0, 0) = 50.0;
  b.scenario.gain_map.at(1, 0) = 0.5;
  b.scenario.gain_map.at(1, 1) = 0.5;
  b.scenario.gain_map.at(2, 0) = 0.5;
  b.scenario.gain_map.at(2, 1) = 0.5;
  b.sets.private_ms = {1, std::nullopt};
  b.sets.common = {2, 3};
  b.scenario.validate();
  b.sets.validate(2, 3);
  return b;
}

// Built for exact grid ties: BS2 has no private MS, so once the shared-MS
// rate exceeds the private-side bottleneck the objective stops depending on
// theta_2 bit-for-bit. On the step-0.25 grid the maximum is a three-way tie
// along theta_2 at theta_1 = 0.75 (where decode and private rates both hit
// log2 3), so a correct smallest-wins scan must report (0.75, 0.5).
inline Built grid_tie_case() {
  Built b;
  b.scenario = shell(2, 2);
  b.scenario.gain_map.at(0, 0) = 8.0;
  b.scenario.gain_map.at(1, 0) = 0.01;
  b.scenario.gain_map.at(1, 1) = 6.0;
  b.sets.private_ms = {1, std::nullopt};
  b.sets.common = {2};
  b.scenario.validate();
  b.sets.validate(2, 2);
  return b;
}

// Random always-feasible case for property sweeps: one private MS per BS
// with a dominant own-cell gain, n_common shared MSs with balanced moderate
// gains. Weights mix 1 and 2; shares split evenly.
inline Built random_structured(netmimo::Rng& rng, int n_bs, int n_common) {
  Built b;
  b.scenario = shell(n_bs, n_bs + n_common);
  for (int k = 0; k < n_bs; ++k) {
    for (int j = 0; j < n_bs; ++j) {
      b.scenario.gain_map.at(k, j) =
          (j == k) ? 2.0 + 28.0 * rng.uniform() : 1e-4 + 1e-2 * rng.uniform();
    }
    b.sets.private_ms.push_back(k + 1);
  }
  for (int m = 0; m < n_common; ++m) {
    for (int j = 0; j < n_bs; ++j) {
      b.scenario.gain_map.at(n_bs + m, j) = 0.05 + 1.95 * rng.uniform();
    }
    b.sets.common.push_back(n_bs + m + 1);
  }
  for (auto& ms : b.scenario.mobiles) ms.weight = 1.0 + rng.uniform_int(2);
  b.scenario.rates.d_total = std::max(2, n_common);
  b.scenario.rates.r_c = 0.25 + 0.75 * rng.uniform();
  for (auto& r : b.scenario.rates.r_p) r = 0.25 + 0.75 * rng.uniform();
  b.scenario.validate();
  b.sets.validate(n_bs, n_bs + n_common);
  return b;
}

}  // namespace naive
