#include "netmimo/model.hpp"

#include <cmath>

namespace netmimo {

void Topology::validate() const {
  if (bs_positions.empty()) throw DomainError("topology: at least one BS required");
  if (!(cell_radius_km > 0)) throw DomainError("topology: cell radius must be positive");
  if (n_t_p < 1 || n_t_c < 1) throw DomainError("topology: antenna split parts must be >= 1");
  if (n_t_p + n_t_c != n_t) throw DomainError("topology: antenna split must sum to n_t");
}

void GainMap::validate() const {
  if (n_ms < 0 || n_bs <= 0 || gains.size() != size_t(n_ms) * n_bs) {
    throw DomainError("gain map: inconsistent dimensions");
  }
  if (!(noise_power_w > 0) || !std::isfinite(noise_power_w)) {
    throw DomainError("gain map: noise power must be positive and finite");
  }
  for (double g : gains) {
    if (!(g > 0) || !std::isfinite(g)) {
      throw DomainError("gain map: entries must be positive and finite");
    }
  }
}

void Thresholds::validate(int n_bs) const {
  if (int(xi_p_db.size()) != n_bs) throw DomainError("thresholds: xi_p_db needs one entry per BS");
  if (m_c_max < 1) throw DomainError("thresholds: m_c_max must be >= 1");
  double floor = double(n_bs - 1) / double(n_bs) * xi_c_db;
  for (double xp : xi_p_db) {
    if (xp < floor) {
      throw DomainError("thresholds: xi_p must be >= (K-1)/K * xi_c to keep labels disjoint");
    }
  }
}

void OstbcRates::validate(int n_bs) const {
  if (int(r_p.size()) != n_bs) throw DomainError("rates: r_p needs one entry per BS");
  for (double r : r_p) {
    if (!(r > 0) || r > 1) throw DomainError("rates: r_p entries must lie in (0, 1]");
  }
  if (!(r_c > 0) || r_c > 1) throw DomainError("rates: r_c must lie in (0, 1]");
  if (d_total < 1) throw DomainError("rates: d_total must be >= 1");
}

void PowerSplit::validate() const {
  for (double t : theta_c) {
    if (!(t >= 0) || !(t <= 1)) throw DomainError("power split: theta must lie in [0, 1]");
  }
}

void UserSets::validate(int n_bs, int n_ms) const {
  if (int(private_ms.size()) != n_bs) throw DomainError("user sets: one private slot per BS required");
  std::vector<int> seen(size_t(n_ms) + 1, 0);
  auto mark = [&](int id) {
    if (id < 1 || id > n_ms) throw DomainError("user sets: MS id out of range");
    if (seen[id]++) throw DomainError("user sets: MS assigned to more than one group");
  };
  for (const auto& p : private_ms) {
    if (p) mark(*p);
  }
  for (int id : common) mark(id);
  for (int id : unassigned) mark(id);
  for (int id = 1; id <= n_ms; ++id) {
    if (!seen[id]) throw DomainError("user sets: MS missing from all groups");
  }
}

int Scenario::ms_index(int ms_id) const {
  for (int i = 0; i < n_ms(); ++i) {
    if (mobiles[i].id == ms_id) return i;
  }
  throw DomainError("scenario: unknown MS id");
}

void Scenario::validate() const {
  topology.validate();
  gain_map.validate();
  if (gain_map.n_ms != n_ms() || gain_map.n_bs != n_bs()) {
    throw DomainError("scenario: gain map dimensions do not match topology/mobiles");
  }
  if (int(bs_power_w.size()) != n_bs()) throw DomainError("scenario: one transmit power per BS required");
  for (double p : bs_power_w) {
    if (!(p > 0) || !std::isfinite(p)) throw DomainError("scenario: transmit powers must be positive");
  }
  for (const auto& ms : mobiles) {
    if (!(ms.weight > 0)) throw DomainError("scenario: MS weights must be positive");
    if (ms.n_r < 1) throw DomainError("scenario: MS needs at least one receive antenna");
  }
  rates.validate(n_bs());
  thresholds.validate(n_bs());
}

}  // namespace netmimo
