#include "netmimo/scheduling.hpp"

#include <algorithm>

#include "netmimo/units.hpp"

namespace netmimo {

MsLabel label_ms(const std::vector<double>& gains_row_db, const Thresholds& thresholds) {
  const int n_bs = int(gains_row_db.size());
  if (n_bs == 0) return {};
  if (n_bs == 1) {
    // Single-cell limit: no competing BS, so the margin condition holds
    // vacuously and the MS is served privately.
    return {MsLabel::Kind::private_set, 0};
  }
  int best = 0;
  for (int k = 1; k < n_bs; ++k) {
    if (gains_row_db[k] > gains_row_db[best]) best = k;
  }
  bool is_private = true;
  for (int j = 0; j < n_bs; ++j) {
    if (j == best) continue;
    // Strict margin; a gap exactly at the threshold does not qualify.
    if (!(gains_row_db[best] - gains_row_db[j] > thresholds.xi_p_db[best])) {
      is_private = false;
      break;
    }
  }
  if (is_private) return {MsLabel::Kind::private_set, best};

  double mean = 0;
  for (double g : gains_row_db) mean += g;
  mean /= n_bs;
  for (double g : gains_row_db) {
    if (std::abs(g - mean) > thresholds.xi_c_db) return {MsLabel::Kind::neither, -1};
  }
  return {MsLabel::Kind::common_set, -1};
}

UserSets schedule_users(const GainMap& gain_map, const Thresholds& thresholds, Rng& rng) {
  thresholds.validate(gain_map.n_bs);
  UserSets sets;
  sets.private_ms.assign(size_t(gain_map.n_bs), std::nullopt);

  std::vector<std::vector<int>> private_candidates(size_t(gain_map.n_bs));
  std::vector<int> common_candidates;
  std::vector<int> rest;

  for (int m = 0; m < gain_map.n_ms; ++m) {
    std::vector<double> row_db(size_t(gain_map.n_bs));
    for (int k = 0; k < gain_map.n_bs; ++k) {
      row_db[k] = linear_to_db({gain_map.at(m, k)}).value;
    }
    MsLabel label = label_ms(row_db, thresholds);
    int ms_id = m + 1;
    switch (label.kind) {
      case MsLabel::Kind::private_set:
        private_candidates[label.bs].push_back(ms_id);
        break;
      case MsLabel::Kind::common_set:
        common_candidates.push_back(ms_id);
        break;
      case MsLabel::Kind::neither:
        rest.push_back(ms_id);
        break;
    }
  }

  for (int k = 0; k < gain_map.n_bs; ++k) {
    auto& cands = private_candidates[k];
    if (cands.empty()) continue;  // slot stays empty; that BS has no private MS
    int pick = cands.size() == 1 ? 0 : rng.uniform_int(int(cands.size()));
    sets.private_ms[k] = cands[pick];
    for (int i = 0; i < int(cands.size()); ++i) {
      if (i != pick) rest.push_back(cands[i]);
    }
  }

  if (int(common_candidates.size()) > thresholds.m_c_max) {
    // Partial Fisher-Yates: draw m_c_max ids without replacement.
    std::vector<int> pool = common_candidates;
    for (int i = 0; i < thresholds.m_c_max; ++i) {
      int j = i + rng.uniform_int(int(pool.size()) - i);
      std::swap(pool[i], pool[j]);
    }
    sets.common.assign(pool.begin(), pool.begin() + thresholds.m_c_max);
    std::sort(sets.common.begin(), sets.common.end());
    for (auto it = pool.begin() + thresholds.m_c_max; it != pool.end(); ++it) rest.push_back(*it);
  } else {
    sets.common = common_candidates;
  }

  std::sort(rest.begin(), rest.end());
  sets.unassigned = rest;
  sets.validate(gain_map.n_bs, gain_map.n_ms);
  return sets;
}

}  // namespace netmimo
