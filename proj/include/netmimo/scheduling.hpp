#pragma once
// Long-term user classification: each MS labels itself from its dB gain row
// alone, then BSs pick one private MS each and the shared set is truncated to
// its cap. Everything runs on long-term statistics, so the assignment is
// stable until the geometry changes.

#include <vector>

#include "netmimo/model.hpp"
#include "netmimo/rng.hpp"

namespace netmimo {

struct MsLabel {
  enum class Kind { private_set, common_set, neither };
  Kind kind = Kind::neither;
  int bs = -1;  // serving BS index for private labels
};

// gains_row_db holds the MS's long-term gain to every BS, in dB.
// Private(k) requires a strict margin over every other BS; the shared label
// requires the whole row to sit within xi_c of its own mean. The margin
// relation enforced by Thresholds makes the two conditions exclusive, and the
// private label wins by construction.
MsLabel label_ms(const std::vector<double>& gains_row_db, const Thresholds& thresholds);

// Full assignment: label every MS, let each BS draw uniformly among its
// private candidates, draw the shared set (uniformly, without replacement)
// when more than m_c_max MSs qualify. Deterministic given the rng state.
UserSets schedule_users(const GainMap& gain_map, const Thresholds& thresholds, Rng& rng);

}  // namespace netmimo
