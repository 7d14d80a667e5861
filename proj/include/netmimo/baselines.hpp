// Reference schemes the overlay is measured against: time-sharing between
// the private and common phases, and the fixed uniform split.
#pragma once

#include "netmimo/model.hpp"

namespace netmimo {

// Orthogonal division: a tau fraction of time serves the common set with
// full power (no private streams, no cancellation constraint), the rest
// serves the private MSs with full power and no shared stream.
ThroughputReport evaluate_baseline1(const Scenario& scenario, const UserSets& sets, double tau);

// Uniform split: every BS holds theta at 0.5; plain overlay evaluation.
ThroughputReport evaluate_baseline2(const Scenario& scenario, const UserSets& sets);

}  // namespace netmimo
