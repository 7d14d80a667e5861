// Long-term throughput approximations for the split-power overlay and the
// payoff decomposition used by the power-allocation game.
//
// Conventions shared by every function here:
//   - all rates are in bits (base-2 logs)
//   - theta_c[k] is the fraction of BS k's power on the shared stream
//   - a BS whose private slot is empty radiates no private stream, so it
//     contributes no interference term to any denominator
#pragma once

#include <map>
#include <optional>

#include "netmimo/model.hpp"

namespace netmimo {

// P_k * L_mk / noise, the dimensionless per-link SNR building block.
double snr_term(int bs, int ms_id, const Scenario& scenario);

// Per-MS stream counts for the shared signal. Explicit d_m entries must cover
// the common set exactly and sum to d_total; with no entries the streams are
// split evenly, remainder going to the lowest MS ids.
std::map<int, int> resolve_stream_shares(const OstbcRates& rates, const UserSets& sets);

// min over the common set of w_j * D_j / d_total, the weight share that
// multiplies every SIC-side rate. Requires a non-empty common set.
double common_min_weight_share(const Scenario& scenario, const UserSets& sets);

// Rate of the shared stream at common MS j: all BSs add signal, BSs with a
// private MS add interference.
double common_rate_at_common_ms(int ms_id, const PowerSplit& theta, const Scenario& scenario,
                                const UserSets& sets);

// Rate at which BS k's private MS can decode the shared stream before
// cancelling it. Only BS k's own signal reaches this MS.
double common_rate_at_private_ms(int ms_id, int bs, double theta_k_c, const Scenario& scenario);

// Private-stream rate after the shared stream has been cancelled.
double private_throughput(int ms_id, int bs, double theta_k_c, const Scenario& scenario);

// The two sides of BS k's payoff. Fields are absent when the corresponding
// user set is empty: no common set leaves only f2, no private MS at k leaves
// only g1 (and the best response there is theta = 1).
struct PayoffParts {
  std::optional<double> g1;
  std::optional<double> g2;
  std::optional<double> f1;
  std::optional<double> f2;

  // min over the defined sides; throws DomainError when neither exists.
  double payoff() const;
};

PayoffParts payoff_components(int bs, const PowerSplit& theta, const Scenario& scenario,
                              const UserSets& sets);

// The global objective: min over every served MS of w_m times its long-term
// throughput, where a common MS's throughput is (D_m/d_total) times the worst
// decoding rate of the shared stream across the whole system.
ThroughputReport min_weighted_throughput(const PowerSplit& theta, const Scenario& scenario,
                                         const UserSets& sets);

}  // namespace netmimo
