#include "netmimo/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netmimo/throughput.hpp"

namespace netmimo {

ThroughputReport evaluate_baseline1(const Scenario& scenario, const UserSets& sets, double tau) {
  if (!(tau > 0) || !(tau < 1)) throw DomainError("baseline1: tau must lie in (0, 1)");
  sets.validate(scenario.n_bs(), scenario.n_ms());
  if (sets.common.empty() && sets.n_private() == 0)
    throw DomainError("baseline1: no served MSs");

  ThroughputReport report;

  if (!sets.common.empty()) {
    // Common phase: every BS sends only the shared stream at full power, so
    // there is no interference and no cancellation requirement anywhere.
    double cmin = std::numeric_limits<double>::infinity();
    for (int id : sets.common) {
      double sum = 0;
      for (int k = 0; k < scenario.n_bs(); ++k) {
        sum += snr_term(k, id, scenario) * scenario.rates.r_c;
      }
      cmin = std::min(cmin, std::log2(1 + sum));
    }
    auto shares = resolve_stream_shares(scenario.rates, sets);
    for (int id : sets.common) {
      report.per_ms[id] =
          tau * double(shares.at(id)) / double(scenario.rates.d_total) * cmin;
    }
  }
  for (int k = 0; k < scenario.n_bs(); ++k) {
    if (!sets.private_ms[size_t(k)]) continue;
    int id = *sets.private_ms[size_t(k)];
    // Private phase: full power on the private stream, no shared stream.
    report.per_ms[id] = (1 - tau) * private_throughput(id, k, 0.0, scenario);
  }

  report.min_weighted = std::numeric_limits<double>::infinity();
  for (const auto& [id, rate] : report.per_ms) {
    double weighted = scenario.mobiles[size_t(scenario.ms_index(id))].weight * rate;
    if (weighted < report.min_weighted) {
      report.min_weighted = weighted;
      report.binding_ms = id;
    }
  }
  return report;
}

ThroughputReport evaluate_baseline2(const Scenario& scenario, const UserSets& sets) {
  PowerSplit half;
  half.theta_c.assign(size_t(scenario.n_bs()), 0.5);
  return min_weighted_throughput(half, scenario, sets);
}

}  // namespace netmimo
