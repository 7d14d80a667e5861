#include "netmimo/throughput.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace netmimo {

double snr_term(int bs, int ms_id, const Scenario& scenario) {
  int m = scenario.ms_index(ms_id);
  if (bs < 0 || bs >= scenario.n_bs()) throw DomainError("snr_term: bad BS index");
  return scenario.bs_power_w[bs] * scenario.gain_map.at(m, bs) / scenario.gain_map.noise_power_w;
}

std::map<int, int> resolve_stream_shares(const OstbcRates& rates, const UserSets& sets) {
  std::map<int, int> shares;
  if (sets.common.empty()) return shares;
  if (rates.d_m.empty()) {
    int n = int(sets.common.size());
    int base = rates.d_total / n;
    int remainder = rates.d_total % n;
    for (int i = 0; i < n; ++i) {
      int d = base + (i < remainder ? 1 : 0);
      if (d < 1) throw DomainError("stream shares: more common MSs than streams");
      shares[sets.common[i]] = d;
    }
    return shares;
  }
  int total = 0;
  for (int id : sets.common) {
    auto it = rates.d_m.find(id);
    if (it == rates.d_m.end()) throw DomainError("stream shares: no d_m entry for common MS");
    shares[id] = it->second;
    total += it->second;
  }
  if (total != rates.d_total) throw DomainError("stream shares: d_m entries do not sum to d_total");
  return shares;
}

double common_min_weight_share(const Scenario& scenario, const UserSets& sets) {
  if (sets.common.empty()) throw DomainError("weight share: empty common set");
  auto shares = resolve_stream_shares(scenario.rates, sets);
  double cmw = std::numeric_limits<double>::infinity();
  for (int id : sets.common) {
    double w = scenario.mobiles[size_t(scenario.ms_index(id))].weight;
    cmw = std::min(cmw, w * double(shares.at(id)) / double(scenario.rates.d_total));
  }
  return cmw;
}

namespace {

// Interference-side private rate of BS k as seen from any receiver: zero when
// the BS serves no private MS (it then sends no private stream at all).
double private_rate_of_bs(int k, const Scenario& scenario, const UserSets& sets) {
  return sets.private_ms[size_t(k)].has_value() ? scenario.rates.r_p[size_t(k)] : 0.0;
}

}  // namespace

double common_rate_at_common_ms(int ms_id, const PowerSplit& theta, const Scenario& scenario,
                                const UserSets& sets) {
  double num = 0;
  double den = 1;
  for (int k = 0; k < scenario.n_bs(); ++k) {
    double s = snr_term(k, ms_id, scenario);
    num += s * theta.theta_c[size_t(k)] * scenario.rates.r_c;
    den += s * (1 - theta.theta_c[size_t(k)]) * private_rate_of_bs(k, scenario, sets);
  }
  return std::log2(1 + num / den);
}

double common_rate_at_private_ms(int ms_id, int bs, double theta_k_c, const Scenario& scenario) {
  double s = snr_term(bs, ms_id, scenario);
  double num = s * theta_k_c * scenario.rates.r_c;
  double den = 1 + s * (1 - theta_k_c) * scenario.rates.r_p[size_t(bs)];
  return std::log2(1 + num / den);
}

double private_throughput(int ms_id, int bs, double theta_k_c, const Scenario& scenario) {
  double s = snr_term(bs, ms_id, scenario);
  return std::log2(1 + s * (1 - theta_k_c) * scenario.rates.r_p[size_t(bs)]);
}

double PayoffParts::payoff() const {
  if (f1 && f2) return std::min(*f1, *f2);
  if (f1) return *f1;
  if (f2) return *f2;
  throw DomainError("payoff: BS has neither a private MS nor a common set");
}

PayoffParts payoff_components(int bs, const PowerSplit& theta, const Scenario& scenario,
                              const UserSets& sets) {
  if (bs < 0 || bs >= scenario.n_bs()) throw DomainError("payoff_components: bad BS index");
  theta.validate();
  if (int(theta.theta_c.size()) != scenario.n_bs())
    throw DomainError("payoff_components: theta length mismatch");

  PayoffParts parts;
  std::optional<int> own_private = sets.private_ms[size_t(bs)];

  if (!sets.common.empty()) {
    auto shares = resolve_stream_shares(scenario.rates, sets);
    double g1 = std::numeric_limits<double>::infinity();
    for (int id : sets.common) {
      double w = scenario.mobiles[size_t(scenario.ms_index(id))].weight;
      double share = double(shares.at(id)) / double(scenario.rates.d_total);
      g1 = std::min(g1, w * share * common_rate_at_common_ms(id, theta, scenario, sets));
    }
    parts.g1 = g1;
    if (own_private) {
      double cmw = common_min_weight_share(scenario, sets);
      parts.g2 = cmw * common_rate_at_private_ms(*own_private, bs, theta.theta_c[size_t(bs)],
                                                 scenario);
      parts.f1 = std::min(*parts.g1, *parts.g2);
    } else {
      parts.f1 = parts.g1;
    }
  }
  if (own_private) {
    double w = scenario.mobiles[size_t(scenario.ms_index(*own_private))].weight;
    parts.f2 = w * private_throughput(*own_private, bs, theta.theta_c[size_t(bs)], scenario);
  }
  if (!parts.f1 && !parts.f2)
    throw DomainError("payoff_components: BS has neither a private MS nor a common set");
  return parts;
}

ThroughputReport min_weighted_throughput(const PowerSplit& theta, const Scenario& scenario,
                                         const UserSets& sets) {
  theta.validate();
  if (int(theta.theta_c.size()) != scenario.n_bs())
    throw DomainError("min_weighted_throughput: theta length mismatch");
  sets.validate(scenario.n_bs(), scenario.n_ms());
  if (sets.common.empty() && sets.n_private() == 0)
    throw DomainError("min_weighted_throughput: no served MSs");

  ThroughputReport report;

  if (!sets.common.empty()) {
    // The shared stream is decoded at every common MS and, for cancellation,
    // at every private MS; the slowest of those links limits everyone.
    double cmin = std::numeric_limits<double>::infinity();
    for (int id : sets.common) {
      cmin = std::min(cmin, common_rate_at_common_ms(id, theta, scenario, sets));
    }
    for (int k = 0; k < scenario.n_bs(); ++k) {
      if (!sets.private_ms[size_t(k)]) continue;
      cmin = std::min(cmin, common_rate_at_private_ms(*sets.private_ms[size_t(k)], k,
                                                      theta.theta_c[size_t(k)], scenario));
    }
    auto shares = resolve_stream_shares(scenario.rates, sets);
    for (int id : sets.common) {
      report.per_ms[id] = double(shares.at(id)) / double(scenario.rates.d_total) * cmin;
    }
  }
  for (int k = 0; k < scenario.n_bs(); ++k) {
    if (!sets.private_ms[size_t(k)]) continue;
    int id = *sets.private_ms[size_t(k)];
    report.per_ms[id] = private_throughput(id, k, theta.theta_c[size_t(k)], scenario);
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

}  // namespace netmimo
