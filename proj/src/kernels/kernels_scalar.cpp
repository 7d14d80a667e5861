#include <cmath>

#include "kernels_impl.hpp"
#include "netmimo/throughput.hpp"

namespace netmimo::kernels {

ObjectiveTerms make_objective_terms(const Scenario& scenario, const UserSets& sets) {
  sets.validate(scenario.n_bs(), scenario.n_ms());
  ObjectiveTerms t;
  t.n_bs = scenario.n_bs();
  t.n_common = int(sets.common.size());
  t.r_c = scenario.rates.r_c;
  t.s_common.reserve(size_t(t.n_common) * size_t(t.n_bs));
  for (int id : sets.common) {
    for (int k = 0; k < t.n_bs; ++k) t.s_common.push_back(snr_term(k, id, scenario));
  }
  t.cmw = t.n_common > 0 ? common_min_weight_share(scenario, sets) : 0;
  t.r_p_bs.assign(size_t(t.n_bs), 0.0);
  for (int k = 0; k < t.n_bs; ++k) {
    if (!sets.private_ms[size_t(k)]) continue;
    int id = *sets.private_ms[size_t(k)];
    t.priv_bs.push_back(k);
    t.s_priv.push_back(snr_term(k, id, scenario));
    t.r_p.push_back(scenario.rates.r_p[size_t(k)]);
    t.w_priv.push_back(scenario.mobiles[size_t(scenario.ms_index(id))].weight);
    t.r_p_bs[size_t(k)] = scenario.rates.r_p[size_t(k)];
  }
  t.n_private = int(t.priv_bs.size());
  if (t.n_common == 0 && t.n_private == 0)
    throw DomainError("objective terms: no served MSs");
  return t;
}

namespace {

void scalar_log2_batch(const double* x, double* out, int n) {
  for (int i = 0; i < n; ++i) out[i] = std::log2(x[i]);
}

void scalar_objective_batch(const ObjectiveTerms& terms, const double* thetas, int n_points,
                            double* out) {
  detail::objective_batch_with(terms, thetas, n_points, out, scalar_log2_batch);
}

}  // namespace

const KernelOps& scalar_ops() {
  static const KernelOps ops{"scalar", scalar_log2_batch, scalar_objective_batch};
  return ops;
}

}  // namespace netmimo::kernels
