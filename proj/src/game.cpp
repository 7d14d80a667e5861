#include "netmimo/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netmimo/kernels.hpp"
#include "netmimo/throughput.hpp"

namespace netmimo {

void SolverConfig::validate() const {
  if (!(tol_a > 0) || tol_a > 1e-2) throw DomainError("solver config: tol_a must be in (0, 1e-2]");
  if (!(root_tol > 0) || root_tol > 1e-2)
    throw DomainError("solver config: root_tol must be in (0, 1e-2]");
  if (max_iter < 1) throw DomainError("solver config: max_iter must be at least 1");
  if (!(grid_step > 0) || grid_step > 1)
    throw DomainError("solver config: grid_step must be in (0, 1]");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Common set with its weight shares resolved once, so the g1 sweep inside the
// bisection loop does no map lookups.
struct CommonView {
  std::vector<int> ids;
  std::vector<double> weight_share;  // w_j * D_j / d_total
};

CommonView make_common_view(const Scenario& scenario, const UserSets& sets) {
  CommonView cv;
  auto shares = resolve_stream_shares(scenario.rates, sets);
  for (int id : sets.common) {
    cv.ids.push_back(id);
    double w = scenario.mobiles[size_t(scenario.ms_index(id))].weight;
    cv.weight_share.push_back(w * double(shares.at(id)) / double(scenario.rates.d_total));
  }
  return cv;
}

// min over the common set of its weighted shared-stream rate, the quantity
// the outer bisection drives to its target.
double eval_g1(const PowerSplit& theta, const Scenario& scenario, const UserSets& sets,
               const CommonView& cv) {
  double g1 = kInf;
  for (size_t i = 0; i < cv.ids.size(); ++i) {
    g1 = std::min(g1,
                  cv.weight_share[i] * common_rate_at_common_ms(cv.ids[i], theta, scenario, sets));
  }
  return g1;
}

// Root of an increasing function with h(hi) >= 0: returns lo when h(lo) >= 0
// already, else halves the interval down to machine precision. The fixed
// iteration cap is far beyond what a [0,1] interval can use; the loop leaves
// early once the midpoint stops separating from the endpoints.
template <typename F>
double bisect_increasing(F&& h, double lo, double hi) {
  if (h(lo) >= 0) return lo;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (h(mid) < 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double solve_local_anchor(int bs, const Scenario& scenario, const UserSets& sets,
                          const SolverConfig& cfg) {
  cfg.validate();
  if (bs < 0 || bs >= scenario.n_bs()) throw DomainError("local anchor: bad BS index");
  if (!sets.private_ms[size_t(bs)]) return 1.0;
  if (sets.common.empty()) return 0.0;
  int m = *sets.private_ms[size_t(bs)];
  double w = scenario.mobiles[size_t(scenario.ms_index(m))].weight;
  double cmw = common_min_weight_share(scenario, sets);
  auto h = [&](double th) {
    return cmw * common_rate_at_private_ms(m, bs, th, scenario) -
           w * private_throughput(m, bs, th, scenario);
  };
  return bisect_increasing(h, 0.0, 1.0);
}

double solve_theta_for_target(int bs, double a_target, const Scenario& scenario,
                              const UserSets& sets) {
  if (bs < 0 || bs >= scenario.n_bs()) throw DomainError("theta for target: bad BS index");
  if (!sets.private_ms[size_t(bs)]) return 1.0;
  if (a_target < 0) throw DomainError("theta for target: negative target");
  int m = *sets.private_ms[size_t(bs)];
  double w = scenario.mobiles[size_t(scenario.ms_index(m))].weight;
  double s = snr_term(bs, m, scenario);
  return 1.0 - (std::exp2(a_target / w) - 1.0) / (s * scenario.rates.r_p[size_t(bs)]);
}

SolverTrace solve_ne(const Scenario& scenario, const UserSets& sets, const SolverConfig& cfg) {
  cfg.validate();
  sets.validate(scenario.n_bs(), scenario.n_ms());
  const int n_bs = scenario.n_bs();
  if (sets.common.empty() && sets.n_private() == 0)
    throw DomainError("solve_ne: no served MSs");

  SolverTrace trace;
  trace.anchors.eta_star.resize(size_t(n_bs));
  for (int k = 0; k < n_bs; ++k) {
    trace.anchors.eta_star[size_t(k)] = solve_local_anchor(k, scenario, sets, cfg);
  }

  // Degenerate games have a fixed answer and no iterations: with no common
  // set every BS serves only its private MS, with no private MS anywhere
  // every BS can give the shared stream everything.
  if (sets.common.empty()) {
    trace.ne.theta_c.assign(size_t(n_bs), 0.0);
    trace.converged = true;
    return trace;
  }
  if (sets.n_private() == 0) {
    trace.ne.theta_c.assign(size_t(n_bs), 1.0);
    trace.converged = true;
    return trace;
  }

  CommonView cv = make_common_view(scenario, sets);
  const std::vector<double>& eta = trace.anchors.eta_star;

  // theta(A): invert each active BS's private-rate curve at the target and
  // clamp from below at its anchor; BSs without a private MS stay at 1.
  auto theta_for = [&](double a_target) {
    PowerSplit theta;
    theta.theta_c.resize(size_t(n_bs));
    for (int k = 0; k < n_bs; ++k) {
      if (!sets.private_ms[size_t(k)]) {
        theta.theta_c[size_t(k)] = 1.0;
        continue;
      }
      theta.theta_c[size_t(k)] =
          std::max(solve_theta_for_target(k, a_target, scenario, sets), eta[size_t(k)]);
    }
    return theta;
  };

  PowerSplit theta_anchor;
  theta_anchor.theta_c = eta;  // anchors of BSs without a private MS are already 1
  double a_min = eval_g1(theta_anchor, scenario, sets, cv);
  PowerSplit theta = theta_for(a_min);
  double a_max = eval_g1(theta, scenario, sets, cv);
  if (a_max < a_min) throw DomainError("solve_ne: inconsistent scenario (empty initial bracket)");

  for (int i = 1; i <= cfg.max_iter; ++i) {
    double a = 0.5 * (a_min + a_max);
    theta = theta_for(a);
    double a_bar = eval_g1(theta, scenario, sets, cv);
    // Undershooting the target means theta(A) still leaves common-set head
    // room, so the crossing lies above A; overshooting means below.
    if (a < a_bar) {
      a_min = a;
    } else {
      a_max = a;
    }
    trace.iterations.push_back({i, a, theta.theta_c, a_bar, a_min, a_max});
    if (std::abs(a - a_bar) <= cfg.tol_a * (1 + std::abs(a_bar))) {
      trace.converged = true;
      break;
    }
  }
  trace.ne = theta;
  return trace;
}

double best_response_step(int bs, const PowerSplit& theta, const Scenario& scenario,
                          const UserSets& sets, const SolverConfig& cfg) {
  cfg.validate();
  theta.validate();
  sets.validate(scenario.n_bs(), scenario.n_ms());
  if (bs < 0 || bs >= scenario.n_bs()) throw DomainError("best response: bad BS index");
  if (!sets.private_ms[size_t(bs)]) return 1.0;
  if (sets.common.empty()) return 0.0;

  int m = *sets.private_ms[size_t(bs)];
  double w = scenario.mobiles[size_t(scenario.ms_index(m))].weight;
  auto f2 = [&](double th) { return w * private_throughput(m, bs, th, scenario); };

  CommonView cv = make_common_view(scenario, sets);
  double beta = 0.0;

  // Each common MS's weighted rate rises in our split while the private side
  // falls, so each pair crosses once; the payoff peaks at the largest of
  // those crossings (or at the cancel-rate crossing below).
  PowerSplit probe = theta;
  for (size_t j = 0; j < cv.ids.size(); ++j) {
    auto h = [&](double th) {
      probe.theta_c[size_t(bs)] = th;
      return cv.weight_share[j] * common_rate_at_common_ms(cv.ids[j], probe, scenario, sets) -
             f2(th);
    };
    beta = std::max(beta, bisect_increasing(h, 0.0, 1.0));
  }

  double cmw = common_min_weight_share(scenario, sets);
  auto h_cancel = [&](double th) {
    return cmw * common_rate_at_private_ms(m, bs, th, scenario) - f2(th);
  };
  beta = std::max(beta, bisect_increasing(h_cancel, 0.0, 1.0));
  return beta;
}

bool verify_ne(const PowerSplit& theta, int n_deviations, const Scenario& scenario,
               const UserSets& sets, const SolverConfig& cfg) {
  cfg.validate();
  theta.validate();
  sets.validate(scenario.n_bs(), scenario.n_ms());
  if (n_deviations < 2) throw DomainError("verify_ne: need at least 2 deviation points");

  for (int k = 0; k < scenario.n_bs(); ++k) {
    if (!sets.private_ms[size_t(k)] && sets.common.empty()) continue;  // BS serves nobody
    double base = payoff_components(k, theta, scenario, sets).payoff();
    PowerSplit probe = theta;
    for (int t = 0; t < n_deviations; ++t) {
      probe.theta_c[size_t(k)] = double(t) / double(n_deviations - 1);
      double deviated = payoff_components(k, probe, scenario, sets).payoff();
      if (deviated > base + cfg.root_tol) return false;
    }
  }
  return true;
}

GridScanResult grid_scan_objective(const Scenario& scenario, const UserSets& sets,
                                   double grid_step) {
  sets.validate(scenario.n_bs(), scenario.n_ms());
  if (!(grid_step > 0) || grid_step > 1)
    throw DomainError("grid scan: grid_step must be in (0, 1]");
  const int n_bs = scenario.n_bs();
  // The caller asked for an operation this tool refuses on size grounds, so
  // this surfaces as a usage error rather than a problem with the scenario.
  if (n_bs > 4)
    throw UsageError(
        "grid scan: exhaustive search supports at most 4 BSs; "
        "use per-BS coordinate descent for larger systems");

  const int n = std::max(1, int(std::lround(1.0 / grid_step)));
  std::vector<double> grid(size_t(n) + 1);
  for (int i = 0; i <= n; ++i) grid[size_t(i)] = double(i) / double(n);

  kernels::ObjectiveTerms terms = kernels::make_objective_terms(scenario, sets);
  const kernels::KernelOps& ops = kernels::active_ops();

  long long total = 1;
  for (int k = 0; k < n_bs; ++k) total *= n + 1;

  GridScanResult best;
  best.objective = -kInf;
  best.n_points = total;

  constexpr int kBatch = 4096;
  std::vector<double> thetas(size_t(kBatch) * size_t(n_bs));
  std::vector<double> out(size_t(kBatch), 0.0);
  std::vector<double> point(size_t(n_bs), 0.0);

  // Walk the grid in ascending lexicographic order (last coordinate fastest)
  // and displace the incumbent only on strict improvement, so equal maxima
  // resolve to the smallest splits. The odometer avoids per-point divisions;
  // only the final argmax is decoded from its linear position.
  std::vector<int> idx(size_t(n_bs), 0);
  long long best_pos = -1;
  for (long long pos = 0; pos < total; pos += kBatch) {
    int count = int(std::min<long long>(kBatch, total - pos));
    for (int p = 0; p < count; ++p) {
      double* dst = thetas.data() + size_t(p) * size_t(n_bs);
      for (int k = 0; k < n_bs; ++k) dst[k] = grid[size_t(idx[size_t(k)])];
      for (int k = n_bs - 1; k >= 0; --k) {
        if (++idx[size_t(k)] <= n) break;
        idx[size_t(k)] = 0;
      }
    }
    ops.objective_batch(terms, thetas.data(), count, out.data());
    for (int p = 0; p < count; ++p) {
      if (out[p] > best.objective) {
        best.objective = out[p];
        best_pos = pos + p;
      }
    }
  }
  long long linear = best_pos;
  for (int k = n_bs - 1; k >= 0; --k) {
    point[size_t(k)] = grid[size_t(linear % (n + 1))];
    linear /= n + 1;
  }
  best.argmax.theta_c = point;
  return best;
}

PowerSplit centralized_oracle(const Scenario& scenario, const UserSets& sets, double grid_step) {
  return grid_scan_objective(scenario, sets, grid_step).argmax;
}

}  // namespace netmimo
