// Shared plumbing for the objective backends. Both backends lower every grid
// point to a flat list of log2 arguments, run their own log2_batch over it,
// and recombine; only the log2 differs between them.
//
// Per point the argument list is, in order:
//   for each common MS j:   den_j, den_j + num_j
//   for each private MS i:  1 + xp_i, 1 + xp_i + xc_i
// where xp = s*(1-theta)*r_p and xc = s*theta*r_c. Every argument is >= 1, so
// log2(1 + num/den) = log2(den + num) - log2(den) stays well conditioned, and
// the private MS's own rate log2(1 + xp) reuses the first of its pair.
#pragma once

#include <algorithm>
#include <limits>

#include "netmimo/kernels.hpp"

namespace netmimo::kernels::detail {

inline int args_per_point(const ObjectiveTerms& t) { return 2 * (t.n_common + t.n_private); }

inline void fill_args(const ObjectiveTerms& t, const double* theta, double* args) {
  int pos = 0;
  for (int j = 0; j < t.n_common; ++j) {
    const double* s_row = t.s_common.data() + size_t(j) * size_t(t.n_bs);
    double num = 0;
    double den = 1;
    for (int k = 0; k < t.n_bs; ++k) {
      num += s_row[k] * theta[k] * t.r_c;
      den += s_row[k] * (1 - theta[k]) * t.r_p_bs[size_t(k)];
    }
    args[pos++] = den;
    args[pos++] = den + num;
  }
  for (int i = 0; i < t.n_private; ++i) {
    double th = theta[t.priv_bs[size_t(i)]];
    double xp = t.s_priv[size_t(i)] * (1 - th) * t.r_p[size_t(i)];
    double xc = t.s_priv[size_t(i)] * th * t.r_c;
    args[pos++] = 1 + xp;
    args[pos++] = 1 + xp + xc;
  }
}

inline double combine(const ObjectiveTerms& t, const double* logs) {
  double objective = std::numeric_limits<double>::infinity();
  if (t.n_common > 0) {
    double cmin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < t.n_common; ++j) {
      cmin = std::min(cmin, logs[2 * j + 1] - logs[2 * j]);
    }
    const double* priv_logs = logs + 2 * t.n_common;
    for (int i = 0; i < t.n_private; ++i) {
      cmin = std::min(cmin, priv_logs[2 * i + 1] - priv_logs[2 * i]);
    }
    objective = t.cmw * cmin;
  }
  const double* priv_logs = logs + 2 * t.n_common;
  for (int i = 0; i < t.n_private; ++i) {
    objective = std::min(objective, t.w_priv[size_t(i)] * priv_logs[2 * i]);
  }
  return objective;
}

// Block-buffered driver shared by the backends: gather a block of points'
// arguments, take logs with the supplied batch function, recombine.
template <typename Log2Batch>
void objective_batch_with(const ObjectiveTerms& t, const double* thetas, int n_points, double* out,
                          Log2Batch&& log2_batch) {
  const int per_point = args_per_point(t);
  if (per_point == 0) {
    for (int p = 0; p < n_points; ++p) out[p] = 0;
    return;
  }
  constexpr int kBlock = 64;
  std::vector<double> args(size_t(kBlock) * size_t(per_point));
  std::vector<double> logs(args.size());
  for (int start = 0; start < n_points; start += kBlock) {
    int count = std::min(kBlock, n_points - start);
    for (int p = 0; p < count; ++p) {
      fill_args(t, thetas + size_t(start + p) * size_t(t.n_bs),
                args.data() + size_t(p) * size_t(per_point));
    }
    log2_batch(args.data(), logs.data(), count * per_point);
    for (int p = 0; p < count; ++p) {
      out[start + p] = combine(t, logs.data() + size_t(p) * size_t(per_point));
    }
  }
}

}  // namespace netmimo::kernels::detail
