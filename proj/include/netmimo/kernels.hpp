// Batched evaluation of the scheduling objective over many power-split
// vectors, with a scalar reference backend and an AVX2 backend chosen at
// runtime. The grid search in the centralized solver and the campaign runner
// are the main callers; everything else uses the plain throughput functions.
#pragma once

#include <string>
#include <vector>

#include "netmimo/model.hpp"

namespace netmimo::kernels {

// Flattened, scenario-independent view of everything the objective needs:
// per-link SNR terms, rate factors, and weights, laid out for tight loops.
// Build once per (scenario, sets) pair and reuse across theta vectors.
struct ObjectiveTerms {
  int n_bs = 0;
  int n_common = 0;             // rows of s_common
  std::vector<double> s_common; // row-major n_common x n_bs
  double cmw = 0;               // min over common MSs of weight * stream share
  double r_c = 0;
  int n_private = 0;
  std::vector<int> priv_bs;     // owning BS of each private MS
  std::vector<double> s_priv;   // SNR of each private MS at its own BS
  std::vector<double> r_p;      // private rate factor of that BS
  std::vector<double> w_priv;   // weight of that private MS
  std::vector<double> r_p_bs;   // per-BS interference rate, 0 for BSs without a private MS
};

ObjectiveTerms make_objective_terms(const Scenario& scenario, const UserSets& sets);

struct KernelOps {
  const char* name;
  // out[i] = log2(x[i]); x[i] must be a positive normal double.
  void (*log2_batch)(const double* x, double* out, int n);
  // out[p] = min weighted throughput at thetas[p*n_bs .. p*n_bs+n_bs).
  void (*objective_batch)(const ObjectiveTerms& terms, const double* thetas, int n_points,
                          double* out);
};

const KernelOps& scalar_ops();
#ifdef NETMIMO_HAVE_AVX2
const KernelOps& avx2_ops();
#endif

// Backend selection, in priority order: force_backend() if set, then the
// NETMIMO_KERNEL environment variable, then CPU detection. Valid names are
// "auto", "scalar" and "avx2"; requesting an unavailable backend throws.
const KernelOps& active_ops();
void force_backend(const std::string& name);
std::string active_backend_name();

}  // namespace netmimo::kernels
