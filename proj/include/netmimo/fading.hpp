// Monte-Carlo check of the closed-form rate approximations. Channels are
// drawn per fading block, instantaneous SINRs are formed from the orthogonal
// code's trace identities (noise enters through its expectation only, and the
// block length cancels from every ratio), and E[log2(1+sinr)] is compared
// against the closed form log2(1 + E[num]/E[den]).
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "netmimo/model.hpp"
#include "netmimo/rng.hpp"

namespace netmimo {

// One BS-to-MS fading block: h1 carries the private stream (n_r x n_t_p),
// h2 the shared stream (n_r x n_t_c), entries i.i.d. complex Gaussian with
// unit variance, row-major.
struct ChannelDraw {
  int n_r = 0;
  int n_t_p = 0;
  int n_t_c = 0;
  std::vector<std::complex<double>> h1;
  std::vector<std::complex<double>> h2;
};

ChannelDraw draw_channel(Rng& rng, int n_r, int n_t_p, int n_t_c);

// SINR of the shared stream at BS k's private MS for one fading block.
double instantaneous_sinr_private(const ChannelDraw& draw, int bs, int ms_id, double theta_k_c,
                                  const Scenario& scenario);

// How the per-BS shared-stream signals combine at a common MS: coherently
// (all BSs send the same symbols, so the channel matrices add) or with the
// cross-BS products dropped. The two have the same expectation; coherent is
// the physical reading.
enum class CommonSumMode { coherent, incoherent };

// SINR of the shared stream at common MS j for one fading block per BS.
// BSs without a private MS contribute signal but no interference.
double instantaneous_sinr_common(const std::vector<ChannelDraw>& draws, int ms_id,
                                 const PowerSplit& theta, const Scenario& scenario,
                                 const UserSets& sets, CommonSumMode mode);

// Synthetic single-link sweep used to quantify the approximation error: one
// BS at a grid of SNRs, power split theta, both streams fading.
struct ApproxCheckConfig {
  int n_t_p = 2;
  int n_t_c = 2;
  int n_r = 2;
  std::vector<double> snr_grid_db;
  double theta = 0.5;
  double r_p = 1;
  double r_c = 1;
  int n_draws = 10000;
  std::uint64_t seed = 1;

  void validate() const;
};

struct ApproxCheckResult {
  double snr_db = 0;
  double mc_mean = 0;         // sample mean of log2(1 + sinr)
  double ci95_halfwidth = 0;
  double closed_form = 0;     // log2(1 + E[num]/E[den])
  double rel_error = 0;       // |mc_mean - closed_form| / max(mc_mean, eps)
  int n_draws = 0;
  // Sample and exact first moments of the SINR's numerator and denominator;
  // these must agree within MC error regardless of how good the log-level
  // approximation is.
  double num_mean = 0;
  double num_se = 0;
  double num_expected = 0;
  double den_mean = 0;
  double den_se = 0;
  double den_expected = 0;
};

// One result per SNR grid point; each point runs on its own derived rng
// substream, so the list is independent of evaluation order.
std::vector<ApproxCheckResult> approx_check(const ApproxCheckConfig& config);

}  // namespace netmimo
