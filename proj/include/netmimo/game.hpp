// The long-term power-allocation game between BSs: each BS k picks the share
// theta_k of its power spent on the shared stream, trading its private MS's
// rate (falling in theta_k) against the common set's worst weighted rate
// (rising in every theta). The solver drives all thetas to the unique point
// where each active BS's two sides meet, by bisecting on the common-set rate
// target A and inverting the private-rate equation per BS.
#pragma once

#include <vector>

#include "netmimo/model.hpp"

namespace netmimo {

struct SolverConfig {
  double tol_a = 1e-10;     // stop when |A - g1(theta(A))| <= tol_a * (1 + |g1|)
  double root_tol = 1e-9;   // acceptance band for scalar root residuals
  int max_iter = 100;       // bisection iterations before giving up
  double grid_step = 0.005; // resolution of the exhaustive grid oracle

  void validate() const;
};

// One outer bisection step. The bracket fields hold the interval after this
// step's update, so widths halve from row to row.
struct IterationRecord {
  int i = 0;
  double a_target = 0;
  std::vector<double> theta;
  double a_achieved = 0;
  double a_min = 0;
  double a_max = 0;
};

// Per-BS splits where the shared stream's decode rate at the BS's own private
// MS equals the private rate it gives up. BSs without a private MS carry 1.
struct LocalAnchor {
  std::vector<double> eta_star;
};

struct SolverTrace {
  LocalAnchor anchors;
  std::vector<IterationRecord> iterations;
  bool converged = false;
  PowerSplit ne;
};

// The split at which BS k's shared-stream decode rate at its private MS
// (times the common weight share) crosses its private rate. Returns 1 with no
// private MS, 0 with no common set.
double solve_local_anchor(int bs, const Scenario& scenario, const UserSets& sets,
                          const SolverConfig& cfg);

// Inverts BS k's private-rate curve: the split whose private weighted rate
// equals a_target. Closed form; may be negative, callers clamp against the
// anchor. Returns 1 with no private MS.
double solve_theta_for_target(int bs, double a_target, const Scenario& scenario,
                              const UserSets& sets);

// Bisection on the common-set weighted rate target. Degenerate inputs skip
// the loop: no common set fixes every split at 0, no private MS anywhere
// fixes every split at 1; otherwise BSs without a private MS are pinned at 1
// and the rest are driven to their fixed point.
SolverTrace solve_ne(const Scenario& scenario, const UserSets& sets, const SolverConfig& cfg);

// BS k's payoff-maximizing split against fixed rivals, via the root structure
// of the payoff's rising and falling sides. Provided for verification and
// demonstration; iterating it is not guaranteed to converge.
double best_response_step(int bs, const PowerSplit& theta, const Scenario& scenario,
                          const UserSets& sets, const SolverConfig& cfg);

// True iff no BS can gain more than root_tol by deviating to any of
// n_deviations evenly spaced splits in [0,1].
bool verify_ne(const PowerSplit& theta, int n_deviations, const Scenario& scenario,
               const UserSets& sets, const SolverConfig& cfg);

struct GridScanResult {
  PowerSplit argmax;
  double objective = 0;
  long long n_points = 0;
};

// Exhaustive argmax of the min weighted throughput over the split grid
// {0, 1/n, ..., 1}^K with n = round(1/grid_step). Enumeration is
// lexicographic and only strictly better points displace the incumbent, so
// ties resolve toward smaller splits. Guarded to K <= 4.
GridScanResult grid_scan_objective(const Scenario& scenario, const UserSets& sets,
                                   double grid_step);

PowerSplit centralized_oracle(const Scenario& scenario, const UserSets& sets, double grid_step);

}  // namespace netmimo
