// Experiment campaigns: drop random mobiles into a hexagonal layout, build
// gains, schedule, and score every configured scheme across sweeps of BS
// power and the two classification thresholds. All randomness is derived
// from the campaign seed per drop, so any worker count and any rerun give
// identical results.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netmimo/config.hpp"
#include "netmimo/game.hpp"
#include "netmimo/model.hpp"

namespace netmimo {

// Scheduling entry shared by the CLI subcommands and single-scenario
// campaigns. Tie-breaks draw from the scenario seed's substream 1; substream
// 0 already feeds the shadowing draw when the gain map is built.
UserSets schedule_for_scenario(const Scenario& scenario);

struct CampaignRow {
  std::string axis;      // "power", "xi_p" or "xi_c"
  double sweep_value = 0;
  std::string scheme;
  int drop = 0;
  bool feasible = false;
  double objective = 0;  // meaningful only when feasible
  int iterations = -1;   // proposed rows only
};

struct CampaignAggregate {
  std::string axis;
  double sweep_value = 0;
  std::string scheme;
  int n_feasible = 0;
  double mean = 0;
  double ci95_halfwidth = 0;
};

struct SweepPointInfo {
  std::string axis;
  double sweep_value = 0;
  int n_infeasible = 0;  // drops without a common MS or any private MS
};

struct CampaignResult {
  std::vector<CampaignRow> rows;  // ordered by axis, sweep value, drop, scheme
  std::vector<CampaignAggregate> aggregates;
  std::vector<SweepPointInfo> sweep_points;
  bool baseline3_skipped = false;  // the grid oracle handles at most 4 cells
  int n_unconverged = 0;
  // Feasible drops whose verified equilibrium still scored below the uniform
  // split by more than the solver tolerance; expected to stay at zero.
  int b2_dominance_violations = 0;
  // Solver trace of the first feasible drop at the first sweep point, for
  // the convergence figure.
  std::optional<SolverTrace> sample_trace;
  std::string sample_trace_note;
};

CampaignResult run_campaign(const CampaignConfig& config, int jobs = 1);

// Serialized forms consumed by the CLI. All of them format numbers through
// fmt_double and keep a fixed field order, so reruns are byte-identical.
std::string campaign_rows_csv(const CampaignResult& result);
std::string campaign_summary_json(const CampaignConfig& config, const CampaignResult& result);
// Per-axis aggregate table ("power", "xi_p" or "xi_c"), wide format with one
// mean and CI column pair per scheme.
std::string figure_csv(const CampaignResult& result, const std::string& axis);
std::string convergence_csv(const SolverTrace& trace);

}  // namespace netmimo
