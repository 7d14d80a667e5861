// Single command-line entry point over the library: scheduling, the NE
// solver, the grid oracle, best-response stepping, the fading check, and the
// campaign runner. Everything here is plumbing; the numerics live in the
// library.
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "netmimo/baselines.hpp"
#include "netmimo/campaign.hpp"
#include "netmimo/config.hpp"
#include "netmimo/fading.hpp"
#include "netmimo/game.hpp"
#include "netmimo/io.hpp"
#include "netmimo/kernels.hpp"
#include "netmimo/model.hpp"
#include "netmimo/scheduling.hpp"
#include "netmimo/throughput.hpp"

namespace {

using netmimo::fmt_double;
using ordered_json = nlohmann::ordered_json;

// Every subcommand reports the seed it actually ran with on stderr, keeping
// stdout clean for data.
void print_seed(std::uint64_t seed) { std::cerr << "seed: " << seed << "\n"; }

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    netmimo::atomic_write_file(out_path, content);
  }
}

ordered_json theta_json(const std::vector<double>& theta) {
  ordered_json arr = ordered_json::array();
  for (double v : theta) arr.push_back(v);
  return arr;
}

struct ScenarioArgs {
  std::string path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
};

void add_scenario_options(CLI::App* cmd, ScenarioArgs& args) {
  cmd->add_option("--scenario", args.path, "scenario config file")->required();
  cmd->add_option("--set", args.overrides, "override a scenario key, key=value (repeatable)");
  cmd->add_option("--seed", args.seed, "override the scenario rng seed");
}

struct LoadedScenario {
  netmimo::Scenario scenario;
  netmimo::UserSets sets;
};

LoadedScenario load_and_schedule(const ScenarioArgs& args) {
  netmimo::ScenarioSpec spec = netmimo::load_scenario(args.path, args.overrides, args.seed);
  print_seed(spec.scenario.rng_seed);
  netmimo::UserSets sets = netmimo::schedule_for_scenario(spec.scenario);
  return {std::move(spec.scenario), std::move(sets)};
}

// Largest gap between the two payoff sides across BSs that have both; the
// fixed-point residual reported next to every solve.
double max_fixed_point_residual(const netmimo::PowerSplit& theta,
                                const netmimo::Scenario& scenario,
                                const netmimo::UserSets& sets) {
  double worst = 0;
  for (int k = 0; k < scenario.n_bs(); ++k) {
    if (!sets.private_ms[size_t(k)] || sets.common.empty()) continue;
    netmimo::PayoffParts parts = netmimo::payoff_components(k, theta, scenario, sets);
    worst = std::max(worst, std::abs(*parts.f1 - *parts.f2));
  }
  return worst;
}

int run_schedule(const ScenarioArgs& args, const std::string& format,
                 const std::string& out_path) {
  if (format != "csv" && format != "json") {
    throw netmimo::UsageError("--format must be csv or json");
  }
  LoadedScenario loaded = load_and_schedule(args);
  const netmimo::Scenario& sc = loaded.scenario;
  const netmimo::UserSets& sets = loaded.sets;

  auto label_of = [&](int ms_id) -> std::pair<std::string, int> {
    for (int k = 0; k < sc.n_bs(); ++k) {
      if (sets.private_ms[size_t(k)] && *sets.private_ms[size_t(k)] == ms_id) {
        return {"private", k + 1};
      }
    }
    for (int id : sets.common) {
      if (id == ms_id) return {"common", 0};
    }
    return {"unassigned", 0};
  };

  if (format == "json") {
    ordered_json j;
    j["seed"] = sc.rng_seed;
    j["assignments"] = ordered_json::array();
    for (const netmimo::MsState& ms : sc.mobiles) {
      auto [label, bs] = label_of(ms.id);
      ordered_json row;
      row["ms_id"] = ms.id;
      row["label"] = label;
      if (bs > 0) row["bs"] = bs;
      j["assignments"].push_back(row);
    }
    j["n_private"] = sets.n_private();
    j["common"] = sets.common;
    j["unassigned"] = sets.unassigned;
    emit(j.dump(2) + "\n", out_path);
  } else {
    std::string out = netmimo::csv_row({"ms_id", "label", "bs"});
    for (const netmimo::MsState& ms : sc.mobiles) {
      auto [label, bs] = label_of(ms.id);
      out += netmimo::csv_row(
          {std::to_string(ms.id), label, bs > 0 ? std::to_string(bs) : ""});
    }
    emit(out, out_path);
  }
  return 0;
}

int run_solve(const ScenarioArgs& args, const std::string& out_path, bool with_trace) {
  LoadedScenario loaded = load_and_schedule(args);
  netmimo::SolverConfig cfg;
  netmimo::SolverTrace trace = netmimo::solve_ne(loaded.scenario, loaded.sets, cfg);
  netmimo::ThroughputReport report =
      netmimo::min_weighted_throughput(trace.ne, loaded.scenario, loaded.sets);

  ordered_json j;
  j["seed"] = loaded.scenario.rng_seed;
  j["converged"] = trace.converged;
  j["iterations"] = trace.iterations.size();
  j["theta_star"] = theta_json(trace.ne.theta_c);
  j["eta_star"] = theta_json(trace.anchors.eta_star);
  j["objective"] = report.min_weighted;
  j["binding_ms"] = report.binding_ms;
  j["residual_max"] = max_fixed_point_residual(trace.ne, loaded.scenario, loaded.sets);
  if (with_trace) {
    j["trace"] = ordered_json::array();
    for (const netmimo::IterationRecord& it : trace.iterations) {
      ordered_json row;
      row["i"] = it.i;
      row["a_target"] = it.a_target;
      row["a_achieved"] = it.a_achieved;
      row["a_min"] = it.a_min;
      row["a_max"] = it.a_max;
      row["theta"] = theta_json(it.theta);
      j["trace"].push_back(row);
    }
  }
  emit(j.dump(2) + "\n", out_path);
  return trace.converged ? 0 : 1;
}

int run_centralized(const ScenarioArgs& args, double grid_step, const std::string& out_path) {
  LoadedScenario loaded = load_and_schedule(args);
  netmimo::GridScanResult scan =
      netmimo::grid_scan_objective(loaded.scenario, loaded.sets, grid_step);

  ordered_json j;
  j["seed"] = loaded.scenario.rng_seed;
  j["grid_step"] = grid_step;
  j["n_points"] = scan.n_points;
  j["theta_star"] = theta_json(scan.argmax.theta_c);
  j["objective"] = scan.objective;
  emit(j.dump(2) + "\n", out_path);
  return 0;
}

int run_best_response(const ScenarioArgs& args, std::vector<double> theta_start, int steps,
                      const std::string& out_path) {
  LoadedScenario loaded = load_and_schedule(args);
  const int n_bs = loaded.scenario.n_bs();
  if (theta_start.empty()) theta_start.assign(size_t(n_bs), 0.5);
  if (int(theta_start.size()) != n_bs) {
    throw netmimo::UsageError("--theta needs one value per BS");
  }

  netmimo::SolverConfig cfg;
  netmimo::PowerSplit theta{theta_start};
  theta.validate();

  std::vector<std::vector<double>> trajectory{theta.theta_c};
  bool fixed_point = steps == 0;
  bool cycle = false;
  int steps_run = 0;
  for (int t = 0; t < steps; ++t) {
    netmimo::PowerSplit next;
    next.theta_c.resize(size_t(n_bs));
    for (int k = 0; k < n_bs; ++k) {
      next.theta_c[size_t(k)] =
          netmimo::best_response_step(k, theta, loaded.scenario, loaded.sets, cfg);
    }
    ++steps_run;
    double move = 0;
    for (int k = 0; k < n_bs; ++k) {
      move = std::max(move, std::abs(next.theta_c[size_t(k)] - theta.theta_c[size_t(k)]));
    }
    theta = next;
    if (move <= 1e-9) {
      fixed_point = true;
      trajectory.push_back(theta.theta_c);
      break;
    }
    for (const auto& seen : trajectory) {
      double gap = 0;
      for (int k = 0; k < n_bs; ++k) gap = std::max(gap, std::abs(seen[size_t(k)] - theta.theta_c[size_t(k)]));
      if (gap <= 1e-9) {
        cycle = true;
        break;
      }
    }
    trajectory.push_back(theta.theta_c);
    if (cycle) break;
  }

  netmimo::ThroughputReport report =
      netmimo::min_weighted_throughput(theta, loaded.scenario, loaded.sets);
  ordered_json j;
  j["seed"] = loaded.scenario.rng_seed;
  j["steps_requested"] = steps;
  j["steps_run"] = steps_run;
  j["fixed_point"] = fixed_point;
  j["cycle_detected"] = cycle;
  j["trajectory"] = ordered_json::array();
  for (const auto& point : trajectory) j["trajectory"].push_back(theta_json(point));
  j["final_theta"] = theta_json(theta.theta_c);
  j["final_objective"] = report.min_weighted;
  emit(j.dump(2) + "\n", out_path);
  return 0;
}

int run_convergence(const ScenarioArgs& args, double tol_a, const std::string& out_path) {
  LoadedScenario loaded = load_and_schedule(args);
  netmimo::SolverConfig cfg;
  cfg.tol_a = tol_a;
  netmimo::SolverTrace trace = netmimo::solve_ne(loaded.scenario, loaded.sets, cfg);
  emit(netmimo::convergence_csv(trace), out_path);
  return trace.converged ? 0 : 1;
}

int run_approx_check(const netmimo::ApproxCheckConfig& cfg, const std::string& out_path) {
  print_seed(cfg.seed);
  std::vector<netmimo::ApproxCheckResult> results = netmimo::approx_check(cfg);
  std::string out = netmimo::csv_row({"snr_db", "mc_mean", "ci95", "closed_form", "rel_error",
                                      "num_mean", "num_se", "num_expected", "den_mean", "den_se",
                                      "den_expected", "n_draws"});
  for (const netmimo::ApproxCheckResult& r : results) {
    out += netmimo::csv_row({fmt_double(r.snr_db), fmt_double(r.mc_mean),
                             fmt_double(r.ci95_halfwidth), fmt_double(r.closed_form),
                             fmt_double(r.rel_error), fmt_double(r.num_mean),
                             fmt_double(r.num_se), fmt_double(r.num_expected),
                             fmt_double(r.den_mean), fmt_double(r.den_se),
                             fmt_double(r.den_expected), std::to_string(r.n_draws)});
  }
  emit(out, out_path);
  return 0;
}

int run_campaign_cmd(const std::string& config_path, const std::vector<std::string>& overrides,
                     std::optional<std::uint64_t> seed, const std::string& out_dir, int jobs,
                     bool emit_plots) {
  netmimo::CampaignConfig cfg = netmimo::load_campaign_config(config_path, overrides, seed);
  print_seed(cfg.seed);
  netmimo::CampaignResult result = netmimo::run_campaign(cfg, jobs);

  namespace fs = std::filesystem;
  fs::path dir(out_dir);
  netmimo::atomic_write_file((dir / "rows.csv").string(), netmimo::campaign_rows_csv(result));
  netmimo::atomic_write_file((dir / "summary.json").string(),
                             netmimo::campaign_summary_json(cfg, result));
  if (emit_plots) {
    struct FigureFile {
      const char* axis;
      const char* name;
    };
    for (FigureFile fig : {FigureFile{"power", "fig_power.csv"}, FigureFile{"xi_p", "fig_xi_p.csv"},
                           FigureFile{"xi_c", "fig_xi_c.csv"}}) {
      bool swept = false;
      for (const netmimo::CampaignAggregate& agg : result.aggregates) {
        if (agg.axis == fig.axis) {
          swept = true;
          break;
        }
      }
      if (swept) {
        netmimo::atomic_write_file((dir / fig.name).string(),
                                   netmimo::figure_csv(result, fig.axis));
      } else {
        std::cerr << "note: axis " << fig.axis << " not swept, " << fig.name << " not written\n";
      }
    }
    if (result.sample_trace) {
      netmimo::atomic_write_file((dir / "fig_convergence.csv").string(),
                                 netmimo::convergence_csv(*result.sample_trace));
    } else {
      std::cerr << "note: no feasible drop produced a solver trace, "
                   "fig_convergence.csv not written\n";
    }
  }
  if (result.baseline3_skipped) {
    std::cerr << "note: baseline3 skipped, grid oracle handles at most 4 cells\n";
  }
  if (result.n_unconverged > 0) {
    std::cerr << "note: " << result.n_unconverged << " drops did not converge\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"network MIMO split-power overlay: scheduling, NE solver, baselines, campaigns"};
  app.require_subcommand(1);
  std::string kernel = "auto";
  app.add_option("--kernel", kernel, "compute backend: auto, scalar or avx2")
      ->capture_default_str();

  ScenarioArgs sched_args;
  std::string sched_format = "csv";
  std::string sched_out;
  CLI::App* sched = app.add_subcommand("schedule", "classify MSs into private/common sets");
  add_scenario_options(sched, sched_args);
  sched->add_option("--format", sched_format, "csv or json")->capture_default_str();
  sched->add_option("--out", sched_out, "output file (default stdout)");

  ScenarioArgs solve_args;
  std::string solve_out;
  bool solve_trace = false;
  CLI::App* solve = app.add_subcommand("solve", "find the power-split equilibrium");
  add_scenario_options(solve, solve_args);
  solve->add_option("--out", solve_out, "output file (default stdout)");
  solve->add_flag("--trace", solve_trace, "embed per-iteration solver records");

  ScenarioArgs cent_args;
  std::string cent_out;
  double cent_step = 0.005;
  CLI::App* cent = app.add_subcommand("centralized", "exhaustive grid search of the objective");
  add_scenario_options(cent, cent_args);
  cent->add_option("--grid-step", cent_step, "grid resolution")->capture_default_str();
  cent->add_option("--out", cent_out, "output file (default stdout)");

  ScenarioArgs br_args;
  std::string br_out;
  std::vector<double> br_theta;
  int br_steps = 20;
  CLI::App* br = app.add_subcommand("best-response", "iterate per-BS best responses");
  add_scenario_options(br, br_args);
  br->add_option("--theta", br_theta, "starting split, comma separated (default 0.5 per BS)")
      ->delimiter(',');
  br->add_option("--steps", br_steps, "number of simultaneous update rounds")
      ->capture_default_str();
  br->add_option("--out", br_out, "output file (default stdout)");

  ScenarioArgs conv_args;
  std::string conv_out;
  double conv_tol = 1e-10;
  CLI::App* conv = app.add_subcommand("convergence", "per-iteration solver report");
  add_scenario_options(conv, conv_args);
  conv->add_option("--tol-a", conv_tol, "bisection stop tolerance")->capture_default_str();
  conv->add_option("--out", conv_out, "output file (default stdout)");

  netmimo::ApproxCheckConfig ac;
  double ac_snr_min = 0, ac_snr_max = 20, ac_snr_step = 2;
  std::string ac_out;
  CLI::App* acheck = app.add_subcommand("approx-check", "Monte-Carlo check of the rate formulas");
  acheck->add_option("--n-t-p", ac.n_t_p, "private-stream transmit antennas")->capture_default_str();
  acheck->add_option("--n-t-c", ac.n_t_c, "shared-stream transmit antennas")->capture_default_str();
  acheck->add_option("--n-r", ac.n_r, "receive antennas")->capture_default_str();
  acheck->add_option("--snr-min", ac_snr_min, "first SNR point, dB")->capture_default_str();
  acheck->add_option("--snr-max", ac_snr_max, "last SNR point, dB")->capture_default_str();
  acheck->add_option("--snr-step", ac_snr_step, "SNR spacing, dB")->capture_default_str();
  acheck->add_option("--theta", ac.theta, "power split under test")->capture_default_str();
  acheck->add_option("--r-p", ac.r_p, "private encoding rate")->capture_default_str();
  acheck->add_option("--r-c", ac.r_c, "shared encoding rate")->capture_default_str();
  acheck->add_option("--draws", ac.n_draws, "fading draws per SNR point")->capture_default_str();
  acheck->add_option("--seed", ac.seed, "rng seed")->capture_default_str();
  acheck->add_option("--out", ac_out, "output file (default stdout)");

  std::string camp_config;
  std::vector<std::string> camp_overrides;
  std::optional<std::uint64_t> camp_seed;
  std::string camp_out = "campaign_out";
  int camp_jobs = int(std::thread::hardware_concurrency());
  bool camp_plots = false;
  CLI::App* camp = app.add_subcommand("campaign", "run drops and score every scheme");
  camp->add_option("--config", camp_config, "campaign config file")->required();
  camp->add_option("--set", camp_overrides, "override a campaign key, key=value (repeatable)");
  camp->add_option("--seed", camp_seed, "override the campaign seed");
  camp->add_option("--out", camp_out, "output directory")->capture_default_str();
  camp->add_option("--jobs", camp_jobs, "worker threads (default: available cores)");
  camp->add_flag("--emit-plots-data", camp_plots, "write per-figure CSV files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error:usage: " << e.what() << "\n";
    return 2;
  }

  try {
    netmimo::kernels::force_backend(kernel == "auto" ? "" : kernel);
    if (*sched) return run_schedule(sched_args, sched_format, sched_out);
    if (*solve) return run_solve(solve_args, solve_out, solve_trace);
    if (*cent) return run_centralized(cent_args, cent_step, cent_out);
    if (*br) return run_best_response(br_args, br_theta, br_steps, br_out);
    if (*conv) return run_convergence(conv_args, conv_tol, conv_out);
    if (*acheck) {
      if (!(ac_snr_step > 0)) throw netmimo::UsageError("--snr-step must be positive");
      ac.snr_grid_db.clear();
      for (double snr = ac_snr_min; snr <= ac_snr_max + 1e-9; snr += ac_snr_step) {
        ac.snr_grid_db.push_back(snr);
      }
      return run_approx_check(ac, ac_out);
    }
    if (*camp) {
      if (camp_jobs < 1) camp_jobs = 1;
      return run_campaign_cmd(camp_config, camp_overrides, camp_seed, camp_out, camp_jobs,
                              camp_plots);
    }
    std::cerr << "error:usage: no subcommand given\n";
    return 2;
  } catch (const netmimo::UsageError& e) {
    std::cerr << "error:usage: " << e.what() << "\n";
    return 2;
  } catch (const netmimo::DomainError& e) {
    std::cerr << "error:domain: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error:internal: " << e.what() << "\n";
    return 1;
  }
}
