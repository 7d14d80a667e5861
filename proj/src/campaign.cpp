#include "netmimo/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "json.hpp"
#include "netmimo/baselines.hpp"
#include "netmimo/geometry.hpp"
#include "netmimo/io.hpp"
#include "netmimo/scheduling.hpp"
#include "netmimo/throughput.hpp"
#include "netmimo/units.hpp"

namespace netmimo {

UserSets schedule_for_scenario(const Scenario& scenario) {
  Rng rng(derive_seed(scenario.rng_seed, 1));
  return schedule_users(scenario.gain_map, scenario.thresholds, rng);
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct AxisSpec {
  std::string name;
  int index = 0;  // stable id feeding the per-axis tie-break substream
  std::vector<double> values;
};

std::vector<AxisSpec> list_axes(const CampaignConfig& cfg) {
  std::vector<AxisSpec> axes;
  if (!cfg.power_sweep_dbm.empty()) axes.push_back({"power", 0, cfg.power_sweep_dbm});
  if (!cfg.xi_p_sweep_db.empty()) axes.push_back({"xi_p", 1, cfg.xi_p_sweep_db});
  if (!cfg.xi_c_sweep_db.empty()) axes.push_back({"xi_c", 2, cfg.xi_c_sweep_db});
  return axes;
}

struct CellResult {
  bool feasible = false;
  bool unconverged = false;
  bool b2_violation = false;
  std::vector<double> objective;  // parallel to the configured scheme list
  int iterations = -1;
  std::optional<SolverTrace> trace;
};

// One drop's cells, indexed [axis][value].
using DropOutput = std::vector<std::vector<CellResult>>;

CellResult evaluate_cell(const Scenario& scenario, const UserSets& sets,
                         const CampaignConfig& cfg, bool capture_trace) {
  CellResult cell;
  cell.objective.assign(cfg.schemes.size(), kNan);
  // The overlay needs someone on each side: without a common MS or without
  // any private MS the comparison degenerates, so the drop is sat out by
  // every scheme to keep the aggregates comparable.
  if (sets.common.empty() || sets.n_private() == 0) return cell;

  SolverConfig scfg;
  std::optional<SolverTrace> trace;
  std::optional<double> proposed_obj;
  std::optional<double> b2_obj;

  for (size_t s = 0; s < cfg.schemes.size(); ++s) {
    const std::string& scheme = cfg.schemes[s];
    if (scheme == "proposed") {
      trace = solve_ne(scenario, sets, scfg);
      if (!trace->converged) {
        cell.unconverged = true;
        return cell;
      }
      double obj = min_weighted_throughput(trace->ne, scenario, sets).min_weighted;
      cell.objective[s] = obj;
      cell.iterations = int(trace->iterations.size());
      proposed_obj = obj;
    } else if (scheme == "baseline1") {
      cell.objective[s] = evaluate_baseline1(scenario, sets, cfg.tau).min_weighted;
    } else if (scheme == "baseline2") {
      double obj = evaluate_baseline2(scenario, sets).min_weighted;
      cell.objective[s] = obj;
      b2_obj = obj;
    } else if (scheme == "baseline3" && scenario.n_bs() <= 4) {
      cell.objective[s] = grid_scan_objective(scenario, sets, cfg.grid_step).objective;
    }
  }
  cell.feasible = true;

  if (proposed_obj && b2_obj && *proposed_obj < *b2_obj - 1e-9 && trace) {
    // The equilibrium should never trail the uniform split; double-check the
    // equilibrium before counting this as a real violation.
    SolverConfig vcfg;
    if (verify_ne(trace->ne, 200, scenario, sets, vcfg)) cell.b2_violation = true;
  }
  if (capture_trace && trace) cell.trace = std::move(trace);
  return cell;
}

Scenario assemble(const CampaignConfig& cfg, const Topology& topo,
                  const std::vector<MsState>& mobiles, const GainMap& gains, double power_dbm,
                  double xi_p_db, double xi_c_db, std::uint64_t seed) {
  Scenario sc;
  sc.topology = topo;
  sc.mobiles = mobiles;
  sc.gain_map = gains;
  sc.bs_power_w.assign(size_t(topo.n_bs()), dbm_to_watts(power_dbm));
  sc.rates.r_p.assign(size_t(topo.n_bs()), cfg.r_p);
  sc.rates.r_c = cfg.r_c;
  sc.rates.d_total = cfg.d_total;
  sc.thresholds.xi_p_db.assign(size_t(topo.n_bs()), xi_p_db);
  sc.thresholds.xi_c_db = xi_c_db;
  sc.thresholds.m_c_max = cfg.m_c_max;
  sc.rng_seed = seed;
  sc.validate();
  return sc;
}

DropOutput run_drop_generated(const CampaignConfig& cfg, const Topology& topo,
                              const std::vector<AxisSpec>& axes, int drop) {
  std::uint64_t drop_seed = derive_seed(cfg.seed, std::uint64_t(drop));

  Rng pos_rng(derive_seed(drop_seed, 0));
  std::vector<MsState> mobiles;
  int n_ms = cfg.n_ms_type1 + cfg.n_ms_type2;
  mobiles.reserve(size_t(n_ms));
  for (int i = 0; i < n_ms; ++i) {
    MsState ms;
    ms.id = i + 1;
    int cell_idx = topo.n_bs() == 1 ? 0 : pos_rng.uniform_int(topo.n_bs());
    ms.position =
        uniform_point_in_hexagon(pos_rng, topo.bs_positions[size_t(cell_idx)], topo.cell_radius_km);
    ms.weight = i < cfg.n_ms_type1 ? cfg.w_type1 : cfg.w_type2;
    ms.n_r = cfg.n_r;
    ms.speed_kmh = cfg.ms_speed_kmh;
    mobiles.push_back(ms);
  }
  if (cfg.mobility_steps > 0) {
    Rng move_rng(derive_seed(drop_seed, 2));
    for (int step = 0; step < cfg.mobility_steps; ++step) {
      step_mobility(topo, mobiles, cfg.mobility_dt_s, move_rng);
    }
  }

  Rng shadow_rng(derive_seed(drop_seed, 1));
  GainMap gains = build_gain_map(topo, mobiles, {cfg.sigma_shadow_db}, shadow_rng,
                                 dbm_to_watts(cfg.noise_power_dbm), std::nullopt);

  DropOutput out(axes.size());
  for (size_t a = 0; a < axes.size(); ++a) {
    const AxisSpec& axis = axes[a];
    out[a].resize(axis.values.size());
    if (axis.name == "power") {
      // Power leaves the classification untouched, so one schedule covers
      // the whole sweep.
      Thresholds th{std::vector<double>(size_t(topo.n_bs()), cfg.xi_p_db), cfg.xi_c_db,
                    cfg.m_c_max};
      Rng sched_rng(derive_seed(drop_seed, 1000 + std::uint64_t(axis.index) * 100));
      UserSets sets = schedule_users(gains, th, sched_rng);
      for (size_t v = 0; v < axis.values.size(); ++v) {
        Scenario sc = assemble(cfg, topo, mobiles, gains, axis.values[v], cfg.xi_p_db,
                               cfg.xi_c_db, drop_seed);
        out[a][v] = evaluate_cell(sc, sets, cfg, a == 0 && v == 0);
      }
    } else {
      for (size_t v = 0; v < axis.values.size(); ++v) {
        double xi_p = axis.name == "xi_p" ? axis.values[v] : cfg.xi_p_db;
        double xi_c = axis.name == "xi_c" ? axis.values[v] : cfg.xi_c_db;
        Thresholds th{std::vector<double>(size_t(topo.n_bs()), xi_p), xi_c, cfg.m_c_max};
        Rng sched_rng(derive_seed(drop_seed, 1000 + std::uint64_t(axis.index) * 100 + v));
        UserSets sets = schedule_users(gains, th, sched_rng);
        Scenario sc =
            assemble(cfg, topo, mobiles, gains, cfg.power_dbm, xi_p, xi_c, drop_seed);
        out[a][v] = evaluate_cell(sc, sets, cfg, a == 0 && v == 0);
      }
    }
  }
  return out;
}

DropOutput run_drop_single(const CampaignConfig& cfg, const Scenario& base,
                           const std::vector<AxisSpec>& axes) {
  DropOutput out(axes.size());
  for (size_t a = 0; a < axes.size(); ++a) {
    const AxisSpec& axis = axes[a];
    out[a].resize(axis.values.size());
    for (size_t v = 0; v < axis.values.size(); ++v) {
      Scenario sc = base;
      if (axis.name == "power") {
        sc.bs_power_w.assign(sc.bs_power_w.size(), dbm_to_watts(axis.values[v]));
      } else if (axis.name == "xi_p") {
        sc.thresholds.xi_p_db.assign(sc.thresholds.xi_p_db.size(), axis.values[v]);
      } else {
        sc.thresholds.xi_c_db = axis.values[v];
      }
      sc.validate();
      UserSets sets = schedule_for_scenario(sc);
      out[a][v] = evaluate_cell(sc, sets, cfg, a == 0 && v == 0);
    }
  }
  return out;
}

void check_threshold_sweeps(const CampaignConfig& cfg, const std::vector<AxisSpec>& axes,
                            int n_bs) {
  double floor_factor = n_bs <= 1 ? 0.0 : double(n_bs - 1) / double(n_bs);
  auto require = [&](double xi_p, double xi_c, const std::string& what) {
    if (xi_p < floor_factor * xi_c - 1e-12) {
      throw DomainError("campaign: " + what + " breaks the threshold relation xi_p >= " +
                        fmt_double(floor_factor) + " * xi_c");
    }
  };
  require(cfg.xi_p_db, cfg.xi_c_db, "base thresholds");
  for (const AxisSpec& axis : axes) {
    if (axis.name == "xi_p") {
      for (double v : axis.values) require(v, cfg.xi_c_db, "xi_p sweep value " + fmt_double(v));
    } else if (axis.name == "xi_c") {
      for (double v : axis.values) require(cfg.xi_p_db, v, "xi_c sweep value " + fmt_double(v));
    }
  }
}

}  // namespace

CampaignResult run_campaign(const CampaignConfig& config, int jobs) {
  config.validate();
  std::vector<AxisSpec> axes = list_axes(config);

  std::optional<Scenario> single;
  Topology topo;
  int n_drops = config.n_drops;
  if (config.scenario_file) {
    single = load_scenario(*config.scenario_file, {}, std::nullopt).scenario;
    n_drops = 1;  // fixed gains make further drops identical
  } else {
    topo.layout = Layout::hexagonal;
    topo.cell_radius_km = config.cell_radius_km;
    topo.n_t = config.n_t;
    topo.n_t_p = config.n_t_p;
    topo.n_t_c = config.n_t_c;
    topo.bs_positions = hexagonal_layout(config.n_cells, config.cell_radius_km);
    topo.validate();
    check_threshold_sweeps(config, axes, topo.n_bs());
  }

  std::vector<DropOutput> outputs(size_t(n_drops), DropOutput{});
  auto run_one = [&](int d) {
    outputs[size_t(d)] =
        single ? run_drop_single(config, *single, axes) : run_drop_generated(config, topo, axes, d);
  };
  int workers = std::clamp(jobs, 1, n_drops);
  if (workers == 1) {
    for (int d = 0; d < n_drops; ++d) run_one(d);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(size_t(workers));
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          int d = next.fetch_add(1);
          if (d >= n_drops) return;
          run_one(d);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  CampaignResult result;
  int k_cells = single ? single->n_bs() : topo.n_bs();
  bool b3_requested =
      std::find(config.schemes.begin(), config.schemes.end(), "baseline3") != config.schemes.end();
  result.baseline3_skipped = b3_requested && k_cells > 4;

  for (size_t a = 0; a < axes.size(); ++a) {
    for (size_t v = 0; v < axes[a].values.size(); ++v) {
      SweepPointInfo info{axes[a].name, axes[a].values[v], 0};
      std::vector<double> sum(config.schemes.size(), 0.0);
      std::vector<double> sum_sq(config.schemes.size(), 0.0);
      std::vector<int> count(config.schemes.size(), 0);

      for (int d = 0; d < n_drops; ++d) {
        const CellResult& cell = outputs[size_t(d)][a][v];
        if (cell.unconverged) ++result.n_unconverged;
        if (cell.b2_violation) ++result.b2_dominance_violations;
        if (!cell.feasible) ++info.n_infeasible;
        if (cell.feasible && cell.trace && !result.sample_trace) {
          result.sample_trace = *cell.trace;
          result.sample_trace_note = axes[a].name + " sweep, value " +
                                     fmt_double(axes[a].values[v]) + ", drop " + std::to_string(d);
        }
        for (size_t s = 0; s < config.schemes.size(); ++s) {
          if (config.schemes[s] == "baseline3" && result.baseline3_skipped) continue;
          bool have = cell.feasible && !std::isnan(cell.objective[s]);
          CampaignRow row;
          row.axis = axes[a].name;
          row.sweep_value = axes[a].values[v];
          row.scheme = config.schemes[s];
          row.drop = d;
          row.feasible = have;
          row.objective = have ? cell.objective[s] : 0;
          row.iterations = have && config.schemes[s] == "proposed" ? cell.iterations : -1;
          result.rows.push_back(row);
          if (have) {
            sum[s] += cell.objective[s];
            sum_sq[s] += cell.objective[s] * cell.objective[s];
            ++count[s];
          }
        }
      }
      result.sweep_points.push_back(info);
      for (size_t s = 0; s < config.schemes.size(); ++s) {
        if (config.schemes[s] == "baseline3" && result.baseline3_skipped) continue;
        CampaignAggregate agg;
        agg.axis = axes[a].name;
        agg.sweep_value = axes[a].values[v];
        agg.scheme = config.schemes[s];
        agg.n_feasible = count[s];
        agg.mean = count[s] > 0 ? sum[s] / count[s] : 0;
        if (count[s] > 1) {
          double var = (sum_sq[s] - sum[s] * sum[s] / count[s]) / (count[s] - 1);
          agg.ci95_halfwidth = 1.96 * std::sqrt(std::max(var, 0.0) / count[s]);
        }
        result.aggregates.push_back(agg);
      }
    }
  }
  return result;
}

std::string campaign_rows_csv(const CampaignResult& result) {
  std::string out = csv_row({"axis", "sweep_value", "scheme", "drop", "feasible", "objective",
                             "iterations"});
  for (const CampaignRow& row : result.rows) {
    out += csv_row({row.axis, fmt_double(row.sweep_value), row.scheme, std::to_string(row.drop),
                    row.feasible ? "1" : "0", row.feasible ? fmt_double(row.objective) : "",
                    row.iterations >= 0 ? std::to_string(row.iterations) : ""});
  }
  return out;
}

std::string campaign_summary_json(const CampaignConfig& config, const CampaignResult& result) {
  nlohmann::ordered_json j;
  j["seed"] = config.seed;
  j["n_drops"] = config.scenario_file ? 1 : config.n_drops;
  j["schemes"] = config.schemes;
  j["baseline3_skipped"] = result.baseline3_skipped;
  j["n_unconverged"] = result.n_unconverged;
  j["b2_dominance_violations"] = result.b2_dominance_violations;
  j["sweep_points"] = nlohmann::ordered_json::array();
  for (const SweepPointInfo& info : result.sweep_points) {
    j["sweep_points"].push_back({{"axis", info.axis},
                                 {"sweep_value", info.sweep_value},
                                 {"n_infeasible", info.n_infeasible}});
  }
  j["aggregates"] = nlohmann::ordered_json::array();
  for (const CampaignAggregate& agg : result.aggregates) {
    j["aggregates"].push_back({{"axis", agg.axis},
                               {"sweep_value", agg.sweep_value},
                               {"scheme", agg.scheme},
                               {"n_feasible", agg.n_feasible},
                               {"mean", agg.mean},
                               {"ci95_halfwidth", agg.ci95_halfwidth}});
  }
  return j.dump(2) + "\n";
}

std::string figure_csv(const CampaignResult& result, const std::string& axis) {
  std::vector<double> values;
  std::vector<std::string> schemes;
  for (const CampaignAggregate& agg : result.aggregates) {
    if (agg.axis != axis) continue;
    if (values.empty() || values.back() != agg.sweep_value) values.push_back(agg.sweep_value);
    if (std::find(schemes.begin(), schemes.end(), agg.scheme) == schemes.end()) {
      schemes.push_back(agg.scheme);
    }
  }

  std::string value_col = axis == "power" ? "power_dbm" : axis + "_db";
  std::string out = "# netmimo figure data v1\n";
  std::vector<std::string> header{value_col};
  for (const std::string& s : schemes) {
    header.push_back(s + "_mean");
    header.push_back(s + "_ci95");
  }
  out += csv_row(header);

  for (double value : values) {
    std::vector<std::string> fields{fmt_double(value)};
    for (const std::string& scheme : schemes) {
      const CampaignAggregate* found = nullptr;
      for (const CampaignAggregate& agg : result.aggregates) {
        if (agg.axis == axis && agg.sweep_value == value && agg.scheme == scheme) {
          found = &agg;
          break;
        }
      }
      fields.push_back(found && found->n_feasible > 0 ? fmt_double(found->mean) : "");
      fields.push_back(found && found->n_feasible > 0 ? fmt_double(found->ci95_halfwidth) : "");
    }
    out += csv_row(fields);
  }
  return out;
}

std::string convergence_csv(const SolverTrace& trace) {
  size_t n_bs = trace.iterations.empty() ? trace.ne.theta_c.size()
                                         : trace.iterations.front().theta.size();
  std::vector<std::string> header{"i", "a_target", "a_achieved"};
  for (size_t k = 1; k <= n_bs; ++k) header.push_back("theta_" + std::to_string(k));
  header.push_back("bracket_width");
  std::string out = csv_row(header);
  for (const IterationRecord& it : trace.iterations) {
    std::vector<std::string> fields{std::to_string(it.i), fmt_double(it.a_target),
                                    fmt_double(it.a_achieved)};
    for (double th : it.theta) fields.push_back(fmt_double(th));
    fields.push_back(fmt_double(it.a_max - it.a_min));
    out += csv_row(fields);
  }
  return out;
}

}  // namespace netmimo
