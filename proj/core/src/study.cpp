#include "flexgame/study.hpp"

#include "flexgame/fixtures.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace flexgame::study {

namespace fs = std::filesystem;
using game::GameBuildOptions;
using game::GameTable;
using market::Coalition;
using scenario::Scenario;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string factor_tag(double factor) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "f%g", factor * 100.0);
  return buf;
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
  fs::create_directories(dir);
  std::ofstream out(fs::path(dir) / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
  out << content;
}

Scenario load_checked(const StudyConfig& cfg, std::ostream& log, int& exit_code) {
  for (double f : cfg.factors) {
    if (!(f > 0.0 && f <= 1.0)) {
      log << "interface factors must lie in (0, 1], got " << f << "\n";
      exit_code = kExitValidation;
    }
  }
  const Scenario s = scenario::load_scenario_file(cfg.scenario_path);
  const auto report = scenario::validate(s);
  if (!report.ok()) {
    log << "scenario is invalid:\n" << report.to_string();
    exit_code = kExitValidation;
  }
  return s;
}

GameBuildOptions game_options(const StudyConfig& cfg) {
  GameBuildOptions opt;
  opt.market.slack_penalty = cfg.slack_penalty;
  opt.threads = cfg.threads;
  return opt;
}

int map_failure(const std::exception& e, std::ostream& log) {
  log << "error: " << e.what() << "\n";
  if (const auto* ge = dynamic_cast<const game::GameError*>(&e))
    return ge->status() == lp::LpStatus::kInfeasible ? kExitInfeasible : kExitNumerical;
  if (dynamic_cast<const scenario::ScenarioError*>(&e) != nullptr) return kExitValidation;
  if (dynamic_cast<const market::MarketError*>(&e) != nullptr) return kExitInfeasible;
  return kExitNumerical;
}

std::vector<alloc::Mechanism> mechanisms_or_default(const StudyConfig& cfg) {
  if (!cfg.mechanisms.empty()) return cfg.mechanisms;
  return {alloc::Mechanism::kShapley,     alloc::Mechanism::kBanzhaf,
          alloc::Mechanism::kBanzhafNormalized, alloc::Mechanism::kCostGap,
          alloc::Mechanism::kLagrangian,  alloc::Mechanism::kEqualProfit,
          alloc::Mechanism::kProportional};
}

}  // namespace

int run_validate(const StudyConfig& cfg, std::ostream& log) {
  try {
    const Scenario s = scenario::load_scenario_file(cfg.scenario_path);
    const auto report = scenario::validate(s);
    if (!report.ok()) {
      log << report.to_string();
      log << report.violations.size() << " violation(s)\n";
      return kExitValidation;
    }
    log << "scenario ok: " << s.transmission.nodes.size() << " transmission nodes, "
        << s.dsos.size() << " DSO(s)\n";
    return kExitOk;
  } catch (const scenario::ScenarioError& e) {
    log << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

int run_clear(const StudyConfig& cfg, std::ostream& log) {
  try {
    int code = kExitOk;
    const Scenario s = load_checked(cfg, log, code);
    if (code != kExitOk) return code;
    const Coalition coalition = Coalition::parse(cfg.coalition, s);
    market::BuildOptions build;
    build.slack_penalty = cfg.slack_penalty;
    const auto model = market::build_market(s, coalition, build);
    const std::string tag = coalition.label(s);
    if (cfg.dump_lp) {
      std::ostringstream os;
      lp::write_lp_format(model.problem, os);
      write_file(cfg.out_dir, "market_" + tag + ".lp", os.str());
    }
    const auto outcome = market::clear(model);
    write_file(cfg.out_dir, "clear_" + tag + ".json", market::outcome_to_json(s, outcome));
    write_file(cfg.out_dir, "clear_" + tag + ".csv", market::outcome_to_csv(s, outcome));
    if (outcome.status != lp::LpStatus::kOptimal) {
      log << "coalition " << tag << ": " << lp::to_string(outcome.status) << "\n";
      return outcome.status == lp::LpStatus::kInfeasible ? kExitInfeasible : kExitNumerical;
    }
    log << "coalition " << tag << ": cost " << fmt(outcome.objective) << " EUR\n";
    for (const auto& [so, cost] : market::settle(s, outcome, cfg.pricing))
      log << "  " << so << " (" << market::to_string(cfg.pricing) << "): " << fmt(cost) << " EUR\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return map_failure(e, log);
  }
}

int run_game(const StudyConfig& cfg, std::ostream& log) {
  try {
    int code = kExitOk;
    const Scenario s = load_checked(cfg, log, code);
    if (code != kExitOk) return code;
    const GameTable table = game::build_game(s, cfg.pricing, game_options(cfg));
    write_file(cfg.out_dir, "game.json", game::game_to_json(table));
    write_file(cfg.out_dir, "game.csv", game::game_to_csv(table));
    double singleton_total = 0.0;
    for (int i = 0; i < table.num_players(); ++i) singleton_total += table.value(1u << i);
    log << "game over " << table.num_players() << " players, v(grand) = "
        << fmt(table.grand_value()) << " EUR, disjoint total = " << fmt(singleton_total)
        << " EUR\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return map_failure(e, log);
  }
}

int run_allocate(const StudyConfig& cfg, std::ostream& log) {
  try {
    int code = kExitOk;
    const Scenario base = load_checked(cfg, log, code);
    if (code != kExitOk) return code;
    const auto mechanisms = mechanisms_or_default(cfg);

    std::ostringstream costs_csv, audit_csv;
    costs_csv << "factor,mechanism,so_id,cost\n";
    audit_csv << "factor,mechanism,axiom,verdict\n";
    nlohmann::json all = nlohmann::json::array();

    for (double factor : cfg.factors) {
      const Scenario s = scenario::scale_interface_limits(base, factor);
      const GameTable table = game::build_game(s, cfg.pricing, game_options(cfg));
      write_file(cfg.out_dir, "game_" + factor_tag(factor) + ".json", game::game_to_json(table));

      market::BuildOptions build;
      build.slack_penalty = cfg.slack_penalty;
      const auto grand_model =
          market::build_market(s, Coalition::grand(static_cast<int>(s.dsos.size())), build);
      const auto grand_outcome = market::clear(grand_model);
      if (grand_outcome.status != lp::LpStatus::kOptimal)
        throw market::MarketError("grand coalition market is " +
                                  std::string(lp::to_string(grand_outcome.status)));

      std::vector<alloc::Allocation> allocations;
      for (auto mech : mechanisms) {
        alloc::Allocation a;
        try {
          switch (mech) {
            case alloc::Mechanism::kShapley: a = alloc::shapley(table); break;
            case alloc::Mechanism::kBanzhaf: a = alloc::banzhaf(table); break;
            case alloc::Mechanism::kBanzhafNormalized: a = alloc::banzhaf_normalized(table); break;
            case alloc::Mechanism::kCostGap: a = alloc::cost_gap(table); break;
            case alloc::Mechanism::kLagrangian:
              a = alloc::lagrangian(s, grand_model, grand_outcome);
              break;
            case alloc::Mechanism::kEqualProfit: a = alloc::equal_profit(table); break;
            case alloc::Mechanism::kProportional:
              a = alloc::proportional(table, cfg.pca_mode,
                                      cfg.pca_mode == alloc::ProportionalMode::kActivatedVolume
                                          ? alloc::activated_volumes(table, grand_outcome)
                                          : std::vector<double>{});
              break;
          }
        } catch (const alloc::AllocationError& e) {
          a.mechanism = mech;
          a.players = table.players;
          a.applicable = false;
          a.na_reason = e.what();
        }
        alloc::audit(table, a);
        if (a.applicable) {
          for (std::size_t i = 0; i < a.players.size(); ++i)
            costs_csv << fmt(factor) << "," << alloc::to_string(mech) << "," << a.players[i] << ","
                      << fmt(a.costs[i]) << "\n";
        } else {
          costs_csv << fmt(factor) << "," << alloc::to_string(mech) << ",-,not_applicable\n";
        }
        for (const auto& [ax, verdict] : a.audit)
          audit_csv << fmt(factor) << "," << alloc::to_string(mech) << "," << alloc::to_string(ax)
                    << "," << alloc::to_string(verdict) << "\n";
        allocations.push_back(std::move(a));
      }
      nlohmann::json jf;
      jf["factor"] = factor;
      jf["grand_value_eur"] = table.grand_value();
      jf["allocations"] = nlohmann::json::parse(alloc::allocations_to_json(allocations));
      all.push_back(std::move(jf));
      log << "factor " << fmt(factor) << ": v(grand) = " << fmt(table.grand_value()) << " EUR\n";
    }
    write_file(cfg.out_dir, "allocations.csv", costs_csv.str());
    write_file(cfg.out_dir, "audit.csv", audit_csv.str());
    write_file(cfg.out_dir, "allocations.json", all.dump(2));
    return kExitOk;
  } catch (const std::exception& e) {
    return map_failure(e, log);
  }
}

std::vector<SweepRow> sweep_rows(const Scenario& base, const std::vector<double>& factors,
                                 market::PricingScheme pricing, const GameBuildOptions& opt) {
  const int num_dsos = static_cast<int>(base.dsos.size());
  // Nested structure ordering: DSO subsets by size, then by mask, so the
  // chain C1 (all singletons) .. C2^K (grand coalition) is increasing.
  std::vector<std::uint32_t> subsets;
  for (int size = 0; size <= num_dsos; ++size)
    for (std::uint32_t m = 0; m < (1u << num_dsos); ++m)
      if (std::popcount(m) == size) subsets.push_back(m);

  GameBuildOptions lenient = opt;
  lenient.lenient = true;
  std::vector<SweepRow> rows;
  for (double factor : factors) {
    const Scenario s = scenario::scale_interface_limits(base, factor);
    const GameTable table = game::build_game(s, pricing, lenient);
    for (std::size_t idx = 0; idx < subsets.size(); ++idx) {
      const std::uint32_t dso_subset = subsets[idx];
      SweepRow row;
      row.structure_index = static_cast<int>(idx) + 1;
      row.factor = factor;
      const std::uint32_t tso_group = 1u | (dso_subset << 1);
      double total = table.value(tso_group);
      std::string label = table.coalition_label(tso_group);
      for (int k = 0; k < num_dsos; ++k) {
        if (dso_subset & (1u << k)) continue;
        total += table.value(2u << k);
        label += " | " + base.dsos[k].id;
      }
      row.structure = label;
      row.total_cost = total;
      row.feasible = std::isfinite(total);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

int run_sweep_coalitions(const StudyConfig& cfg, std::ostream& log) {
  try {
    int code = kExitOk;
    const Scenario s = load_checked(cfg, log, code);
    if (code != kExitOk) return code;
    const auto rows = sweep_rows(s, cfg.factors, cfg.pricing, game_options(cfg));
    std::ostringstream csv;
    csv << "structure_index,structure,factor,total_cost_eur,status\n";
    for (const auto& r : rows)
      csv << "C" << r.structure_index << "," << r.structure << "," << fmt(r.factor) << ","
          << (r.feasible ? fmt(r.total_cost) : "") << "," << (r.feasible ? "ok" : "infeasible")
          << "\n";
    write_file(cfg.out_dir, "sweep.csv", csv.str());
    // Ship the tables the rows were derived from.
    GameBuildOptions lenient = game_options(cfg);
    lenient.lenient = true;
    for (double factor : cfg.factors) {
      const GameTable table =
          game::build_game(scenario::scale_interface_limits(s, factor), cfg.pricing, lenient);
      write_file(cfg.out_dir, "game_" + factor_tag(factor) + ".json", game::game_to_json(table));
    }
    log << "sweep: " << rows.size() << " rows over " << cfg.factors.size() << " factor(s)\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return map_failure(e, log);
  }
}

std::vector<PlacementRow> placement_rows(const Scenario& s, const std::vector<std::string>& nodes,
                                         market::PricingScheme pricing,
                                         const GameBuildOptions& opt) {
  if (s.dsos.empty()) throw market::MarketError("placement study needs a template DSO");
  const std::string dso_id = s.dsos.front().id;
  std::vector<PlacementRow> rows;
  for (const auto& node : nodes) {
    const Scenario placed = scenario::with_dso_relocated(s, dso_id, node);
    PlacementRow row;
    row.node = node;
    try {
      auto value = [&](Coalition c) {
        const auto outcome = market::clear(market::build_market(placed, c, opt.market), opt.simplex);
        if (outcome.status != lp::LpStatus::kOptimal)
          throw market::MarketError("coalition " + c.label(placed) + " is " +
                                    lp::to_string(outcome.status));
        if (pricing == market::PricingScheme::kPayAsBid) return outcome.objective;
        double v = 0.0;
        for (const auto& [so, cost] : market::settle(placed, outcome, pricing)) v += cost;
        return v;
      };
      const double pair_cost = value(Coalition(3u));  // TSO + template DSO
      const double tso_alone = value(Coalition::tso_only());
      const double dso_alone = value(Coalition::dso_only(0));
      row.coalition_cost = pair_cost;
      row.disjoint_cost = tso_alone + dso_alone;
      row.savings_pct =
          row.disjoint_cost != 0.0
              ? 100.0 * (row.disjoint_cost - row.coalition_cost) / std::abs(row.disjoint_cost)
              : 0.0;
    } catch (const std::exception&) {
      row.feasible = false;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

int run_placement(const StudyConfig& cfg, std::ostream& log) {
  try {
    int code = kExitOk;
    const Scenario s = load_checked(cfg, log, code);
    if (code != kExitOk) return code;
    if (cfg.placement_nodes.size() < 2) {
      log << "placement needs at least two candidate nodes (--nodes)\n";
      return kExitValidation;
    }
    const auto rows = placement_rows(s, cfg.placement_nodes, cfg.pricing, game_options(cfg));
    std::ostringstream csv;
    csv << "node,coalition_cost_eur,disjoint_cost_eur,savings_pct,status\n";
    for (const auto& r : rows) {
      if (r.feasible) {
        csv << r.node << "," << fmt(r.coalition_cost) << "," << fmt(r.disjoint_cost) << ","
            << fmt(r.savings_pct) << ",ok\n";
      } else {
        csv << r.node << ",,,,infeasible\n";
      }
      log << "placement " << r.node << ": "
          << (r.feasible ? "coalition " + std::string(fmt(r.coalition_cost)) + " EUR vs disjoint " +
                               fmt(r.disjoint_cost) + " EUR"
                         : std::string("infeasible"))
          << "\n";
    }
    write_file(cfg.out_dir, "placement.csv", csv.str());
    return kExitOk;
  } catch (const std::exception& e) {
    return map_failure(e, log);
  }
}

int run_generate(const std::string& kind, const std::string& path, std::uint64_t seed,
                 int num_dsos, int feeder_nodes, bool pinned, std::ostream& log) {
  try {
    Scenario s;
    if (kind == "seeded") {
      fixtures::GeneratorConfig cfg;
      cfg.seed = seed;
      cfg.num_dsos = num_dsos;
      cfg.feeder_nodes = feeder_nodes;
      cfg.pinned_interfaces = pinned;
      s = fixtures::seeded_scenario(cfg);
    } else if (kind == "desk") {
      s = fixtures::desk_case();
    } else if (kind == "two-bus") {
      s = fixtures::two_bus_congestion();
    } else if (kind == "two-bus-feeder") {
      s = fixtures::two_bus_with_feeder();
    } else if (kind == "feeder-overload") {
      s = fixtures::feeder_overload_case();
    } else if (kind == "placement") {
      s = fixtures::placement_chain();
    } else {
      log << "unknown fixture kind '" << kind << "'\n";
      return kExitValidation;
    }
    const fs::path out(path);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    std::ofstream file(out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path);
    file << scenario::save_scenario(s) << "\n";
    log << "wrote " << kind << " scenario to " << path << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace flexgame::study
