// Command line front end: validates scenarios, clears coalition markets,
// builds the cost game, runs the allocation / sweep / placement studies, and
// writes plot-ready CSV + JSON reports.
#include <CLI11.hpp>

#include <flexgame/study.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

std::vector<double> parse_factors(const std::string& list) {
  std::vector<double> out;
  std::string token;
  for (char c : list + ",") {
    if (c == ',') {
      if (!token.empty()) out.push_back(std::stod(token));
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  return out;
}

std::vector<flexgame::alloc::Mechanism> parse_mechanisms(const std::string& list) {
  std::vector<flexgame::alloc::Mechanism> out;
  std::string token;
  for (char c : list + ",") {
    if (c == ',') {
      if (!token.empty()) out.push_back(flexgame::alloc::parse_mechanism(token));
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TSO-DSO flexibility market clearing, cost game, and allocation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  flexgame::study::StudyConfig cfg;
  std::string pricing = "payasbid";
  std::string mechanisms;
  std::string factors;
  std::string pca_mode = "standalone";

  app.add_option("--scenario", cfg.scenario_path, "scenario JSON document")->envname("FLEXGAME_SCENARIO");
  app.add_option("--out", cfg.out_dir, "output directory for reports");
  app.add_option("--seed", cfg.seed, "seed for randomized fixture generation");
  app.add_option("--slack-penalty", cfg.slack_penalty,
                 "price (EUR/MWh) of elastic slack on balance constraints");
  app.add_flag("--dump-lp", cfg.dump_lp, "write the market LP in CPLEX LP format");
  app.add_option("--threads", cfg.threads, "worker threads for coalition solves (0 = auto)");

  auto* validate = app.add_subcommand("validate", "check every scenario invariant");
  auto* clear = app.add_subcommand("clear", "clear one coalition market");
  clear->add_option("--coalition", cfg.coalition, "members, e.g. TSO,D1 (default all)");
  clear->add_option("--pricing", pricing, "payasbid|nodal");
  auto* game = app.add_subcommand("game", "tabulate v(C) for every coalition");
  game->add_option("--pricing", pricing, "payasbid|nodal");
  auto* allocate = app.add_subcommand("allocate", "compute and audit allocation mechanisms");
  allocate->add_option("--mechanisms", mechanisms, "comma list of sv,b,bsharp,cga,l,epm,pca");
  allocate->add_option("--pricing", pricing, "payasbid|nodal");
  allocate->add_option("--factors", factors, "interface limit factors, e.g. 1.0,0.5,0.2");
  allocate->add_option("--pca-mode", pca_mode, "standalone|volume weights for pca");
  auto* sweep = app.add_subcommand("sweep-coalitions", "total cost per coalition structure");
  sweep->add_option("--factors", factors, "interface limit factors, e.g. 1.0,0.5,0.2");
  sweep->add_option("--pricing", pricing, "payasbid|nodal");
  auto* placement = app.add_subcommand("placement", "re-attach the template DSO at each node");
  placement->add_option("--nodes", cfg.placement_nodes, "candidate transmission nodes")
      ->delimiter(',');
  placement->add_option("--pricing", pricing, "payasbid|nodal");
  auto* gen = app.add_subcommand("gen", "write a built-in or seeded fixture scenario");
  std::string gen_kind = "seeded";
  std::string gen_path = "scenario.json";
  int gen_dsos = 3;
  int gen_feeder_nodes = 4;
  bool gen_free_interfaces = false;
  gen->add_option("--kind", gen_kind,
                  "seeded|desk|two-bus|two-bus-feeder|feeder-overload|placement");
  gen->add_option("--file", gen_path, "output scenario path");
  gen->add_option("--dsos", gen_dsos, "feeders in the seeded scenario");
  gen->add_option("--feeder-nodes", gen_feeder_nodes, "nodes per feeder (>= 3)");
  gen->add_flag("--free-interfaces", gen_free_interfaces,
                "wide interface bounds instead of pinned-at-base");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!pricing.empty()) cfg.pricing = flexgame::market::parse_pricing(pricing);
    if (!mechanisms.empty()) cfg.mechanisms = parse_mechanisms(mechanisms);
    if (!factors.empty()) cfg.factors = parse_factors(factors);
    if (pca_mode == "volume") cfg.pca_mode = flexgame::alloc::ProportionalMode::kActivatedVolume;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return flexgame::study::kExitValidation;
  }

  if (gen->parsed())
    return flexgame::study::run_generate(gen_kind, gen_path, cfg.seed, gen_dsos, gen_feeder_nodes,
                                         !gen_free_interfaces, std::cout);
  if (cfg.scenario_path.empty()) {
    std::cerr << "error: --scenario is required\n";
    return flexgame::study::kExitValidation;
  }
  if (validate->parsed()) return flexgame::study::run_validate(cfg, std::cout);
  if (clear->parsed()) return flexgame::study::run_clear(cfg, std::cout);
  if (game->parsed()) return flexgame::study::run_game(cfg, std::cout);
  if (allocate->parsed()) return flexgame::study::run_allocate(cfg, std::cout);
  if (sweep->parsed()) return flexgame::study::run_sweep_coalitions(cfg, std::cout);
  if (placement->parsed()) return flexgame::study::run_placement(cfg, std::cout);
  return flexgame::study::kExitValidation;
}
