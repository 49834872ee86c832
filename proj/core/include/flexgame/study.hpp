#pragma once

#include "flexgame/allocation.hpp"
#include "flexgame/game.hpp"
#include "flexgame/market.hpp"
#include "flexgame/scenario.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace flexgame::study {

/// Process exit codes shared by every study runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitNumerical = 4;

struct StudyConfig {
  std::string scenario_path;
  std::string out_dir = ".";
  market::PricingScheme pricing = market::PricingScheme::kPayAsBid;
  std::vector<alloc::Mechanism> mechanisms;          // empty = all seven
  alloc::ProportionalMode pca_mode = alloc::ProportionalMode::kStandAlone;
  std::vector<double> factors = {1.0, 0.5, 0.2};     // interface limit scaling
  std::vector<std::string> placement_nodes;
  std::string coalition = "all";
  std::uint64_t seed = 0;
  double slack_penalty = 0.0;
  bool dump_lp = false;
  int threads = 0;
};

int run_validate(const StudyConfig& cfg, std::ostream& log);
int run_clear(const StudyConfig& cfg, std::ostream& log);
int run_game(const StudyConfig& cfg, std::ostream& log);

/// All requested mechanisms at every interface factor; emits the stacked-bar
/// CSV (factor, mechanism, so_id, cost), the per-mechanism axiom matrix, and
/// the game table each allocation was computed from.
int run_allocate(const StudyConfig& cfg, std::ostream& log);

/// Total cost of every coalition structure {TSO+S} u singletons for
/// S over the DSO subsets, per interface factor; rows marked when a
/// coalition market is infeasible.
int run_sweep_coalitions(const StudyConfig& cfg, std::ostream& log);

/// Re-attaches the (single) template DSO at each candidate node and compares
/// the TSO+DSO coalition cost against the disjoint total.
int run_placement(const StudyConfig& cfg, std::ostream& log);

/// Writes a generated or built-in fixture scenario (see fixtures.hpp) to a
/// file; `kind` is one of seeded, desk, two-bus, two-bus-feeder,
/// feeder-overload, placement.
int run_generate(const std::string& kind, const std::string& path, std::uint64_t seed,
                 int num_dsos, int feeder_nodes, bool pinned, std::ostream& log);

// Exposed for tests: the deterministic per-factor sweep record.
struct SweepRow {
  int structure_index = 0;     // 1-based; subsets ordered by size then mask
  std::string structure;       // partition label, parts joined by " | "
  double factor = 1.0;
  double total_cost = 0.0;
  bool feasible = true;
};

std::vector<SweepRow> sweep_rows(const scenario::Scenario& s, const std::vector<double>& factors,
                                 market::PricingScheme pricing, const game::GameBuildOptions& opt);

struct PlacementRow {
  std::string node;
  double coalition_cost = 0.0;  // v({TSO, DSO@node}) + leftover singletons
  double disjoint_cost = 0.0;   // v({TSO}) + v({DSO}) at the same placement
  double savings_pct = 0.0;
  bool feasible = true;
};

std::vector<PlacementRow> placement_rows(const scenario::Scenario& s,
                                         const std::vector<std::string>& nodes,
                                         market::PricingScheme pricing,
                                         const game::GameBuildOptions& opt);

}  // namespace flexgame::study
