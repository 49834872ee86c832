#pragma once

#include "flexgame/market.hpp"
#include "flexgame/scenario.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace flexgame::game {

class GameError : public std::runtime_error {
 public:
  explicit GameError(const std::string& what, lp::LpStatus status = lp::LpStatus::kInfeasible)
      : std::runtime_error(what), status_(status) {}
  lp::LpStatus status() const { return status_; }

 private:
  lp::LpStatus status_;
};

struct SolveMeta {
  lp::LpStatus status = lp::LpStatus::kOptimal;
  int iterations = 0;
  double millis = 0.0;
};

/// Characteristic cost function over every coalition of the SO set.
/// Coalitions are bitmasks (TSO = bit 0, k-th DSO = bit 1+k); `values` is
/// indexed by mask with v(empty) = 0 by convention.
struct GameTable {
  std::vector<std::string> players;  // "TSO" first, then dso ids
  market::PricingScheme scheme = market::PricingScheme::kPayAsBid;
  std::vector<double> values;  // size 1 << num_players()
  std::vector<SolveMeta> meta;

  int num_players() const { return static_cast<int>(players.size()); }
  std::uint32_t grand_mask() const { return (1u << num_players()) - 1u; }
  double value(std::uint32_t mask) const { return mask == 0 ? 0.0 : values.at(mask); }
  double grand_value() const { return value(grand_mask()); }
  std::string coalition_label(std::uint32_t mask) const;

  /// Restriction of the game to the players in `subset_mask`; player order
  /// is preserved. Used for the small-coalition stability checks.
  GameTable subgame(std::uint32_t subset_mask) const;
};

/// Absolute-plus-relative tolerance used by every game inequality.
inline double game_tolerance(double scale) { return 1e-8 + 1e-10 * std::abs(scale); }

struct GameBuildOptions {
  market::BuildOptions market;
  lp::SimplexOptions simplex;
  int threads = 0;     ///< 0 = hardware concurrency
  bool use_cache = true;
  /// Record failed coalitions as NaN entries instead of throwing; used by
  /// the sweep study so single infeasible cells only mark their rows.
  bool lenient = false;
};

/// Clears the coalition market for every non-empty coalition (parallel map)
/// and tabulates v(C) under the requested pricing scheme. Any non-optimal
/// coalition aborts with a GameError naming the coalition; the slack-penalty
/// build option is the escape hatch for infeasible markets. Values are
/// memoized across calls keyed by (scenario, coalition, scheme, options).
GameTable build_game(const scenario::Scenario& s, market::PricingScheme scheme,
                     const GameBuildOptions& options = {});

struct PairViolation {
  std::uint32_t c1, c2;
  double lhs, rhs;  // v(union) + v(intersection) vs v(c1) + v(c2)
};

struct SubmodularityReport {
  std::vector<PairViolation> violations;
  long long pairs_checked = 0;
  bool ok() const { return violations.empty(); }
};

/// Checks v(C u C') + v(C n C') <= v(C) + v(C') for every pair.
SubmodularityReport check_submodular(const GameTable& g);

struct MarginalViolation {
  std::uint32_t smaller, larger;
  int player;
  double smaller_marginal, larger_marginal;
};

struct ConcavityReport {
  std::vector<MarginalViolation> violations;
  long long triples_checked = 0;
  bool ok() const { return violations.empty(); }
};

/// Checks v(C u {n}) - v(C) <= v(C' u {n}) - v(C') for every nested pair
/// C subset of C' and player n outside C'.
ConcavityReport check_concavity(const GameTable& g);

struct CoreCertificate {
  bool nonempty = false;
  std::vector<double> witness;  // optimal allocation when nonempty
  double lp_optimum = 0.0;
  double grand_value = 0.0;
};

/// Solves  max sum y  s.t.  y(C) <= v(C) for all C; the core is non-empty
/// iff the optimum reaches v of the grand coalition.
CoreCertificate core_nonempty(const GameTable& g);

struct CoreMembership {
  bool in_core = false;
  std::uint32_t worst_coalition = 0;
  double worst_violation = 0.0;  // max over C of y(C) - v(C)
  double efficiency_gap = 0.0;   // |sum y - v(grand)|
};

CoreMembership in_core(const GameTable& g, const std::vector<double>& y);

std::string game_to_json(const GameTable& g);
std::string game_to_csv(const GameTable& g);
GameTable game_from_json(const std::string& text);

}  // namespace flexgame::game
