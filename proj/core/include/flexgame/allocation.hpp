#pragma once

#include "flexgame/game.hpp"
#include "flexgame/market.hpp"

#include <map>
#include <string>
#include <vector>

namespace flexgame::alloc {

class AllocationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mechanism {
  kShapley,            // SV
  kBanzhaf,            // B (raw index)
  kBanzhafNormalized,  // B#
  kCostGap,            // CGA (tau-value)
  kLagrangian,         // L (dual decomposition of the grand market)
  kEqualProfit,        // EPM
  kProportional,       // PCA
};

const char* to_string(Mechanism m);
Mechanism parse_mechanism(const std::string& tag);  // sv,b,bsharp,cga,l,epm,pca

enum class Axiom { kEfficiency, kDummy, kSymmetry, kAdditivity, kStability, kAnonymity };
enum class AxiomVerdict { kPass, kFail, kNotApplicable };

const char* to_string(Axiom a);
const char* to_string(AxiomVerdict v);

struct Allocation {
  Mechanism mechanism = Mechanism::kShapley;
  std::vector<std::string> players;
  std::vector<double> costs;  // EUR per SO, player order
  bool applicable = true;     // CGA preconditions can fail
  std::string na_reason;
  std::map<Axiom, AxiomVerdict> audit;
  std::vector<std::string> notes;

  double total() const;
};

/// Shapley value via the subset (extended) form:
///   SV_n = sum over C without n of |C|!(N-|C|-1)!/N! * (v(C u n) - v(C)).
Allocation shapley(const game::GameTable& g);

/// Raw Banzhaf index: mean marginal contribution over all subsets.
std::vector<double> banzhaf_raw(const game::GameTable& g);
Allocation banzhaf(const game::GameTable& g);

/// Banzhaf shares rescaled onto the grand-coalition cost so efficiency holds
/// as a euro identity. Throws when the shares sum to ~zero.
Allocation banzhaf_normalized(const game::GameTable& g);

struct CostGapData {
  std::vector<double> marginal;  // v(N) - v(N \ n) per player
  std::vector<double> gap;       // g(C) per mask (gap[0] = 0)
  std::vector<double> weights;   // min over C containing n of g(C)
};

CostGapData cost_gap_data(const game::GameTable& g);

/// Tau-value style allocation: marginal vector plus a weighted share of the
/// non-separable cost. Returns applicable=false (with the violated condition
/// named) when some gap is negative or the weights cannot cover it.
Allocation cost_gap(const game::GameTable& g);

/// Splits the grand-coalition optimum by attributing every dual-objective
/// term to the SO owning the constraint or variable; interface-bound terms
/// are shared half/half between the TSO and the hosting DSO. Requires the
/// cleared grand-coalition market with its multipliers.
Allocation lagrangian(const scenario::Scenario& s, const market::MarketModel& grand_model,
                      const market::MarketOutcome& grand_outcome);

/// Core allocation minimizing the largest pairwise difference in relative
/// savings (an LP). SOs with ~zero stand-alone cost are pinned to zero and
/// excluded from the ratio constraints, with a note.
Allocation equal_profit(const game::GameTable& g);

enum class ProportionalMode { kStandAlone, kActivatedVolume };

/// Cost split proportional to stand-alone costs, or to provided activated
/// volumes (MW per SO, player order).
Allocation proportional(const game::GameTable& g,
                        ProportionalMode mode = ProportionalMode::kStandAlone,
                        const std::vector<double>& volumes = {});

/// Gross activated MW per SO of the grand coalition, player order; feeds the
/// volume-weighted proportional mode.
std::vector<double> activated_volumes(const game::GameTable& g,
                                      const market::MarketOutcome& grand_outcome);

/// Per-instance axiom audit: efficiency, dummy (detected dummies must pay
/// zero), symmetry (detected equivalent pairs must pay the same), stability
/// (core membership). Additivity and anonymity are properties of the map,
/// not of one instance, and are reported not-applicable here; the property
/// test-suite exercises them on game pairs and label permutations.
void audit(const game::GameTable& g, Allocation& a);

/// Players whose marginal contribution to every coalition is ~zero.
std::vector<int> detect_dummies(const game::GameTable& g);
/// Unordered pairs (i, j) interchangeable in every coalition.
std::vector<std::pair<int, int>> detect_equivalent_pairs(const game::GameTable& g);

std::string allocations_to_json(const std::vector<Allocation>& allocations);
std::string allocations_to_csv(const std::vector<Allocation>& allocations);

}  // namespace flexgame::alloc
