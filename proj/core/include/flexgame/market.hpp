#pragma once

#include "flexgame/lp.hpp"
#include "flexgame/scenario.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace flexgame::market {

class MarketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Subset of system operators encoded as a bitmask: bit 0 is the TSO, bit
/// 1 + k is the k-th DSO in scenario order.
class Coalition {
 public:
  explicit Coalition(std::uint32_t mask) : mask_(mask) {}
  static Coalition tso_only() { return Coalition(1u); }
  static Coalition dso_only(int dso_index) { return Coalition(2u << dso_index); }
  static Coalition grand(int num_dsos) { return Coalition((2u << num_dsos) - 1u); }
  /// Accepts "TSO", dso ids, "all", joined by ',' or '+'.
  static Coalition parse(const std::string& members, const scenario::Scenario& s);

  std::uint32_t mask() const { return mask_; }
  bool has_tso() const { return mask_ & 1u; }
  bool has_dso(int dso_index) const { return mask_ & (2u << dso_index); }
  bool empty() const { return mask_ == 0; }
  int size() const;
  std::string label(const scenario::Scenario& s) const;

  /// Throws MarketError when empty or referencing DSOs the scenario lacks.
  void check_valid(const scenario::Scenario& s) const;

  bool operator==(const Coalition& other) const { return mask_ == other.mask_; }

 private:
  std::uint32_t mask_;
};

enum class PricingScheme { kPayAsBid, kNodal };

const char* to_string(PricingScheme scheme);
PricingScheme parse_pricing(const std::string& name);

struct BuildOptions {
  /// When positive, every balance constraint gets a pair of elastic slack
  /// variables priced at this EUR/MWh penalty instead of failing hard.
  double slack_penalty = 0.0;
};

/// Who a constraint or variable belongs to, for settlement and for the
/// dual-decomposition cost split. Interface-coupling terms are shared.
struct Owner {
  enum Kind { kTso, kDso, kInterface } kind = kTso;
  int dso_index = -1;  // for kDso and kInterface

  static Owner tso() { return {kTso, -1}; }
  static Owner dso(int k) { return {kDso, k}; }
  static Owner interface(int k) { return {kInterface, k}; }
};

/// Per-node bid activation variable indices (-1 when the block is absent).
struct BidVarRef {
  int gen_up = -1, gen_down = -1, dem_up = -1, dem_down = -1;
};

struct TsoBlock {
  bool present = false;
  std::vector<BidVarRef> bids;       // by transmission node index
  std::vector<int> injection_var;    // net injection p, by node index
  std::vector<int> flow_var;         // by line index
  std::vector<int> injection_row;    // nodal price rows, by node index
  std::vector<int> balance_row;      // by node index
};

struct DsoBlock {
  bool present = false;
  int dso_index = -1;
  std::vector<std::string> nodes;    // root first
  std::vector<BidVarRef> bids;       // by position in `nodes`
  std::vector<int> q_var;            // reactive injection decision
  std::vector<int> injection_var;    // net active injection p
  std::vector<int> v_var;            // squared voltage magnitude
  std::vector<int> p_flow_var;       // by feeder line index
  std::vector<int> q_flow_var;
  std::vector<int> injection_row;    // nodal price rows
  int tq_var = -1;
  int tp_var = -1;                   // shared interface variable, -1 if fixed
  double tp_fixed = 0.0;             // transfer constant when tp_var == -1
};

/// A built coalition market: the LP plus everything needed to read cleared
/// quantities, prices, and ownership of every dual term back out of it.
struct MarketModel {
  scenario::Scenario const* source = nullptr;  // not owned
  Coalition coalition{0};
  lp::LpProblem problem;
  TsoBlock tso;
  std::vector<DsoBlock> dsos;  // members only, ascending dso index
  std::vector<Owner> var_owner;
  std::vector<Owner> ineq_owner;
  std::vector<Owner> eq_owner;
};

/// Assembles the coalition market: member blocks plus shared interface
/// transfer variables for every DSO whose TSO is also a member; transfers of
/// absent counterparts stay pinned at the feeder's base transfer. A
/// singleton coalition is exactly the corresponding disjoint market.
MarketModel build_market(const scenario::Scenario& s, Coalition coalition,
                         const BuildOptions& options = {});

/// Disjoint market shorthands (singleton coalitions).
MarketModel build_disjoint_tso(const scenario::Scenario& s, const BuildOptions& options = {});
MarketModel build_disjoint_dso(const scenario::Scenario& s, const std::string& dso_id,
                               const BuildOptions& options = {});

struct ProductVolumes {
  double gen_up = 0.0, gen_down = 0.0, dem_up = 0.0, dem_down = 0.0;
  double net() const { return gen_up - gen_down + dem_up - dem_down; }
  double gross() const { return gen_up + gen_down + dem_up + dem_down; }
};

struct GridResult {
  std::string so_id;  // "TSO" or a dso id
  std::map<std::string, ProductVolumes> activations;
  std::map<std::string, double> nodal_price;
};

struct MarketOutcome {
  Coalition coalition{0};
  lp::LpStatus status = lp::LpStatus::kIterationLimit;
  double objective = 0.0;  // EUR
  std::vector<GridResult> grids;           // members in canonical order
  std::map<std::string, double> interface_p;  // cleared or pinned T^p by dso id
  std::map<std::string, double> interface_q;  // cleared T^q by dso id
  lp::LpSolution solution;                 // primal and full duals

  const GridResult* find_grid(const std::string& so_id) const;
};

/// Solves the model and extracts activations, interface flows, and nodal
/// prices (duals of the labeled injection rows). Non-optimal statuses are
/// reported in the outcome, not thrown.
MarketOutcome clear(const MarketModel& model, const lp::SimplexOptions& options = {});

/// Per-member settlement. Pay-as-bid charges each SO the bid cost of the
/// activations inside its own grid; nodal charges price times net activated
/// volume per node. Member order matches MarketOutcome::grids. Throws
/// MarketError unless the outcome is optimal.
std::vector<std::pair<std::string, double>> settle(const scenario::Scenario& s,
                                                   const MarketOutcome& outcome,
                                                   PricingScheme scheme);

/// JSON / CSV reporting (CSV columns: node, product, volume_mw, price, cost).
std::string outcome_to_json(const scenario::Scenario& s, const MarketOutcome& outcome);
std::string outcome_to_csv(const scenario::Scenario& s, const MarketOutcome& outcome);

}  // namespace flexgame::market
