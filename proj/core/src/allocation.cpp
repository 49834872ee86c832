#include "flexgame/allocation.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace flexgame::alloc {

using game::GameTable;
using game::game_tolerance;

const char* to_string(Mechanism m) {
  switch (m) {
    case Mechanism::kShapley: return "sv";
    case Mechanism::kBanzhaf: return "b";
    case Mechanism::kBanzhafNormalized: return "bsharp";
    case Mechanism::kCostGap: return "cga";
    case Mechanism::kLagrangian: return "l";
    case Mechanism::kEqualProfit: return "epm";
    case Mechanism::kProportional: return "pca";
  }
  return "?";
}

Mechanism parse_mechanism(const std::string& tag) {
  if (tag == "sv" || tag == "shapley") return Mechanism::kShapley;
  if (tag == "b" || tag == "banzhaf") return Mechanism::kBanzhaf;
  if (tag == "bsharp" || tag == "b#") return Mechanism::kBanzhafNormalized;
  if (tag == "cga") return Mechanism::kCostGap;
  if (tag == "l" || tag == "lagrangian") return Mechanism::kLagrangian;
  if (tag == "epm") return Mechanism::kEqualProfit;
  if (tag == "pca") return Mechanism::kProportional;
  throw AllocationError("unknown mechanism tag '" + tag + "'");
}

const char* to_string(Axiom a) {
  switch (a) {
    case Axiom::kEfficiency: return "efficiency";
    case Axiom::kDummy: return "dummy";
    case Axiom::kSymmetry: return "symmetry";
    case Axiom::kAdditivity: return "additivity";
    case Axiom::kStability: return "stability";
    case Axiom::kAnonymity: return "anonymity";
  }
  return "?";
}

const char* to_string(AxiomVerdict v) {
  switch (v) {
    case AxiomVerdict::kPass: return "pass";
    case AxiomVerdict::kFail: return "fail";
    case AxiomVerdict::kNotApplicable: return "n/a";
  }
  return "?";
}

double Allocation::total() const {
  double t = 0.0;
  for (double c : costs) t += c;
  return t;
}

Allocation shapley(const GameTable& g) {
  const int n = g.num_players();
  Allocation a;
  a.mechanism = Mechanism::kShapley;
  a.players = g.players;
  a.costs.assign(n, 0.0);
  // |C|! (N-|C|-1)! / N!  -- exact in doubles for N <= 16.
  std::vector<double> weight(n);
  double n_fact = 1.0;
  for (int i = 2; i <= n; ++i) n_fact *= i;
  for (int size = 0; size < n; ++size) {
    double f1 = 1.0, f2 = 1.0;
    for (int i = 2; i <= size; ++i) f1 *= i;
    for (int i = 2; i <= n - size - 1; ++i) f2 *= i;
    weight[size] = f1 * f2 / n_fact;
  }
  const std::uint32_t full = g.grand_mask();
  for (int player = 0; player < n; ++player) {
    const std::uint32_t bit = 1u << player;
    const std::uint32_t others = full & ~bit;
    double sv = 0.0;
    for (std::uint32_t c = others;; c = (c - 1) & others) {
      sv += weight[std::popcount(c)] * (g.value(c | bit) - g.value(c));
      if (c == 0) break;
    }
    a.costs[player] = sv;
  }
  return a;
}

std::vector<double> banzhaf_raw(const GameTable& g) {
  const int n = g.num_players();
  std::vector<double> b(n, 0.0);
  const double scale = std::ldexp(1.0, -(n - 1));  // 2^-(N-1)
  const std::uint32_t full = g.grand_mask();
  for (int player = 0; player < n; ++player) {
    const std::uint32_t bit = 1u << player;
    const std::uint32_t others = full & ~bit;
    double sum = 0.0;
    for (std::uint32_t c = others;; c = (c - 1) & others) {
      sum += g.value(c | bit) - g.value(c);
      if (c == 0) break;
    }
    b[player] = scale * sum;
  }
  return b;
}

Allocation banzhaf(const GameTable& g) {
  Allocation a;
  a.mechanism = Mechanism::kBanzhaf;
  a.players = g.players;
  a.costs = banzhaf_raw(g);
  return a;
}

Allocation banzhaf_normalized(const GameTable& g) {
  Allocation a;
  a.mechanism = Mechanism::kBanzhafNormalized;
  a.players = g.players;
  a.costs = banzhaf_raw(g);
  double sum = 0.0;
  for (double b : a.costs) sum += b;
  if (std::abs(sum) <= 1e-12)
    throw AllocationError("normalized Banzhaf undefined: raw indices sum to zero");
  const double factor = g.grand_value() / sum;
  for (double& c : a.costs) c *= factor;
  return a;
}

CostGapData cost_gap_data(const GameTable& g) {
  const int n = g.num_players();
  const std::uint32_t full = g.grand_mask();
  CostGapData data;
  data.marginal.resize(n);
  for (int i = 0; i < n; ++i)
    data.marginal[i] = g.grand_value() - g.value(full & ~(1u << i));
  data.gap.assign(1u << n, 0.0);
  for (std::uint32_t c = 1; c <= full; ++c) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      if (c & (1u << i)) sum += data.marginal[i];
    data.gap[c] = g.value(c) - sum;
  }
  data.weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double w = std::numeric_limits<double>::infinity();
    for (std::uint32_t c = 1; c <= full; ++c)
      if (c & (1u << i)) w = std::min(w, data.gap[c]);
    data.weights[i] = w;
  }
  return data;
}

Allocation cost_gap(const GameTable& g) {
  Allocation a;
  a.mechanism = Mechanism::kCostGap;
  a.players = g.players;
  const auto data = cost_gap_data(g);
  const double tol = game_tolerance(g.grand_value());
  const std::uint32_t full = g.grand_mask();
  for (std::uint32_t c = 1; c <= full; ++c) {
    if (data.gap[c] < -tol) {
      a.applicable = false;
      a.na_reason = "cost gap g(" + g.coalition_label(c) + ") = " + std::to_string(data.gap[c]) +
                    " is negative";
      return a;
    }
  }
  double wsum = 0.0;
  for (double w : data.weights) wsum += w;
  const double non_separable = data.gap[full];
  if (wsum < non_separable - tol) {
    a.applicable = false;
    a.na_reason = "weights sum " + std::to_string(wsum) + " cannot cover the non-separable cost " +
                  std::to_string(non_separable);
    return a;
  }
  a.costs = data.marginal;
  if (non_separable > tol) {
    for (int i = 0; i < g.num_players(); ++i) a.costs[i] += non_separable * data.weights[i] / wsum;
  }
  return a;
}

Allocation lagrangian(const scenario::Scenario& s, const market::MarketModel& grand_model,
                      const market::MarketOutcome& grand_outcome) {
  if (!(grand_model.coalition ==
        market::Coalition::grand(static_cast<int>(s.dsos.size()))))
    throw AllocationError("lagrangian allocation expects the grand-coalition market");
  if (grand_outcome.status != lp::LpStatus::kOptimal)
    throw AllocationError("lagrangian allocation needs an optimal grand-coalition outcome");
  const auto& sol = grand_outcome.solution;
  const auto& p = grand_model.problem;
  if (sol.reduced_costs.size() != p.num_vars())
    throw AllocationError("lagrangian allocation: solution carries no multipliers");
  const double gap = std::abs(sol.objective - lp::dual_objective(p, sol));
  if (gap > 1e-8 * (1.0 + std::abs(sol.objective)))
    throw AllocationError("lagrangian allocation: duality gap " + std::to_string(gap) +
                          " above tolerance");

  Allocation a;
  a.mechanism = Mechanism::kLagrangian;
  a.players.push_back("TSO");
  for (const auto& d : s.dsos) a.players.push_back(d.id);
  a.costs.assign(a.players.size(), 0.0);
  auto credit = [&](const market::Owner& owner, double amount) {
    if (amount == 0.0) return;
    switch (owner.kind) {
      case market::Owner::kTso: a.costs[0] += amount; break;
      case market::Owner::kDso: a.costs[1 + owner.dso_index] += amount; break;
      case market::Owner::kInterface:
        a.costs[0] += 0.5 * amount;
        a.costs[1 + owner.dso_index] += 0.5 * amount;
        break;
    }
  };
  // Dual objective split by ownership: -lambda'd - mu'b plus the active
  // bound terms of every variable.
  for (int i = 0; i < p.num_ineq(); ++i)
    credit(grand_model.ineq_owner[i], -sol.ineq_duals(i) * p.ineq_rhs(i));
  for (int i = 0; i < p.num_eq(); ++i)
    credit(grand_model.eq_owner[i], -sol.eq_duals(i) * p.eq_rhs(i));
  for (int j = 0; j < p.num_vars(); ++j) {
    const double r = sol.reduced_costs(j);
    if (p.lower(j) == p.upper(j)) {
      // A pinned variable is a constant: its term r*x decomposes over the
      // constraints it appears in, exactly as if it had been moved to the
      // right-hand sides.
      const double xj = p.lower(j);
      if (xj == 0.0) continue;
      credit(grand_model.var_owner[j], p.cost(j) * xj);
      for (int i = 0; i < p.num_ineq(); ++i) {
        const double coef = p.ineq(i, j);
        if (coef != 0.0) credit(grand_model.ineq_owner[i], sol.ineq_duals(i) * coef * xj);
      }
      for (int i = 0; i < p.num_eq(); ++i) {
        const double coef = p.eq(i, j);
        if (coef != 0.0) credit(grand_model.eq_owner[i], sol.eq_duals(i) * coef * xj);
      }
      continue;
    }
    double term = 0.0;
    if (r > 1e-9) {
      term = r * p.lower(j);
    } else if (r < -1e-9) {
      term = r * p.upper(j);
    }
    credit(grand_model.var_owner[j], term);
  }
  return a;
}

Allocation equal_profit(const GameTable& g) {
  const int n = g.num_players();
  Allocation a;
  a.mechanism = Mechanism::kEqualProfit;
  a.players = g.players;

  std::vector<double> stand_alone(n);
  std::vector<bool> active(n, true);
  for (int i = 0; i < n; ++i) {
    stand_alone[i] = g.value(1u << i);
    if (stand_alone[i] <= 1e-12) {
      active[i] = false;
      a.notes.push_back("SO " + g.players[i] +
                        " has zero stand-alone cost: pinned to 0 and excluded from the "
                        "relative-savings constraints");
    }
  }

  lp::LpBuilder b;
  const int f = b.add_variable("f", 0.0, lp::kInf, 1.0);
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i)
    y[i] = b.add_variable("y:" + g.players[i], 0.0, active[i] ? lp::kInf : 0.0, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || !active[i] || !active[j]) continue;
      // y_i / v_i - y_j / v_j <= f
      b.add_inequality("pair:" + std::to_string(i) + ":" + std::to_string(j),
                       {{y[i], 1.0 / stand_alone[i]}, {y[j], -1.0 / stand_alone[j]}, {f, -1.0}},
                       0.0);
    }
  }
  const std::uint32_t full = g.grand_mask();
  for (std::uint32_t c = 1; c < full; ++c) {
    lp::LpBuilder::Terms terms;
    for (int i = 0; i < n; ++i)
      if (c & (1u << i)) terms.push_back({y[i], 1.0});
    b.add_inequality("core:" + std::to_string(c), terms, g.value(c));
  }
  {
    lp::LpBuilder::Terms terms;
    for (int i = 0; i < n; ++i) terms.push_back({y[i], 1.0});
    b.add_equality("efficiency", terms, g.grand_value());
  }
  const auto sol = lp::solve_lp(b.build());
  if (sol.status != lp::LpStatus::kOptimal)
    throw AllocationError(std::string("equal profit LP is ") + lp::to_string(sol.status) +
                          " (empty core or negative allocation forced)");
  a.costs.resize(n);
  for (int i = 0; i < n; ++i) a.costs[i] = sol.x(y[i]);
  char note[64];
  std::snprintf(note, sizeof(note), "max pairwise savings gap f = %.6g", sol.x(f));
  a.notes.push_back(note);
  return a;
}

Allocation proportional(const GameTable& g, ProportionalMode mode,
                        const std::vector<double>& volumes) {
  const int n = g.num_players();
  Allocation a;
  a.mechanism = Mechanism::kProportional;
  a.players = g.players;
  std::vector<double> w(n);
  if (mode == ProportionalMode::kStandAlone) {
    for (int i = 0; i < n; ++i) w[i] = g.value(1u << i);
  } else {
    if (static_cast<int>(volumes.size()) != n)
      throw AllocationError("proportional: activated volumes must be given per SO");
    w = volumes;
  }
  double sum = 0.0;
  for (double x : w) sum += x;
  if (!(sum > 0.0))
    throw AllocationError(mode == ProportionalMode::kStandAlone
                              ? "proportional: stand-alone costs sum to zero"
                              : "proportional: activated volumes sum to zero");
  a.costs.resize(n);
  for (int i = 0; i < n; ++i) a.costs[i] = g.grand_value() * w[i] / sum;
  return a;
}

std::vector<double> activated_volumes(const GameTable& g,
                                      const market::MarketOutcome& grand_outcome) {
  std::vector<double> volumes(g.num_players(), 0.0);
  for (int i = 0; i < g.num_players(); ++i) {
    const auto* grid = grand_outcome.find_grid(g.players[i]);
    if (grid == nullptr) continue;
    for (const auto& [node, v] : grid->activations) volumes[i] += v.gross();
  }
  return volumes;
}

std::vector<int> detect_dummies(const GameTable& g) {
  std::vector<int> out;
  const int n = g.num_players();
  const std::uint32_t full = g.grand_mask();
  for (int player = 0; player < n; ++player) {
    const std::uint32_t bit = 1u << player;
    const std::uint32_t others = full & ~bit;
    bool dummy = true;
    for (std::uint32_t c = others; dummy; c = (c - 1) & others) {
      const double m = g.value(c | bit) - g.value(c);
      if (std::abs(m) > game_tolerance(g.value(c | bit))) dummy = false;
      if (c == 0) break;
    }
    if (dummy) out.push_back(player);
  }
  return out;
}

std::vector<std::pair<int, int>> detect_equivalent_pairs(const GameTable& g) {
  std::vector<std::pair<int, int>> out;
  const int n = g.num_players();
  const std::uint32_t full = g.grand_mask();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const std::uint32_t bi = 1u << i, bj = 1u << j;
      const std::uint32_t others = full & ~(bi | bj);
      bool equivalent = true;
      for (std::uint32_t c = others; equivalent; c = (c - 1) & others) {
        if (std::abs(g.value(c | bi) - g.value(c | bj)) > game_tolerance(g.value(c | bi)))
          equivalent = false;
        if (c == 0) break;
      }
      if (equivalent) out.emplace_back(i, j);
    }
  }
  return out;
}

void audit(const GameTable& g, Allocation& a) {
  const double tol = game_tolerance(g.grand_value());
  if (!a.applicable) {
    for (Axiom ax : {Axiom::kEfficiency, Axiom::kDummy, Axiom::kSymmetry, Axiom::kAdditivity,
                     Axiom::kStability, Axiom::kAnonymity})
      a.audit[ax] = AxiomVerdict::kNotApplicable;
    return;
  }
  a.audit[Axiom::kEfficiency] =
      std::abs(a.total() - g.grand_value()) <= tol ? AxiomVerdict::kPass : AxiomVerdict::kFail;
  {
    auto verdict = AxiomVerdict::kPass;
    for (int d : detect_dummies(g))
      if (std::abs(a.costs[d]) > tol) verdict = AxiomVerdict::kFail;
    a.audit[Axiom::kDummy] = verdict;
  }
  {
    auto verdict = AxiomVerdict::kPass;
    for (const auto& [i, j] : detect_equivalent_pairs(g))
      if (std::abs(a.costs[i] - a.costs[j]) > tol) verdict = AxiomVerdict::kFail;
    a.audit[Axiom::kSymmetry] = verdict;
  }
  a.audit[Axiom::kStability] =
      game::in_core(g, a.costs).in_core ? AxiomVerdict::kPass : AxiomVerdict::kFail;
  a.audit[Axiom::kAdditivity] = AxiomVerdict::kNotApplicable;
  a.audit[Axiom::kAnonymity] = AxiomVerdict::kNotApplicable;
}

namespace {
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}
}  // namespace

std::string allocations_to_json(const std::vector<Allocation>& allocations) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& a : allocations) {
    nlohmann::json ja;
    ja["mechanism"] = to_string(a.mechanism);
    ja["applicable"] = a.applicable;
    if (!a.applicable) {
      ja["reason"] = a.na_reason;
    } else {
      nlohmann::json costs = nlohmann::json::object();
      for (std::size_t i = 0; i < a.players.size(); ++i) costs[a.players[i]] = a.costs[i];
      ja["costs_eur"] = std::move(costs);
      ja["total_eur"] = a.total();
    }
    if (!a.audit.empty()) {
      nlohmann::json audit = nlohmann::json::object();
      for (const auto& [ax, verdict] : a.audit) audit[to_string(ax)] = to_string(verdict);
      ja["axioms"] = std::move(audit);
    }
    if (!a.notes.empty()) ja["notes"] = a.notes;
    j.push_back(std::move(ja));
  }
  return j.dump(2);
}

std::string allocations_to_csv(const std::vector<Allocation>& allocations) {
  std::ostringstream os;
  os << "mechanism,so_id,cost_eur,axioms_passed\n";
  for (const auto& a : allocations) {
    std::string passed;
    for (const auto& [ax, verdict] : a.audit) {
      if (verdict != AxiomVerdict::kPass) continue;
      if (!passed.empty()) passed += "|";
      passed += to_string(ax);
    }
    if (!a.applicable) {
      os << to_string(a.mechanism) << ",-,not_applicable,\n";
      continue;
    }
    for (std::size_t i = 0; i < a.players.size(); ++i)
      os << to_string(a.mechanism) << "," << a.players[i] << "," << fmt(a.costs[i]) << "," << passed
         << "\n";
  }
  return os.str();
}

}  // namespace flexgame::alloc
