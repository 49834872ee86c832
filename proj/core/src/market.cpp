#include "flexgame/market.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace flexgame::market {

using scenario::Scenario;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

Coalition Coalition::parse(const std::string& members, const Scenario& s) {
  std::uint32_t mask = 0;
  std::string token;
  auto commit = [&](const std::string& raw) {
    auto a = raw.find_first_not_of(" \t");
    if (a == std::string::npos) return;
    auto b = raw.find_last_not_of(" \t");
    const std::string name = raw.substr(a, b - a + 1);
    if (name == "TSO" || name == "tso") {
      mask |= 1u;
      return;
    }
    if (name == "all") {
      mask |= Coalition::grand(static_cast<int>(s.dsos.size())).mask();
      return;
    }
    for (std::size_t k = 0; k < s.dsos.size(); ++k) {
      if (s.dsos[k].id == name) {
        mask |= 2u << k;
        return;
      }
    }
    throw MarketError("unknown coalition member '" + name + "'");
  };
  for (char c : members) {
    if (c == ',' || c == '+') {
      commit(token);
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  commit(token);
  Coalition out(mask);
  out.check_valid(s);
  return out;
}

int Coalition::size() const { return std::popcount(mask_); }

std::string Coalition::label(const Scenario& s) const {
  std::string out;
  auto append = [&out](const std::string& name) {
    if (!out.empty()) out += "+";
    out += name;
  };
  if (has_tso()) append("TSO");
  for (std::size_t k = 0; k < s.dsos.size(); ++k)
    if (has_dso(static_cast<int>(k))) append(s.dsos[k].id);
  return out;
}

void Coalition::check_valid(const Scenario& s) const {
  if (mask_ == 0) throw MarketError("empty coalition");
  const std::uint32_t all = Coalition::grand(static_cast<int>(s.dsos.size())).mask();
  if (mask_ & ~all) throw MarketError("coalition references DSOs the scenario does not have");
}

const char* to_string(PricingScheme scheme) {
  return scheme == PricingScheme::kPayAsBid ? "payasbid" : "nodal";
}

PricingScheme parse_pricing(const std::string& name) {
  if (name == "payasbid") return PricingScheme::kPayAsBid;
  if (name == "nodal") return PricingScheme::kNodal;
  throw MarketError("unknown pricing scheme '" + name + "' (expected payasbid or nodal)");
}

namespace {

constexpr double kInf = lp::kInf;

struct Builder {
  const Scenario& s;
  const Coalition coalition;
  const BuildOptions& options;
  lp::LpBuilder lp;
  MarketModel model;
  std::vector<scenario::PolygonCut> cuts;

  Builder(const Scenario& s_, Coalition c, const BuildOptions& o)
      : s(s_), coalition(c), options(o), cuts(scenario::polygon_cuts(s_.polygon_sides)) {
    model.source = &s;
    model.coalition = coalition;
  }

  int add_var(const std::string& name, double lo, double up, double cost, Owner owner) {
    model.var_owner.push_back(owner);
    return lp.add_variable(name, lo, up, cost);
  }
  void add_eq(const std::string& name, const lp::LpBuilder::Terms& terms, double rhs, Owner owner,
              bool balance_row = false) {
    model.eq_owner.push_back(owner);
    lp::LpBuilder::Terms full = terms;
    if (balance_row && options.slack_penalty > 0.0) {
      const int sp = add_var(name + ":s+", 0.0, kInf, options.slack_penalty, owner);
      const int sm = add_var(name + ":s-", 0.0, kInf, options.slack_penalty, owner);
      full.push_back({sp, 1.0});
      full.push_back({sm, -1.0});
    }
    lp.add_equality(name, full, rhs);
  }
  void add_ineq(const std::string& name, const lp::LpBuilder::Terms& terms, double rhs,
                Owner owner) {
    model.ineq_owner.push_back(owner);
    lp.add_inequality(name, terms, rhs);
  }

  void create_tso_vars() {
    auto& blk = model.tso;
    blk.present = true;
    const auto& t = s.transmission;
    blk.bids.resize(t.nodes.size());
    blk.injection_var.resize(t.nodes.size());
    blk.flow_var.resize(t.lines.size());
    for (std::size_t n = 0; n < t.nodes.size(); ++n) {
      const auto& node = t.nodes[n];
      const scenario::NodeBids* nb = scenario::find_bids(s.bids.tso, node);
      static const scenario::NodeBids zero{};
      const auto& b = nb ? *nb : zero;
      blk.bids[n].gen_up = add_var("T:gu:" + node, 0.0, b.gen_up.qmax, b.gen_up.price, Owner::tso());
      blk.bids[n].gen_down =
          add_var("T:gd:" + node, 0.0, b.gen_down.qmax, -b.gen_down.price, Owner::tso());
      blk.bids[n].dem_up = add_var("T:du:" + node, 0.0, b.dem_up.qmax, b.dem_up.price, Owner::tso());
      blk.bids[n].dem_down =
          add_var("T:dd:" + node, 0.0, b.dem_down.qmax, -b.dem_down.price, Owner::tso());
    }
    for (std::size_t n = 0; n < t.nodes.size(); ++n)
      blk.injection_var[n] = add_var("T:p:" + t.nodes[n], -kInf, kInf, 0.0, Owner::tso());
    for (std::size_t l = 0; l < t.lines.size(); ++l)
      blk.flow_var[l] = add_var("T:f:" + std::to_string(l) + ":" + t.lines[l].from + "-" +
                                    t.lines[l].to,
                                -kInf, kInf, 0.0, Owner::tso());
  }

  void create_dso_vars(int k) {
    const auto& d = s.dsos[k];
    DsoBlock blk;
    blk.present = true;
    blk.dso_index = k;
    blk.nodes = d.node_list();
    const std::string pre = "D:" + d.id + ":";
    const auto* dso_bids = [&]() -> const std::map<std::string, scenario::NodeBids>* {
      auto it = s.bids.dso.find(d.id);
      return it == s.bids.dso.end() ? nullptr : &it->second;
    }();
    blk.bids.resize(blk.nodes.size());
    blk.q_var.resize(blk.nodes.size());
    blk.injection_var.resize(blk.nodes.size());
    blk.v_var.resize(blk.nodes.size());
    blk.p_flow_var.resize(d.lines.size());
    blk.q_flow_var.resize(d.lines.size());
    for (std::size_t n = 0; n < blk.nodes.size(); ++n) {
      const auto& node = blk.nodes[n];
      static const scenario::NodeBids zero{};
      const scenario::NodeBids* nb = dso_bids ? scenario::find_bids(*dso_bids, node) : nullptr;
      const auto& b = nb ? *nb : zero;
      blk.bids[n].gen_up =
          add_var(pre + "gu:" + node, 0.0, b.gen_up.qmax, b.gen_up.price, Owner::dso(k));
      blk.bids[n].gen_down =
          add_var(pre + "gd:" + node, 0.0, b.gen_down.qmax, -b.gen_down.price, Owner::dso(k));
      blk.bids[n].dem_up =
          add_var(pre + "du:" + node, 0.0, b.dem_up.qmax, b.dem_up.price, Owner::dso(k));
      blk.bids[n].dem_down =
          add_var(pre + "dd:" + node, 0.0, b.dem_down.qmax, -b.dem_down.price, Owner::dso(k));
    }
    for (std::size_t n = 0; n < blk.nodes.size(); ++n)
      blk.q_var[n] = add_var(pre + "q:" + blk.nodes[n], scenario::map_get(d.qmin, blk.nodes[n]),
                             scenario::map_get(d.qmax, blk.nodes[n]), 0.0, Owner::dso(k));
    for (std::size_t n = 0; n < blk.nodes.size(); ++n)
      blk.injection_var[n] = add_var(pre + "p:" + blk.nodes[n], -kInf, kInf, 0.0, Owner::dso(k));
    for (std::size_t l = 0; l < d.lines.size(); ++l) {
      const std::string tag = std::to_string(l) + ":" + d.lines[l].from + "-" + d.lines[l].to;
      blk.p_flow_var[l] = add_var(pre + "fp:" + tag, -kInf, kInf, 0.0, Owner::dso(k));
      blk.q_flow_var[l] = add_var(pre + "fq:" + tag, -kInf, kInf, 0.0, Owner::dso(k));
    }
    for (std::size_t n = 0; n < blk.nodes.size(); ++n)
      blk.v_var[n] = add_var(pre + "v:" + blk.nodes[n], scenario::map_get(d.vmin, blk.nodes[n], 0.81),
                             scenario::map_get(d.vmax, blk.nodes[n], 1.21), 0.0, Owner::dso(k));
    blk.tq_var = add_var(pre + "Tq", d.tq_min, d.tq_max, 0.0, Owner::dso(k));
    if (coalition.has_tso()) {
      // Jointly cleared interface: the transfer becomes a bounded decision
      // shared between the transmission balance and the feeder root balance.
      blk.tp_var = add_var(pre + "Tp", d.tp_min, d.tp_max, 0.0, Owner::interface(k));
    } else {
      blk.tp_var = -1;
      blk.tp_fixed = scenario::base_interface_transfer(s, d);
    }
    model.dsos.push_back(std::move(blk));
  }

  DsoBlock* member_block(int dso_index) {
    for (auto& b : model.dsos)
      if (b.dso_index == dso_index) return &b;
    return nullptr;
  }

  void build_tso_rows() {
    const auto& t = s.transmission;
    auto& blk = model.tso;
    blk.injection_row.resize(t.nodes.size());
    blk.balance_row.resize(t.nodes.size());
    const scenario::GsfMatrix gsf = scenario::compute_gsf(t);

    // Net-injection definition; its dual is the nodal price.
    for (std::size_t n = 0; n < t.nodes.size(); ++n) {
      const auto& node = t.nodes[n];
      const double rhs = scenario::map_get(s.base.tso_injection, node) -
                         scenario::map_get(s.base.tso_offtake, node);
      blk.injection_row[n] = static_cast<int>(model.eq_owner.size());
      add_eq("T:inj:" + node,
             {{blk.injection_var[n], 1.0},
              {blk.bids[n].gen_up, -1.0},
              {blk.bids[n].gen_down, 1.0},
              {blk.bids[n].dem_up, -1.0},
              {blk.bids[n].dem_down, 1.0}},
             rhs, Owner::tso());
    }

    // Flows from generation shift factors; interface transfers withdraw at
    // their hosting node.
    for (std::size_t l = 0; l < t.lines.size(); ++l) {
      lp::LpBuilder::Terms terms{{blk.flow_var[l], 1.0}};
      double rhs = 0.0;
      for (std::size_t n = 0; n < t.nodes.size(); ++n) {
        const double x = gsf.factors(l, n);
        if (x != 0.0) terms.push_back({blk.injection_var[n], -x});
      }
      for (std::size_t k = 0; k < s.dsos.size(); ++k) {
        const int iface = t.node_index(s.dsos[k].interface_node);
        const double x = gsf.factors(l, iface);
        if (x == 0.0) continue;
        if (const DsoBlock* mb = member_block(static_cast<int>(k)); mb && mb->tp_var >= 0) {
          terms.push_back({mb->tp_var, x});
        } else {
          rhs -= x * scenario::base_interface_transfer(s, s.dsos[k]);
        }
      }
      add_eq("T:gsf:" + std::to_string(l), terms, rhs, Owner::tso());
    }

    // Nodal energy balance, with the transfer at interface nodes.
    std::vector<lp::LpBuilder::Terms> bal(t.nodes.size());
    std::vector<double> bal_rhs(t.nodes.size(), 0.0);
    for (std::size_t n = 0; n < t.nodes.size(); ++n)
      bal[n].push_back({blk.injection_var[n], 1.0});
    for (std::size_t l = 0; l < t.lines.size(); ++l) {
      bal[t.node_index(t.lines[l].from)].push_back({blk.flow_var[l], -1.0});
      bal[t.node_index(t.lines[l].to)].push_back({blk.flow_var[l], 1.0});
    }
    for (std::size_t k = 0; k < s.dsos.size(); ++k) {
      const int iface = t.node_index(s.dsos[k].interface_node);
      if (const DsoBlock* mb = member_block(static_cast<int>(k)); mb && mb->tp_var >= 0) {
        bal[iface].push_back({mb->tp_var, -1.0});
      } else {
        bal_rhs[iface] += scenario::base_interface_transfer(s, s.dsos[k]);
      }
    }
    for (std::size_t n = 0; n < t.nodes.size(); ++n) {
      blk.balance_row[n] = static_cast<int>(model.eq_owner.size());
      add_eq("T:bal:" + t.nodes[n], bal[n], bal_rhs[n], Owner::tso(), /*balance_row=*/true);
    }

    for (std::size_t l = 0; l < t.lines.size(); ++l) {
      add_ineq("T:flmax:" + std::to_string(l), {{blk.flow_var[l], 1.0}}, t.lines[l].flow_limit,
               Owner::tso());
      add_ineq("T:flmin:" + std::to_string(l), {{blk.flow_var[l], -1.0}}, t.lines[l].flow_limit,
               Owner::tso());
    }
  }

  void build_dso_rows(DsoBlock& blk) {
    const auto& d = s.dsos[blk.dso_index];
    const std::string pre = "D:" + d.id + ":";
    const auto& nodes = blk.nodes;
    auto pos_of = [&nodes](const std::string& id) {
      return static_cast<int>(std::find(nodes.begin(), nodes.end(), id) - nodes.begin());
    };
    const auto* fb = [&]() -> const scenario::FeederBase* {
      auto it = s.base.dso.find(d.id);
      return it == s.base.dso.end() ? nullptr : &it->second;
    }();
    auto base_p = [&](const std::string& n) {
      return fb ? scenario::map_get(fb->injection, n) - scenario::map_get(fb->offtake, n) : 0.0;
    };
    auto base_q = [&](const std::string& n) {
      return fb ? scenario::map_get(fb->reactive, n) : 0.0;
    };

    blk.injection_row.resize(nodes.size());
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      blk.injection_row[n] = static_cast<int>(model.eq_owner.size());
      add_eq(pre + "inj:" + nodes[n],
             {{blk.injection_var[n], 1.0},
              {blk.bids[n].gen_up, -1.0},
              {blk.bids[n].gen_down, 1.0},
              {blk.bids[n].dem_up, -1.0},
              {blk.bids[n].dem_down, 1.0}},
             base_p(nodes[n]), Owner::dso(blk.dso_index));
    }

    // LinDistFlow balances: per-node terms gathered over the ancestor line
    // and every child line.
    std::vector<lp::LpBuilder::Terms> pbal(nodes.size()), qbal(nodes.size());
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      pbal[n].push_back({blk.injection_var[n], 1.0});
      qbal[n].push_back({blk.q_var[n], 1.0});
    }
    for (std::size_t l = 0; l < d.lines.size(); ++l) {
      const int head = pos_of(d.lines[l].to);
      const int tail = pos_of(d.lines[l].from);
      pbal[head].push_back({blk.p_flow_var[l], 1.0});
      qbal[head].push_back({blk.q_flow_var[l], 1.0});
      pbal[tail].push_back({blk.p_flow_var[l], -1.0});
      qbal[tail].push_back({blk.q_flow_var[l], -1.0});
    }
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      if (nodes[n] == d.root) continue;
      add_eq(pre + "pbal:" + nodes[n], pbal[n], 0.0, Owner::dso(blk.dso_index), true);
      add_eq(pre + "qbal:" + nodes[n], qbal[n], base_q(nodes[n]), Owner::dso(blk.dso_index), true);
    }
    {
      // Root balances carry the interface transfers.
      const int r = pos_of(d.root);
      lp::LpBuilder::Terms proot = pbal[r];
      double prhs = 0.0;
      if (blk.tp_var >= 0) {
        proot.push_back({blk.tp_var, 1.0});
      } else {
        prhs -= blk.tp_fixed;
      }
      add_eq(pre + "proot", proot, prhs, Owner::dso(blk.dso_index), true);
      lp::LpBuilder::Terms qroot = qbal[r];
      qroot.push_back({blk.tq_var, 1.0});
      add_eq(pre + "qroot", qroot, base_q(d.root), Owner::dso(blk.dso_index), true);
    }

    // Voltage drop along each line (squared magnitudes, LinDistFlow).
    for (std::size_t l = 0; l < d.lines.size(); ++l) {
      const auto& line = d.lines[l];
      add_eq(pre + "vdrop:" + line.to,
             {{blk.v_var[pos_of(line.to)], 1.0},
              {blk.v_var[pos_of(line.from)], -1.0},
              {blk.p_flow_var[l], 2.0 * line.resistance / s.base_mva},
              {blk.q_flow_var[l], 2.0 * line.reactance / s.base_mva}},
             0.0, Owner::dso(blk.dso_index));
    }

    // Polygonal inner approximation of |S| <= smax per line.
    for (std::size_t l = 0; l < d.lines.size(); ++l) {
      for (std::size_t m = 0; m < cuts.size(); ++m) {
        add_ineq(pre + "poly:" + std::to_string(l) + ":" + std::to_string(m),
                 {{blk.p_flow_var[l], cuts[m].alpha}, {blk.q_flow_var[l], cuts[m].beta}},
                 -cuts[m].delta * d.lines[l].smax, Owner::dso(blk.dso_index));
      }
    }
  }

  MarketModel run() {
    coalition.check_valid(s);
    if (coalition.has_tso()) create_tso_vars();
    for (std::size_t k = 0; k < s.dsos.size(); ++k)
      if (coalition.has_dso(static_cast<int>(k))) create_dso_vars(static_cast<int>(k));
    if (coalition.has_tso()) build_tso_rows();
    for (auto& blk : model.dsos) build_dso_rows(blk);
    model.problem = lp.build();
    return std::move(model);
  }
};

}  // namespace

MarketModel build_market(const Scenario& s, Coalition coalition, const BuildOptions& options) {
  Builder builder(s, coalition, options);
  return builder.run();
}

MarketModel build_disjoint_tso(const Scenario& s, const BuildOptions& options) {
  return build_market(s, Coalition::tso_only(), options);
}

MarketModel build_disjoint_dso(const Scenario& s, const std::string& dso_id,
                               const BuildOptions& options) {
  for (std::size_t k = 0; k < s.dsos.size(); ++k)
    if (s.dsos[k].id == dso_id)
      return build_market(s, Coalition::dso_only(static_cast<int>(k)), options);
  throw MarketError("unknown dso '" + dso_id + "'");
}

const GridResult* MarketOutcome::find_grid(const std::string& so_id) const {
  for (const auto& g : grids)
    if (g.so_id == so_id) return &g;
  return nullptr;
}

MarketOutcome clear(const MarketModel& model, const lp::SimplexOptions& options) {
  const Scenario& s = *model.source;
  MarketOutcome out;
  out.coalition = model.coalition;
  out.solution = lp::solve_lp(model.problem, options);
  out.status = out.solution.status;
  if (out.status != lp::LpStatus::kOptimal) return out;
  out.objective = out.solution.objective;

  const auto& x = out.solution.x;
  auto read_grid = [&](const std::string& so_id, const std::vector<std::string>& nodes,
                       const std::vector<BidVarRef>& bids, const std::vector<int>& price_rows) {
    GridResult g;
    g.so_id = so_id;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      ProductVolumes v;
      v.gen_up = x(bids[n].gen_up);
      v.gen_down = x(bids[n].gen_down);
      v.dem_up = x(bids[n].dem_up);
      v.dem_down = x(bids[n].dem_down);
      g.activations[nodes[n]] = v;
      g.nodal_price[nodes[n]] = out.solution.eq_duals(price_rows[n]);
    }
    return g;
  };

  if (model.tso.present)
    out.grids.push_back(read_grid("TSO", s.transmission.nodes, model.tso.bids,
                                  model.tso.injection_row));
  for (const auto& blk : model.dsos) {
    const auto& d = s.dsos[blk.dso_index];
    out.grids.push_back(read_grid(d.id, blk.nodes, blk.bids, blk.injection_row));
    out.interface_q[d.id] = x(blk.tq_var);
    out.interface_p[d.id] = blk.tp_var >= 0 ? x(blk.tp_var) : blk.tp_fixed;
  }
  if (model.tso.present) {
    // Transfers of absent counterparts stay pinned at base.
    for (std::size_t k = 0; k < s.dsos.size(); ++k)
      if (!out.interface_p.count(s.dsos[k].id))
        out.interface_p[s.dsos[k].id] = scenario::base_interface_transfer(s, s.dsos[k]);
  }
  return out;
}

std::vector<std::pair<std::string, double>> settle(const Scenario& s, const MarketOutcome& outcome,
                                                   PricingScheme scheme) {
  if (outcome.status != lp::LpStatus::kOptimal)
    throw MarketError("settle: outcome for coalition is " +
                      std::string(lp::to_string(outcome.status)));
  std::vector<std::pair<std::string, double>> result;
  for (const auto& g : outcome.grids) {
    double cost = 0.0;
    if (scheme == PricingScheme::kPayAsBid) {
      const std::map<std::string, scenario::NodeBids>* bids =
          g.so_id == "TSO" ? &s.bids.tso : nullptr;
      if (!bids) {
        auto it = s.bids.dso.find(g.so_id);
        static const std::map<std::string, scenario::NodeBids> empty;
        bids = it == s.bids.dso.end() ? &empty : &it->second;
      }
      for (const auto& [node, v] : g.activations) {
        static const scenario::NodeBids zero{};
        const auto* nb = scenario::find_bids(*bids, node);
        const auto& b = nb ? *nb : zero;
        cost += b.gen_up.price * v.gen_up - b.gen_down.price * v.gen_down +
                b.dem_up.price * v.dem_up - b.dem_down.price * v.dem_down;
      }
    } else {
      for (const auto& [node, v] : g.activations) cost += g.nodal_price.at(node) * v.net();
    }
    result.emplace_back(g.so_id, cost);
  }
  return result;
}

std::string outcome_to_json(const Scenario& s, const MarketOutcome& outcome) {
  nlohmann::json j;
  j["coalition"] = outcome.coalition.label(s);
  j["status"] = lp::to_string(outcome.status);
  if (outcome.status == lp::LpStatus::kOptimal) {
    j["objective_eur"] = outcome.objective;
    j["interface_p_mw"] = outcome.interface_p;
    j["interface_q_mvar"] = outcome.interface_q;
    j["grids"] = nlohmann::json::array();
    for (const auto& g : outcome.grids) {
      nlohmann::json jg;
      jg["so_id"] = g.so_id;
      nlohmann::json acts = nlohmann::json::object();
      for (const auto& [node, v] : g.activations)
        acts[node] = {{"gen_up", v.gen_up},
                      {"gen_down", v.gen_down},
                      {"dem_up", v.dem_up},
                      {"dem_down", v.dem_down}};
      jg["activations_mw"] = std::move(acts);
      jg["nodal_price_eur_mwh"] = g.nodal_price;
      j["grids"].push_back(std::move(jg));
    }
    j["iterations"] = outcome.solution.iterations;
  }
  return j.dump(2);
}

std::string outcome_to_csv(const Scenario& s, const MarketOutcome& outcome) {
  std::ostringstream os;
  os << "node,product,volume_mw,price,cost\n";
  if (outcome.status != lp::LpStatus::kOptimal) return os.str();
  for (const auto& g : outcome.grids) {
    const std::map<std::string, scenario::NodeBids>* bids = nullptr;
    if (g.so_id == "TSO") {
      bids = &s.bids.tso;
    } else if (auto it = s.bids.dso.find(g.so_id); it != s.bids.dso.end()) {
      bids = &it->second;
    }
    for (const auto& [node, v] : g.activations) {
      static const scenario::NodeBids zero{};
      const auto* nb = bids ? scenario::find_bids(*bids, node) : nullptr;
      const auto& b = nb ? *nb : zero;
      struct Row {
        const char* product;
        double volume;
        double price;
        double sign;
      } rows[] = {{"gen_up", v.gen_up, b.gen_up.price, 1.0},
                  {"gen_down", v.gen_down, b.gen_down.price, -1.0},
                  {"dem_up", v.dem_up, b.dem_up.price, 1.0},
                  {"dem_down", v.dem_down, b.dem_down.price, -1.0}};
      for (const auto& r : rows) {
        if (std::abs(r.volume) < 1e-12) continue;
        os << g.so_id << ":" << node << "," << r.product << "," << fmt(r.volume) << ","
           << fmt(r.price) << "," << fmt(r.sign * r.price * r.volume) << "\n";
      }
    }
  }
  return os.str();
}

}  // namespace flexgame::market
