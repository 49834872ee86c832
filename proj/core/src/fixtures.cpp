#include "flexgame/fixtures.hpp"

#include <array>
#include <cmath>
#include <random>
#include <string>

namespace flexgame::fixtures {

using scenario::Bid;
using scenario::NodeBids;
using scenario::RadialNetwork;
using scenario::Scenario;

namespace {

// Uniform double from the raw 64-bit stream, independent of the standard
// library's distribution implementation.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

double up_price(std::mt19937_64& rng) { return uniform(rng, 50.0, 55.0); }
double down_price(std::mt19937_64& rng) { return uniform(rng, 10.0, 15.0); }

void set_uniform_bounds(RadialNetwork& d, double vmin, double vmax) {
  for (const auto& n : d.node_list()) {
    d.vmin[n] = vmin;
    d.vmax[n] = vmax;
    d.qmin[n] = 0.0;
    d.qmax[n] = 0.0;
  }
}

}  // namespace

Scenario seeded_scenario(const GeneratorConfig& cfg) {
  if (cfg.feeder_nodes < 3)
    throw scenario::ScenarioError("feeder_nodes", "generator needs at least 3 nodes per feeder");
  std::mt19937_64 rng(cfg.seed);
  Scenario s;
  s.polygon_sides = 12;

  auto& t = s.transmission;
  t.nodes.push_back("T1");
  t.slack = "T1";

  double hub_injection = 0.0;
  const double shortage = uniform(rng, 5.0, 15.0);

  for (int k = 0; k < cfg.num_dsos; ++k) {
    const std::string spoke = "T" + std::to_string(k + 2);
    t.nodes.push_back(spoke);
    t.interface_nodes.push_back(spoke);
    const double spoke_load = uniform(rng, 5.0, 15.0);
    s.base.tso_offtake[spoke] = spoke_load;
    hub_injection += spoke_load;

    RadialNetwork d;
    d.id = "D" + std::to_string(k + 1);
    d.interface_node = spoke;
    d.root = d.id + "n0";
    scenario::FeederBase fb;
    double downstream_after = 0.0;  // load strictly below the first segment
    double transfer = 0.0;
    for (int n = 1; n < cfg.feeder_nodes; ++n) {
      const std::string from = d.id + "n" + std::to_string(n - 1);
      const std::string to = d.id + "n" + std::to_string(n);
      scenario::FeederLine line;
      line.from = from;
      line.to = to;
      line.resistance = uniform(rng, 0.005, 0.02);
      line.reactance = uniform(rng, 0.01, 0.03);
      line.smax = 0.0;  // filled once loads are known
      d.lines.push_back(line);
      const double load = uniform(rng, 2.0, 8.0);
      fb.offtake[to] = load;
      fb.reactive[to] = uniform(rng, 0.0, 0.3);
      transfer += load;
      if (n >= 2) downstream_after += load;
    }
    // Overload the second segment; everything else gets headroom. Relief
    // needs load reduction below the bottleneck plus absorption above it.
    double below = transfer;
    for (std::size_t l = 0; l < d.lines.size(); ++l) {
      const double flow = below;
      below -= fb.offtake.at(d.lines[l].to);
      d.lines[l].smax = l == 1 ? flow * uniform(rng, 0.55, 0.8) : flow * 1.5 + 2.0;
    }
    const double overload = downstream_after - d.lines[1].smax;

    auto& bids = s.bids.dso[d.id];
    const std::string n1 = d.id + "n1";
    bids[n1].dem_down = Bid{down_price(rng), overload + 4.0};
    for (int n = 2; n < cfg.feeder_nodes; ++n) {
      const std::string node = d.id + "n" + std::to_string(n);
      bids[node].dem_up = Bid{up_price(rng), overload * 0.8 + 2.0};
    }
    if (!cfg.pinned_interfaces) {
      // Cheap feeder generation the common market can export upward.
      bids[n1].gen_up = Bid{up_price(rng), uniform(rng, 8.0, 14.0)};
      bids[n1].gen_down = Bid{down_price(rng), uniform(rng, 3.0, 6.0)};
    }

    set_uniform_bounds(d, 0.81, 1.21);
    double q_total = 0.0;
    for (const auto& [node, q] : fb.reactive) q_total += q;
    d.tq_min = -(2.0 + q_total);
    d.tq_max = 2.0 + q_total;
    if (cfg.pinned_interfaces) {
      d.tp_min = d.tp_max = transfer;
    } else {
      d.tp_max = std::max(25.0, 5.0 * transfer);
      d.tp_min = -d.tp_max;
    }
    hub_injection += transfer;
    s.base.dso[d.id] = std::move(fb);
    s.dsos.push_back(std::move(d));
  }

  // Spoke lines; the first one is congested at base, the rest have margin.
  for (int k = 0; k < cfg.num_dsos; ++k) {
    const std::string spoke = "T" + std::to_string(k + 2);
    const double base_flow = scenario::map_get(s.base.tso_offtake, spoke) +
                             scenario::base_interface_transfer(s, s.dsos[k]);
    scenario::TransmissionLine line;
    line.from = "T1";
    line.to = spoke;
    line.reactance = uniform(rng, 0.05, 0.2);
    line.flow_limit = k == 0 ? base_flow - uniform(rng, 2.0, 5.0) : base_flow + uniform(rng, 5.0, 20.0);
    t.lines.push_back(line);
  }

  s.base.tso_injection["T1"] = hub_injection - shortage;

  // Upward backstops everywhere, downward at the hub for the congestion swap.
  const double spoke0_overload =
      scenario::map_get(s.base.tso_offtake, "T2") +
      scenario::base_interface_transfer(s, s.dsos[0]) - t.lines[0].flow_limit;
  s.bids.tso["T1"].gen_up = Bid{up_price(rng), shortage + uniform(rng, 8.0, 15.0)};
  s.bids.tso["T1"].gen_down = Bid{down_price(rng), spoke0_overload + uniform(rng, 5.0, 10.0)};
  for (int k = 0; k < cfg.num_dsos; ++k) {
    const std::string spoke = "T" + std::to_string(k + 2);
    s.bids.tso[spoke].gen_up = Bid{up_price(rng), spoke0_overload + uniform(rng, 6.0, 12.0)};
  }
  return s;
}

Scenario two_bus_congestion() {
  Scenario s;
  s.polygon_sides = 12;
  s.transmission.nodes = {"B1", "B2"};
  s.transmission.slack = "B1";
  s.transmission.lines.push_back({"B1", "B2", 0.1, 10.0});
  s.base.tso_injection["B1"] = 15.0;
  s.base.tso_offtake["B2"] = 15.0;
  s.bids.tso["B1"].gen_down = Bid{10.0, 10.0};
  s.bids.tso["B2"].gen_up = Bid{50.0, 10.0};
  return s;
}

Scenario two_bus_with_feeder() {
  Scenario s = two_bus_congestion();
  s.transmission.interface_nodes = {"B2"};
  RadialNetwork d;
  d.id = "D1";
  d.interface_node = "B2";
  d.root = "x0";
  d.lines.push_back({"x0", "x1", 0.01, 0.02, 4.0});
  set_uniform_bounds(d, 0.81, 1.21);
  d.tp_min = -30.0;
  d.tp_max = 30.0;
  d.tq_min = -10.0;
  d.tq_max = 10.0;
  scenario::FeederBase fb;
  fb.injection["x0"] = 6.0;  // balanced feeder: zero base transfer
  fb.offtake["x1"] = 6.0;
  s.base.dso["D1"] = fb;
  auto& bids = s.bids.dso["D1"];
  bids["x1"].dem_up = Bid{40.0, 8.0};
  bids["x0"].gen_down = Bid{12.0, 8.0};
  bids["x1"].gen_up = Bid{30.0, 10.0};
  s.dsos.push_back(std::move(d));
  return s;
}

Scenario feeder_overload_case() {
  Scenario s;
  s.polygon_sides = 4;
  s.transmission.nodes = {"R"};
  s.transmission.slack = "R";
  s.transmission.interface_nodes = {"R"};
  RadialNetwork d;
  d.id = "F";
  d.interface_node = "R";
  d.root = "g0";
  d.lines.push_back({"g0", "g1", 0.01, 0.02, 10.0});
  set_uniform_bounds(d, 0.81, 1.21);
  d.tp_min = -40.0;
  d.tp_max = 40.0;
  d.tq_min = -10.0;
  d.tq_max = 10.0;
  scenario::FeederBase fb;
  fb.offtake["g1"] = 15.0;
  s.base.dso["F"] = fb;
  auto& bids = s.bids.dso["F"];
  bids["g1"].dem_up = Bid{50.0, 10.0};
  bids["g0"].dem_down = Bid{0.0, 20.0};  // substation absorbs at no cost
  s.dsos.push_back(std::move(d));
  return s;
}

Scenario placement_chain() {
  Scenario s;
  s.polygon_sides = 12;
  s.transmission.nodes = {"P1", "P2", "P3"};
  s.transmission.slack = "P1";
  s.transmission.lines.push_back({"P1", "P2", 0.1, 100.0});
  s.transmission.lines.push_back({"P2", "P3", 0.1, 10.0});
  s.transmission.interface_nodes = {"P2"};
  s.base.tso_injection["P1"] = 40.0;
  s.base.tso_offtake["P2"] = 10.0;
  s.base.tso_offtake["P3"] = 25.0;
  s.bids.tso["P3"].gen_up = Bid{70.0, 30.0};
  s.bids.tso["P2"].gen_up = Bid{65.0, 30.0};
  s.bids.tso["P1"].gen_down = Bid{10.0, 50.0};

  RadialNetwork d;
  d.id = "DX";
  d.interface_node = "P2";
  d.root = "x0";
  d.lines.push_back({"x0", "x1", 0.01, 0.02, 30.0});
  set_uniform_bounds(d, 0.81, 1.21);
  d.tp_min = -40.0;
  d.tp_max = 40.0;
  d.tq_min = -10.0;
  d.tq_max = 10.0;
  scenario::FeederBase fb;
  fb.offtake["x1"] = 5.0;
  s.base.dso["DX"] = fb;
  s.bids.dso["DX"]["x1"].gen_up = Bid{45.0, 20.0};
  s.dsos.push_back(std::move(d));
  return s;
}

namespace {

RadialNetwork desk_feeder(Scenario& s, const std::string& id, const std::string& iface,
                          const std::array<double, 3>& loads, const std::array<double, 3>& smax,
                          double tp_bound) {
  RadialNetwork d;
  d.id = id;
  d.interface_node = iface;
  d.root = id + "n0";
  const char* suffix[3] = {"n1", "n2", "n3"};
  scenario::FeederBase fb;
  std::string prev = d.root;
  for (int i = 0; i < 3; ++i) {
    const std::string node = id + suffix[i];
    d.lines.push_back({prev, node, 0.01 + 0.002 * i, 0.02 + 0.004 * i, smax[i]});
    fb.offtake[node] = loads[i];
    fb.reactive[node] = 0.2;
    prev = node;
  }
  set_uniform_bounds(d, 0.81, 1.21);
  d.tp_min = -tp_bound;
  d.tp_max = tp_bound;
  d.tq_min = -8.0;
  d.tq_max = 8.0;
  s.base.dso[id] = fb;
  return d;
}

}  // namespace

Scenario desk_case() {
  Scenario s;
  s.polygon_sides = 12;
  auto& t = s.transmission;
  t.nodes = {"T1", "T2", "T3", "T4", "T5"};
  t.slack = "T1";
  t.lines.push_back({"T1", "T2", 0.10, 60.0});
  t.lines.push_back({"T2", "T3", 0.10, 30.0});
  t.lines.push_back({"T1", "T4", 0.08, 80.0});
  t.lines.push_back({"T4", "T5", 0.12, 40.0});
  t.lines.push_back({"T2", "T4", 0.15, 50.0});
  t.interface_nodes = {"T3", "T4", "T5"};

  s.base.tso_injection["T1"] = 85.0;  // 45 MW short of loads plus transfers
  s.base.tso_offtake["T2"] = 25.0;
  s.base.tso_offtake["T3"] = 30.0;
  s.base.tso_offtake["T4"] = 20.0;
  s.base.tso_offtake["T5"] = 10.0;

  s.bids.tso["T1"].gen_up = Bid{61.0, 55.0};
  s.bids.tso["T1"].gen_down = Bid{12.0, 20.0};
  s.bids.tso["T2"].gen_up = Bid{64.0, 20.0};
  s.bids.tso["T2"].dem_down = Bid{11.0, 15.0};
  s.bids.tso["T3"].gen_up = Bid{62.0, 25.0};

  // Feeder bottleneck sits on the second segment of each chain. DA hosts the
  // deep cheap generation, so tight interface factors clamp the exchange.
  s.dsos.push_back(desk_feeder(s, "DA", "T3", {6.0, 8.0, 6.0}, {60.0, 9.0, 12.0}, 105.0));
  s.dsos.push_back(desk_feeder(s, "DB", "T4", {5.0, 6.0, 4.0}, {30.0, 8.0, 10.0}, 85.0));
  s.dsos.push_back(desk_feeder(s, "DC", "T5", {4.0, 3.0, 3.0}, {25.0, 5.0, 8.0}, 65.0));

  auto& da = s.bids.dso["DA"];
  da["DAn2"].dem_up = Bid{52.0, 8.0};
  da["DAn3"].dem_up = Bid{54.0, 6.0};
  da["DAn1"].dem_down = Bid{13.0, 10.0};
  da["DAn1"].gen_up = Bid{50.0, 50.0};
  da["DAn1"].gen_down = Bid{13.5, 10.0};
  auto& db = s.bids.dso["DB"];
  db["DBn2"].dem_up = Bid{53.0, 6.0};
  db["DBn1"].dem_down = Bid{12.0, 8.0};
  db["DBn1"].gen_up = Bid{54.5, 4.0};
  db["DBn1"].gen_down = Bid{14.0, 8.0};
  auto& dc = s.bids.dso["DC"];
  dc["DCn2"].dem_up = Bid{51.0, 5.0};
  dc["DCn1"].dem_down = Bid{15.0, 6.0};
  dc["DCn1"].gen_up = Bid{54.8, 4.0};
  dc["DCn1"].gen_down = Bid{13.0, 5.0};
  return s;
}

}  // namespace flexgame::fixtures
