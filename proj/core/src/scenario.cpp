#include "flexgame/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

namespace flexgame::scenario {

using nlohmann::json;

int TransmissionNetwork::node_index(const std::string& id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i] == id) return static_cast<int>(i);
  return -1;
}

std::vector<std::string> RadialNetwork::node_list() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  out.push_back(root);
  seen.insert(root);
  for (const auto& line : lines) {
    for (const auto* id : {&line.from, &line.to}) {
      if (seen.insert(*id).second) out.push_back(*id);
    }
  }
  return out;
}

const RadialNetwork* Scenario::find_dso(const std::string& id) const {
  for (const auto& d : dsos)
    if (d.id == id) return &d;
  return nullptr;
}

double map_get(const std::map<std::string, double>& values, const std::string& key,
               double fallback) {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

const NodeBids* find_bids(const std::map<std::string, NodeBids>& bids, const std::string& node) {
  auto it = bids.find(node);
  return it == bids.end() ? nullptr : &it->second;
}

namespace {

// ---- document reading with path-carrying errors ----

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ScenarioError(path, "expected a number");
  return j.get<double>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ScenarioError(path, "expected a string");
  return j.get<std::string>();
}

const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ScenarioError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ScenarioError(path + "." + key, "missing required field");
  return *it;
}

const json* optional_member(const json& j, const char* key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

std::map<std::string, double> read_number_map(const json& j, const std::string& path) {
  std::map<std::string, double> out;
  if (!j.is_object()) throw ScenarioError(path, "expected an object of node -> number");
  for (auto it = j.begin(); it != j.end(); ++it)
    out[it.key()] = as_number(it.value(), path + "." + it.key());
  return out;
}

// Per-node map with optional "*" wildcard default.
std::map<std::string, double> read_node_values(const json* j, const std::string& path,
                                               const std::vector<std::string>& nodes,
                                               double fallback, bool has_fallback) {
  std::map<std::string, double> raw;
  if (j != nullptr) raw = read_number_map(*j, path);
  double def = fallback;
  bool have_def = has_fallback;
  if (auto it = raw.find("*"); it != raw.end()) {
    def = it->second;
    have_def = true;
    raw.erase(it);
  }
  std::map<std::string, double> out;
  for (const auto& n : nodes) {
    auto it = raw.find(n);
    if (it != raw.end()) {
      out[n] = it->second;
    } else if (have_def) {
      out[n] = def;
    }
  }
  for (const auto& [k, v] : raw)
    out.emplace(k, v);  // keep unknown nodes so validation can flag them
  return out;
}

Bid read_bid(const json& j, const std::string& path) {
  Bid b;
  b.price = as_number(member(j, "price", path), path + ".price");
  b.qmax = as_number(member(j, "qmax", path), path + ".qmax");
  return b;
}

NodeBids read_node_bids(const json& j, const std::string& path) {
  NodeBids nb;
  if (const json* g = optional_member(j, "gen_up")) nb.gen_up = read_bid(*g, path + ".gen_up");
  if (const json* g = optional_member(j, "gen_down")) nb.gen_down = read_bid(*g, path + ".gen_down");
  if (const json* g = optional_member(j, "dem_up")) nb.dem_up = read_bid(*g, path + ".dem_up");
  if (const json* g = optional_member(j, "dem_down")) nb.dem_down = read_bid(*g, path + ".dem_down");
  return nb;
}

json bid_to_json(const Bid& b) { return json{{"price", b.price}, {"qmax", b.qmax}}; }

json node_bids_to_json(const NodeBids& nb) {
  json j = json::object();
  if (nb.gen_up.qmax != 0.0 || nb.gen_up.price != 0.0) j["gen_up"] = bid_to_json(nb.gen_up);
  if (nb.gen_down.qmax != 0.0 || nb.gen_down.price != 0.0) j["gen_down"] = bid_to_json(nb.gen_down);
  if (nb.dem_up.qmax != 0.0 || nb.dem_up.price != 0.0) j["dem_up"] = bid_to_json(nb.dem_up);
  if (nb.dem_down.qmax != 0.0 || nb.dem_down.price != 0.0) j["dem_down"] = bid_to_json(nb.dem_down);
  return j;
}

}  // namespace

Scenario load_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError("", std::string("document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ScenarioError("$", "top level must be an object");

  Scenario s;
  if (const json* j = optional_member(doc, "base_mva"))
    s.base_mva = as_number(*j, "$.base_mva");
  if (const json* j = optional_member(doc, "polygon_sides")) {
    if (!j->is_number_integer()) throw ScenarioError("$.polygon_sides", "expected an integer");
    s.polygon_sides = j->get<int>();
  }

  const json& t = member(doc, "transmission", "$");
  for (const auto& n : member(t, "nodes", "$.transmission"))
    s.transmission.nodes.push_back(as_string(n, "$.transmission.nodes[]"));
  {
    int i = 0;
    for (const auto& l : member(t, "lines", "$.transmission")) {
      const std::string path = "$.transmission.lines[" + std::to_string(i++) + "]";
      TransmissionLine line;
      line.from = as_string(member(l, "from", path), path + ".from");
      line.to = as_string(member(l, "to", path), path + ".to");
      line.reactance = as_number(member(l, "x", path), path + ".x");
      line.flow_limit = as_number(member(l, "fmax", path), path + ".fmax");
      s.transmission.lines.push_back(std::move(line));
    }
  }
  if (const json* j = optional_member(t, "interface_nodes"))
    for (const auto& n : *j)
      s.transmission.interface_nodes.push_back(as_string(n, "$.transmission.interface_nodes[]"));
  if (const json* j = optional_member(t, "slack")) {
    s.transmission.slack = as_string(*j, "$.transmission.slack");
  } else if (!s.transmission.nodes.empty()) {
    s.transmission.slack = s.transmission.nodes.front();
  }

  if (const json* dsos = optional_member(doc, "dsos")) {
    int i = 0;
    for (const auto& d : *dsos) {
      const std::string path = "$.dsos[" + std::to_string(i++) + "]";
      RadialNetwork rn;
      rn.id = as_string(member(d, "id", path), path + ".id");
      rn.interface_node = as_string(member(d, "interface_node", path), path + ".interface_node");
      rn.root = as_string(member(d, "root", path), path + ".root");
      int k = 0;
      for (const auto& l : member(d, "lines", path)) {
        const std::string lpath = path + ".lines[" + std::to_string(k++) + "]";
        FeederLine line;
        line.from = as_string(member(l, "from", lpath), lpath + ".from");
        line.to = as_string(member(l, "to", lpath), lpath + ".to");
        line.resistance = as_number(member(l, "r", lpath), lpath + ".r");
        line.reactance = as_number(member(l, "x", lpath), lpath + ".x");
        line.smax = as_number(member(l, "smax", lpath), lpath + ".smax");
        rn.lines.push_back(std::move(line));
      }
      const auto nodes = rn.node_list();
      rn.vmin = read_node_values(optional_member(d, "vmin"), path + ".vmin", nodes, 0.81, true);
      rn.vmax = read_node_values(optional_member(d, "vmax"), path + ".vmax", nodes, 1.21, true);
      rn.qmin = read_node_values(optional_member(d, "qmin"), path + ".qmin", nodes, 0.0, true);
      rn.qmax = read_node_values(optional_member(d, "qmax"), path + ".qmax", nodes, 0.0, true);
      rn.tp_min = as_number(member(d, "tp_min", path), path + ".tp_min");
      rn.tp_max = as_number(member(d, "tp_max", path), path + ".tp_max");
      rn.tq_min = as_number(member(d, "tq_min", path), path + ".tq_min");
      rn.tq_max = as_number(member(d, "tq_max", path), path + ".tq_max");
      s.dsos.push_back(std::move(rn));
    }
  }

  if (const json* base = optional_member(doc, "base")) {
    if (const json* bt = optional_member(*base, "transmission")) {
      if (const json* p = optional_member(*bt, "p"))
        s.base.tso_injection = read_number_map(*p, "$.base.transmission.p");
      if (const json* d = optional_member(*bt, "d"))
        s.base.tso_offtake = read_number_map(*d, "$.base.transmission.d");
    }
    if (const json* bd = optional_member(*base, "dsos")) {
      for (auto it = bd->begin(); it != bd->end(); ++it) {
        const std::string path = "$.base.dsos." + it.key();
        FeederBase fb;
        if (const json* p = optional_member(it.value(), "p"))
          fb.injection = read_number_map(*p, path + ".p");
        if (const json* d = optional_member(it.value(), "d"))
          fb.offtake = read_number_map(*d, path + ".d");
        if (const json* q = optional_member(it.value(), "q"))
          fb.reactive = read_number_map(*q, path + ".q");
        s.base.dso[it.key()] = std::move(fb);
      }
    }
  }

  if (const json* bids = optional_member(doc, "bids")) {
    if (const json* bt = optional_member(*bids, "transmission")) {
      for (auto it = bt->begin(); it != bt->end(); ++it)
        s.bids.tso[it.key()] = read_node_bids(it.value(), "$.bids.transmission." + it.key());
    }
    if (const json* bd = optional_member(*bids, "dsos")) {
      for (auto it = bd->begin(); it != bd->end(); ++it) {
        for (auto nt = it.value().begin(); nt != it.value().end(); ++nt)
          s.bids.dso[it.key()][nt.key()] =
              read_node_bids(nt.value(), "$.bids.dsos." + it.key() + "." + nt.key());
      }
    }
  }
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path, "cannot open scenario file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

std::string save_scenario(const Scenario& s, int indent) {
  json doc;
  doc["base_mva"] = s.base_mva;
  doc["polygon_sides"] = s.polygon_sides;
  json t;
  t["nodes"] = s.transmission.nodes;
  t["lines"] = json::array();
  for (const auto& l : s.transmission.lines)
    t["lines"].push_back({{"from", l.from}, {"to", l.to}, {"x", l.reactance}, {"fmax", l.flow_limit}});
  t["interface_nodes"] = s.transmission.interface_nodes;
  t["slack"] = s.transmission.slack;
  doc["transmission"] = std::move(t);
  doc["dsos"] = json::array();
  for (const auto& d : s.dsos) {
    json jd;
    jd["id"] = d.id;
    jd["interface_node"] = d.interface_node;
    jd["root"] = d.root;
    jd["lines"] = json::array();
    for (const auto& l : d.lines)
      jd["lines"].push_back(
          {{"from", l.from}, {"to", l.to}, {"r", l.resistance}, {"x", l.reactance}, {"smax", l.smax}});
    jd["vmin"] = d.vmin;
    jd["vmax"] = d.vmax;
    jd["qmin"] = d.qmin;
    jd["qmax"] = d.qmax;
    jd["tp_min"] = d.tp_min;
    jd["tp_max"] = d.tp_max;
    jd["tq_min"] = d.tq_min;
    jd["tq_max"] = d.tq_max;
    doc["dsos"].push_back(std::move(jd));
  }
  json base;
  base["transmission"] = {{"p", s.base.tso_injection}, {"d", s.base.tso_offtake}};
  base["dsos"] = json::object();
  for (const auto& [id, fb] : s.base.dso)
    base["dsos"][id] = {{"p", fb.injection}, {"d", fb.offtake}, {"q", fb.reactive}};
  doc["base"] = std::move(base);
  json bids;
  bids["transmission"] = json::object();
  for (const auto& [node, nb] : s.bids.tso) bids["transmission"][node] = node_bids_to_json(nb);
  bids["dsos"] = json::object();
  for (const auto& [id, nodes] : s.bids.dso) {
    json jn = json::object();
    for (const auto& [node, nb] : nodes) jn[node] = node_bids_to_json(nb);
    bids["dsos"][id] = std::move(jn);
  }
  doc["bids"] = std::move(bids);
  return doc.dump(indent);
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) os << v.where << ": " << v.what << "\n";
  return os.str();
}

namespace {

bool transmission_connected(const TransmissionNetwork& t) {
  if (t.nodes.empty()) return false;
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& l : t.lines) {
    adj[l.from].push_back(l.to);
    adj[l.to].push_back(l.from);
  }
  std::set<std::string> seen{t.nodes.front()};
  std::queue<std::string> q;
  q.push(t.nodes.front());
  while (!q.empty()) {
    auto n = q.front();
    q.pop();
    for (const auto& m : adj[n])
      if (seen.insert(m).second) q.push(m);
  }
  return seen.size() >= t.nodes.size();
}

}  // namespace

ValidationReport validate(const Scenario& s) {
  ValidationReport rep;
  auto flag = [&rep](std::string where, std::string what) {
    rep.violations.push_back({std::move(where), std::move(what)});
  };

  const auto& t = s.transmission;
  if (t.nodes.empty()) flag("transmission.nodes", "at least one node is required");
  {
    std::set<std::string> ids(t.nodes.begin(), t.nodes.end());
    if (ids.size() != t.nodes.size()) flag("transmission.nodes", "duplicate node ids");
    if (!t.slack.empty() && !ids.count(t.slack))
      flag("transmission.slack", "slack node '" + t.slack + "' is not a transmission node");
    for (std::size_t i = 0; i < t.lines.size(); ++i) {
      const auto& l = t.lines[i];
      const std::string where = "transmission.lines[" + std::to_string(i) + "]";
      if (!ids.count(l.from) || !ids.count(l.to)) flag(where, "endpoint is not a known node");
      if (!(l.reactance > 0.0)) flag(where, "reactance must be strictly positive");
      if (!(l.flow_limit > 0.0)) flag(where, "flow limit must be strictly positive");
    }
    if (!t.nodes.empty() && !transmission_connected(t))
      flag("transmission", "graph is not connected");
    std::set<std::string> iface;
    for (const auto& n : t.interface_nodes) {
      if (!ids.count(n)) flag("transmission.interface_nodes", "'" + n + "' is not a node");
      if (!iface.insert(n).second)
        flag("transmission.interface_nodes", "duplicate interface '" + n + "'");
    }
    std::map<std::string, int> hosts;
    for (const auto& d : s.dsos) ++hosts[d.interface_node];
    for (const auto& [node, count] : hosts) {
      if (!iface.count(node))
        flag("dsos", "interface node '" + node + "' is not listed in interface_nodes");
      if (count > 1) flag("transmission.interface_nodes", "duplicate interface: '" + node +
                                                              "' hosts " + std::to_string(count) +
                                                              " distribution systems");
    }
    for (const auto& n : iface)
      if (!hosts.count(n)) flag("transmission.interface_nodes", "'" + n + "' hosts no DSO");
  }

  std::set<std::string> dso_ids;
  for (const auto& d : s.dsos) {
    const std::string where = "dsos." + d.id;
    if (!dso_ids.insert(d.id).second) flag("dsos", "duplicate dso id '" + d.id + "'");

    // Radiality: every non-root node has exactly one ancestor line and is
    // reachable from the root.
    const auto nodes = d.node_list();
    std::map<std::string, std::vector<std::string>> children;
    std::set<std::string> has_parent;
    bool radial = true;
    for (const auto& l : d.lines) {
      if (l.to == d.root || !has_parent.insert(l.to).second) radial = false;
      children[l.from].push_back(l.to);
      if (!(l.smax > 0.0)) flag(where, "line (" + l.from + "," + l.to + ") smax must be positive");
      if (l.resistance < 0.0 || l.reactance < 0.0)
        flag(where, "line (" + l.from + "," + l.to + ") has a negative impedance");
    }
    std::set<std::string> seen{d.root};
    std::queue<std::string> q;
    q.push(d.root);
    while (!q.empty()) {
      auto n = q.front();
      q.pop();
      for (const auto& c : children[n])
        if (seen.insert(c).second) q.push(c);
    }
    if (seen.size() != nodes.size() || d.lines.size() + 1 != nodes.size()) radial = false;
    if (!radial) flag(where, "radiality violated at dso " + d.id);

    for (const auto& n : nodes) {
      const bool has_v = d.vmin.count(n) && d.vmax.count(n);
      if (!has_v) {
        flag(where + ".vmin", "voltage bounds missing for node " + n);
      } else if (!(d.vmin.at(n) < d.vmax.at(n))) {
        flag(where, "vmin >= vmax at node " + n);
      }
      if (d.qmin.count(n) && d.qmax.count(n) && d.qmin.at(n) > d.qmax.at(n))
        flag(where, "qmin > qmax at node " + n);
    }
    if (d.tp_min > d.tp_max) flag(where, "tp_min > tp_max");
    if (d.tq_min > d.tq_max) flag(where, "tq_min > tq_max");
    if (s.transmission.node_index(d.interface_node) < 0)
      flag(where, "interface node '" + d.interface_node + "' is not a transmission node");
  }

  for (const auto& [node, nb] : s.bids.tso) {
    if (s.transmission.node_index(node) < 0)
      flag("bids.transmission", "bid at unknown node '" + node + "'");
    for (const auto* b : {&nb.gen_up, &nb.gen_down, &nb.dem_up, &nb.dem_down}) {
      if (b->qmax < 0.0) flag("bids.transmission." + node, "negative bid quantity");
      if (!std::isfinite(b->price) || !std::isfinite(b->qmax))
        flag("bids.transmission." + node, "non-finite bid");
    }
  }
  for (const auto& [id, nodes] : s.bids.dso) {
    const auto* d = s.find_dso(id);
    if (d == nullptr) {
      flag("bids.dsos", "bids for unknown dso '" + id + "'");
      continue;
    }
    const auto known = d->node_list();
    for (const auto& [node, nb] : nodes) {
      if (std::find(known.begin(), known.end(), node) == known.end())
        flag("bids.dsos." + id, "bid at unknown node '" + node + "'");
      for (const auto* b : {&nb.gen_up, &nb.gen_down, &nb.dem_up, &nb.dem_down})
        if (b->qmax < 0.0) flag("bids.dsos." + id + "." + node, "negative bid quantity");
    }
  }

  auto check_profile = [&](const std::map<std::string, double>& m, const std::string& where,
                           auto in_grid) {
    for (const auto& [node, value] : m) {
      if (!std::isfinite(value)) flag(where + "." + node, "non-finite base value");
      if (!in_grid(node)) flag(where, "entry for unknown node '" + node + "'");
    }
  };
  auto in_tso = [&](const std::string& n) { return s.transmission.node_index(n) >= 0; };
  check_profile(s.base.tso_injection, "base.transmission.p", in_tso);
  check_profile(s.base.tso_offtake, "base.transmission.d", in_tso);
  for (const auto& [id, fb] : s.base.dso) {
    const auto* d = s.find_dso(id);
    if (d == nullptr) {
      flag("base.dsos", "base profile for unknown dso '" + id + "'");
      continue;
    }
    const auto known = d->node_list();
    auto in_dso = [&known](const std::string& n) {
      return std::find(known.begin(), known.end(), n) != known.end();
    };
    check_profile(fb.injection, "base.dsos." + id + ".p", in_dso);
    check_profile(fb.offtake, "base.dsos." + id + ".d", in_dso);
    check_profile(fb.reactive, "base.dsos." + id + ".q", in_dso);
  }

  if (s.polygon_sides < 4) flag("polygon_sides", "polygon needs at least 4 sides");
  if (!(s.base_mva > 0.0)) flag("base_mva", "system base must be positive");
  return rep;
}

GsfMatrix compute_gsf(const TransmissionNetwork& t) {
  const int n = static_cast<int>(t.nodes.size());
  const int m = static_cast<int>(t.lines.size());
  if (n == 0) throw ScenarioError("transmission", "empty network");
  if (!transmission_connected(t))
    throw ScenarioError("transmission", "graph is disconnected: susceptance matrix is singular");
  const int slack = t.node_index(t.slack);
  if (slack < 0) throw ScenarioError("transmission.slack", "unknown slack node");

  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (const auto& l : t.lines) {
    const int i = t.node_index(l.from);
    const int j = t.node_index(l.to);
    if (i < 0 || j < 0) throw ScenarioError("transmission.lines", "unknown endpoint");
    if (!(l.reactance > 0.0))
      throw ScenarioError("transmission.lines", "non-positive reactance on (" + l.from + "," + l.to + ")");
    const double y = 1.0 / l.reactance;
    b(i, i) += y;
    b(j, j) += y;
    b(i, j) -= y;
    b(j, i) -= y;
  }
  // Reduced system without the slack row/column.
  Eigen::MatrixXd br(n - 1, n - 1);
  std::vector<int> red;
  for (int i = 0; i < n; ++i)
    if (i != slack) red.push_back(i);
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j < n - 1; ++j) br(i, j) = b(red[i], red[j]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(br);
  if (!lu.isInvertible())
    throw ScenarioError("transmission", "reduced susceptance matrix is singular");
  const Eigen::MatrixXd z_red = lu.inverse();
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j < n - 1; ++j) z(red[i], red[j]) = z_red(i, j);

  GsfMatrix g;
  g.factors = Eigen::MatrixXd::Zero(m, n);
  for (int l = 0; l < m; ++l) {
    const int i = t.node_index(t.lines[l].from);
    const int j = t.node_index(t.lines[l].to);
    const double y = 1.0 / t.lines[l].reactance;
    for (int k = 0; k < n; ++k) {
      if (k == slack) continue;
      g.factors(l, k) = y * (z(i, k) - z(j, k));
    }
  }
  return g;
}

std::vector<PolygonCut> polygon_cuts(int sides) {
  if (sides < 4) throw ScenarioError("polygon_sides", "polygon needs at least 4 sides");
  std::vector<PolygonCut> cuts;
  cuts.reserve(sides);
  const double pi = std::acos(-1.0);
  const double delta = -std::cos(pi / sides);
  for (int m = 0; m < sides; ++m) {
    const double theta = (2.0 * m + 1.0) * pi / sides;
    cuts.push_back({std::cos(theta), std::sin(theta), delta});
  }
  return cuts;
}

Scenario scale_interface_limits(const Scenario& s, double factor) {
  if (!(factor > 0.0)) throw ScenarioError("factor", "interface scaling factor must be positive");
  Scenario out = s;
  for (auto& d : out.dsos) {
    d.tp_min *= factor;
    d.tp_max *= factor;
  }
  return out;
}

Scenario with_dso_relocated(const Scenario& s, const std::string& dso_id,
                            const std::string& new_interface_node) {
  Scenario out = s;
  RadialNetwork* target = nullptr;
  for (auto& d : out.dsos)
    if (d.id == dso_id) target = &d;
  if (target == nullptr) throw ScenarioError("dsos", "unknown dso '" + dso_id + "'");
  if (out.transmission.node_index(new_interface_node) < 0)
    throw ScenarioError("transmission", "'" + new_interface_node + "' is not a transmission node");
  for (const auto& d : out.dsos)
    if (d.id != dso_id && d.interface_node == new_interface_node)
      throw ScenarioError("dsos", "node '" + new_interface_node + "' already hosts dso '" + d.id + "'");
  auto& iface = out.transmission.interface_nodes;
  std::replace(iface.begin(), iface.end(), target->interface_node, new_interface_node);
  target->interface_node = new_interface_node;
  return out;
}

double base_interface_transfer(const Scenario& s, const RadialNetwork& dso) {
  auto it = s.base.dso.find(dso.id);
  double transfer = 0.0;
  if (it == s.base.dso.end()) return 0.0;
  for (const auto& n : dso.node_list())
    transfer += map_get(it->second.offtake, n) - map_get(it->second.injection, n);
  return transfer;
}

}  // namespace flexgame::scenario
