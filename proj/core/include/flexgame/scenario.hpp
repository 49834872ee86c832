#pragma once

#include <Eigen/Dense>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace flexgame::scenario {

/// Raised on malformed documents or unusable network data. `where` is a
/// dotted path into the offending document field when applicable.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// One flexibility product offer: unit price in EUR/MWh and the maximum
/// activatable volume in MW. Absent offers are zero-quantity offers.
struct Bid {
  double price = 0.0;
  double qmax = 0.0;
};

/// The four products at one node: generation up/down, demand up/down.
/// "up" always means upward flexibility (more injection or less offtake).
struct NodeBids {
  Bid gen_up, gen_down, dem_up, dem_down;
};

struct TransmissionLine {
  std::string from, to;
  double reactance = 0.0;   // p.u. on the system base
  double flow_limit = 0.0;  // MW
};

struct TransmissionNetwork {
  std::vector<std::string> nodes;
  std::vector<TransmissionLine> lines;
  std::vector<std::string> interface_nodes;  // one hosted distribution system each
  std::string slack;

  int node_index(const std::string& id) const;
};

struct FeederLine {
  std::string from, to;  // from is the ancestor side
  double resistance = 0.0, reactance = 0.0;  // p.u.
  double smax = 0.0;                         // MVA
};

/// Radial distribution network plus its interface limits. Voltage bounds are
/// squared magnitudes in p.u.; interface limits are MW / MVAr.
struct RadialNetwork {
  std::string id;
  std::string interface_node;
  std::string root;
  std::vector<FeederLine> lines;
  std::map<std::string, double> vmin, vmax;  // squared p.u. per node
  std::map<std::string, double> qmin, qmax;  // MVAr per node
  double tp_min = 0.0, tp_max = 0.0;
  double tq_min = 0.0, tq_max = 0.0;

  /// Root first, then nodes in order of first appearance in `lines`.
  std::vector<std::string> node_list() const;
};

struct FeederBase {
  std::map<std::string, double> injection;  // p^o, MW
  std::map<std::string, double> offtake;    // d^o, MW
  std::map<std::string, double> reactive;   // base reactive demand, MVAr
};

struct BaseProfile {
  std::map<std::string, double> tso_injection;
  std::map<std::string, double> tso_offtake;
  std::map<std::string, FeederBase> dso;  // keyed by dso id
};

struct BidSet {
  std::map<std::string, NodeBids> tso;                            // keyed by node
  std::map<std::string, std::map<std::string, NodeBids>> dso;     // dso id -> node
};

struct Scenario {
  double base_mva = 100.0;
  TransmissionNetwork transmission;
  std::vector<RadialNetwork> dsos;
  BidSet bids;
  BaseProfile base;
  int polygon_sides = 12;

  const RadialNetwork* find_dso(const std::string& id) const;
};

double map_get(const std::map<std::string, double>& values, const std::string& key,
               double fallback = 0.0);
const NodeBids* find_bids(const std::map<std::string, NodeBids>& bids, const std::string& node);

/// Parses the canonical JSON document (see README for the schema). Applies
/// defaults: slack = first transmission node, polygon_sides = 12,
/// base_mva = 100, absent bids and base entries = 0.
Scenario load_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);

/// Canonical serialization; loading the output reproduces the scenario.
std::string save_scenario(const Scenario& s, int indent = 2);

struct Violation {
  std::string where;
  std::string what;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

/// Checks every structural invariant (connectivity, radiality, bound
/// ordering, referenced node existence, positivity). Never throws; the
/// report carries one entry per violated invariant.
ValidationReport validate(const Scenario& s);

/// DC generation shift factors (PTDF) with respect to the slack node: one
/// row per line, one column per node, slack column identically zero.
struct GsfMatrix {
  Eigen::MatrixXd factors;
};

GsfMatrix compute_gsf(const TransmissionNetwork& t);

/// Half-plane cut of the polygonal inner approximation of the apparent
/// power circle:  alpha * P + beta * Q + delta * smax <= 0.
struct PolygonCut {
  double alpha, beta, delta;
};

/// Cuts at angles (2m+1)*pi/sides, m = 0..sides-1, with delta = -cos(pi/sides)
/// so every polygon vertex lies on the circle of radius smax.
std::vector<PolygonCut> polygon_cuts(int sides);

/// Copy with every DSO's active-power interface limits scaled by `factor`.
Scenario scale_interface_limits(const Scenario& s, double factor);

/// Copy with one DSO re-attached at a different transmission node (used by
/// the placement study). The target must not host another DSO.
Scenario with_dso_relocated(const Scenario& s, const std::string& dso_id,
                            const std::string& new_interface_node);

/// Net base load the feeder presents at its interface: sum of d^o - p^o over
/// all feeder nodes. This is the constant active transfer used whenever the
/// interface is not jointly optimized.
double base_interface_transfer(const Scenario& s, const RadialNetwork& dso);

}  // namespace flexgame::scenario
