#pragma once

#include "flexgame/scenario.hpp"

#include <cstdint>

namespace flexgame::fixtures {

/// Seeded generator for 1 TSO + N feeder scenarios: base shortage plus one
/// congested transmission spoke, and one overloaded line inside each feeder.
/// Downward bid prices are drawn from [10, 15] EUR/MWh and upward ones from
/// [50, 55] EUR/MWh. With `pinned_interfaces` the interface bounds are set
/// equal to the base transfer, so coupling constraints never bind across
/// members and coalition values decompose exactly; with them free the grand
/// coalition earns strict savings.
struct GeneratorConfig {
  int num_dsos = 3;
  int feeder_nodes = 4;  // including the root, >= 3
  bool pinned_interfaces = true;
  std::uint64_t seed = 0;
};

scenario::Scenario seeded_scenario(const GeneratorConfig& cfg);

/// Two buses, one 10 MW line carrying 15 MW at base; a 10 EUR downward bid
/// at the sending bus and a 50 EUR upward bid at the receiving bus clear at
/// 5 MW each for a 200 EUR redispatch cost.
scenario::Scenario two_bus_congestion();

/// The two-bus case with a balanced feeder at the receiving bus: the feeder
/// has an internal overload of its own plus cheap upward capacity the joint
/// market can export.
scenario::Scenario two_bus_with_feeder();

/// One feeder, two nodes, 4-sided polygon: 15 MW of base load behind a
/// 10 MVA line; a 50 EUR load-reduction bid at the leaf and a free balancing
/// absorption bid at the substation clear exactly the 5 MW overload.
scenario::Scenario feeder_overload_case();

/// Three-bus chain with the congestion on the far segment: an identical
/// feeder helps a lot when placed behind the bottleneck and not at all in
/// front of it.
scenario::Scenario placement_chain();

/// Desk-scale study fixture: 5-bus meshed transmission with a 30 MW base
/// shortage and one congested spoke, three 4-node feeders with internal
/// overloads, cheap feeder generation, and wide (free) interface bounds.
scenario::Scenario desk_case();

}  // namespace flexgame::fixtures
