#!/usr/bin/env python3
"""Builds the desk-scale interconnected test scenario.

Transmission side: the IEEE 14-bus network (standard branch reactances on a
100 MVA base), with base demand added and line limits adapted so the
starting point shows congestion and imbalance. Distribution side: three
radial feeders of 18, 69, and 141 nodes (synthetic trees with typical
per-unit impedances at those sizes) attached at buses 5, 9, and 14.

Bids: downward prices drawn uniformly from [10, 15] EUR/MWh, upward from
[50, 55] EUR/MWh, seeded for reproducibility. Every congested element has
relief capacity placed where it can act, so all coalition markets clear.

Usage: make_ieee14_fixture.py [out.json]
"""
import json
import math
import random
import sys

import numpy as np

# from, to, x (p.u.); standard IEEE 14-bus branch reactances
IEEE14_LINES = [
    (1, 2, 0.05917), (1, 5, 0.22304), (2, 3, 0.19797), (2, 4, 0.17632),
    (2, 5, 0.17388), (3, 4, 0.17103), (4, 5, 0.04211), (4, 7, 0.20912),
    (4, 9, 0.55618), (5, 6, 0.25202), (6, 11, 0.19890), (6, 12, 0.25581),
    (6, 13, 0.13027), (7, 8, 0.17615), (7, 9, 0.11001), (9, 10, 0.08450),
    (9, 14, 0.27038), (10, 11, 0.19207), (12, 13, 0.19988), (13, 14, 0.34802),
]

BASE_LOAD = {2: 21.7, 3: 44.2, 4: 27.8, 5: 17.6, 6: 11.2, 9: 19.5,
             10: 9.0, 11: 3.5, 12: 6.1, 13: 13.5, 14: 14.9}

FEEDERS = [("DN18", 5, 18), ("DN69", 9, 69), ("DN141", 14, 141)]

SHORTAGE = 25.0  # MW the transmission base is short of


def dc_flows(net_injection):
    """Line flows for the given nodal net injections (slack = bus 1)."""
    n = 14
    b = np.zeros((n, n))
    for i, j, x in IEEE14_LINES:
        y = 1.0 / x
        b[i - 1, i - 1] += y
        b[j - 1, j - 1] += y
        b[i - 1, j - 1] -= y
        b[j - 1, i - 1] -= y
    theta = np.zeros(n)
    theta[1:] = np.linalg.solve(b[1:, 1:], net_injection[1:])
    return [(theta[i - 1] - theta[j - 1]) / x for i, j, x in IEEE14_LINES]


def feeder(rng, name, interface, nodes):
    """Random radial tree, feeder-like (chains with short laterals), two
    congested segments with relief capacity below them."""
    ids = [f"{name}b{i}" for i in range(nodes)]
    lines, load, qload = [], {}, {}
    for i in range(1, nodes):
        parent = i - 1 if rng.random() < 0.7 else rng.randrange(0, i)
        lines.append({
            "from": ids[parent], "to": ids[i],
            "r": round(rng.uniform(0.005, 0.03), 5),
            "x": round(rng.uniform(0.01, 0.05), 5),
            "smax": 0.0,
        })
        load[ids[i]] = round(rng.uniform(0.1, 0.8), 3)
        if i % 10 == 5:
            qload[ids[i]] = 0.02
    children = {}
    for ln in lines:
        children.setdefault(ln["from"], []).append(ln)

    def downstream(node, table):
        total = table.get(node, 0.0)
        for ln in children.get(node, []):
            total += downstream(ln["to"], table)
        return total

    eligible = [k for k, ln in enumerate(lines) if downstream(ln["to"], load) > 2.0]
    tight = set(rng.sample(eligible, k=min(2, len(eligible))))
    bids = {}
    total_overload = 0.0
    for k, ln in enumerate(lines):
        p = downstream(ln["to"], load)
        q = downstream(ln["to"], qload)
        if k in tight:
            ln["smax"] = round(math.hypot(0.82 * p, 1.2 * q + 0.05), 3)
            overload = p - 0.8 * p  # relief that restores feasibility with margin
            total_overload += overload
            head = ln["to"]
            bids.setdefault(head, {})["dem_up"] = {
                "price": round(rng.uniform(50, 55), 2), "qmax": round(overload + 3.0, 3)}
        else:
            ln["smax"] = round(math.hypot(1.5 * p + 2.0, 1.5 * q + 0.3), 3)
    # Balancing absorption and export capacity near the substation.
    bids.setdefault(ids[0], {})["dem_down"] = {
        "price": round(rng.uniform(10, 15), 2), "qmax": round(total_overload + 6.0, 3)}
    bids.setdefault(ids[1], {})["gen_up"] = {
        "price": round(rng.uniform(50, 55), 2), "qmax": 10.0}
    for i in rng.sample(range(1, nodes), k=max(3, nodes // 5)):
        b = bids.setdefault(ids[i], {})
        if rng.random() < 0.5:
            b.setdefault("dem_up", {"price": round(rng.uniform(50, 55), 2),
                                    "qmax": round(rng.uniform(0.5, 2.0), 3)})
        if rng.random() < 0.4:
            b.setdefault("gen_down", {"price": round(rng.uniform(10, 15), 2),
                                      "qmax": round(rng.uniform(0.5, 2.0), 3)})
    transfer = round(sum(load.values()), 3)
    dso = {
        "id": name,
        "interface_node": str(interface),
        "root": ids[0],
        "lines": lines,
        "vmin": {"*": 0.81},
        "vmax": {"*": 1.21},
        "qmin": {"*": 0.0},
        "qmax": {"*": 0.0},
        "tp_min": round(-2.0 * transfer - 10.0, 3),
        "tp_max": round(2.0 * transfer + 10.0, 3),
        "tq_min": -5.0,
        "tq_max": 5.0,
    }
    base = {"p": {}, "d": load, "q": qload}
    return dso, base, bids, transfer


def main():
    out_path = sys.argv[1] if len(sys.argv) > 1 else "ieee14_3dso.json"
    rng = random.Random(20240)
    doc = {
        "base_mva": 100,
        "polygon_sides": 12,
        "transmission": {
            "nodes": [str(i) for i in range(1, 15)],
            "lines": [],
            "interface_nodes": [str(i) for (_, i, _) in FEEDERS],
            "slack": "1",
        },
        "dsos": [],
        "base": {"transmission": {"p": {}, "d": {}}, "dsos": {}},
        "bids": {"transmission": {}, "dsos": {}},
    }

    transfers = {}
    for name, iface, nodes in FEEDERS:
        dso, base, bids, transfer = feeder(rng, name, iface, nodes)
        doc["dsos"].append(dso)
        doc["base"]["dsos"][name] = base
        doc["bids"]["dsos"][name] = bids
        transfers[iface] = transfer

    total = sum(BASE_LOAD.values()) + sum(transfers.values())
    gen = {1: round(total * 0.65 - SHORTAGE, 3), 2: round(total * 0.35, 3)}
    doc["base"]["transmission"]["p"] = {str(k): v for k, v in gen.items()}
    doc["base"]["transmission"]["d"] = {str(k): v for k, v in BASE_LOAD.items()}

    # Flows for the balanced approximation (slack covers the shortage), used
    # to adapt the line limits: headroom everywhere, two corridors tight.
    inj = np.zeros(14)
    for k, v in gen.items():
        inj[k - 1] += v
    for k, v in BASE_LOAD.items():
        inj[k - 1] -= v
    for k, v in transfers.items():
        inj[k - 1] -= v
    inj[0] += SHORTAGE
    flows = dc_flows(inj)
    relief = {(9, 14): 6.0, (2, 3): 8.0}
    for (i, j, x), f in zip(IEEE14_LINES, flows):
        limit = round(max(abs(f) * 1.3, abs(f) + 5.0), 2)
        if (i, j) in relief:
            limit = round(max(abs(f) - relief[(i, j)], 2.0), 2)
        doc["transmission"]["lines"].append(
            {"from": str(i), "to": str(j), "x": x, "fmax": limit})

    # Upward backstops sized to cover shortage plus both reliefs; targeted
    # bids at the tight corridors' receiving ends.
    tb = doc["bids"]["transmission"]
    for bus in (1, 2, 6, 8):
        tb[str(bus)] = {
            "gen_up": {"price": round(rng.uniform(50, 55), 2), "qmax": 25.0},
            "gen_down": {"price": round(rng.uniform(10, 15), 2), "qmax": 20.0},
        }
    for bus in (3, 14):  # behind the tightened corridors
        tb[str(bus)] = {
            "gen_up": {"price": round(rng.uniform(50, 55), 2), "qmax": 20.0},
            "dem_up": {"price": round(rng.uniform(50, 55), 2), "qmax": 12.0},
        }
    tb["9"] = {"gen_up": {"price": round(rng.uniform(50, 55), 2), "qmax": 15.0}}

    with open(out_path, "w") as f:
        json.dump(doc, f, indent=1, sort_keys=True)
        f.write("\n")
    print(f"wrote {out_path}")


if __name__ == "__main__":
    main()
