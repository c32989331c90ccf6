#!/usr/bin/env python3
"""Writes a 2x2 coordination market with a one-to-one map.

Both agents gain when they pick the same index (more on index 1), so no
strategy is ever eliminated, yet at a miscoordinated profile the observed sdf
reveals the opponent and switching is an arbitrage.
"""
import json
import sys
from fractions import Fraction as F

from make_staircase import s

# (left, right) utilities in hundredths, by (left index, right index)
PAYOFFS = {(0, 0): (1, 1), (0, 1): (0, 0), (1, 0): (0, F(1, 2)), (1, 1): (3, 3)}


def sdf(k, l, u0, u1):
    q_bond = 1 - F(u0, 100 * k)
    q_risky = l * (1 - q_bond) - F(u1, 100) + F(1, 10)
    return [q_risky, 2 * q_bond - q_risky]


def main():
    entries = []
    for a in range(2):
        for b in range(2):
            u0, u1 = PAYOFFS[(a, b)]
            entries.append({"profile": [a, b], "sdf": [s(x) for x in sdf(a + 1, b + 1, u0, u1)]})
    doc = {
        "version": "1",
        "states": [{"label": "good", "prob": "1/2"}, {"label": "bad", "prob": "1/2"}],
        "assets": {"payoffs": [["1", "1"], ["2", "0"]], "risk_free_index": 0, "gross_rate": "1"},
        "agents": [
            {"name": "left", "strategies": [["1", "0"], ["2", "0"]]},
            {"name": "right", "strategies": [["1", "1"], ["2", "1"]]},
        ],
        "aggregation": {"kind": "tabular", "name": "coordination", "entries": entries},
        "flags": {"mode": "uniform", "max_steps": 100, "tie_break": "lexicographic", "seed": 0, "grid_bound": 1},
    }
    with open(sys.argv[1], "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


if __name__ == "__main__":
    main()
