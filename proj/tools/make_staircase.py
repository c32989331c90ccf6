#!/usr/bin/env python3
"""Writes the two-agent staircase scenario used by the order-jump golden test.

Agent 0 holds k units of the bond (k = 1..8), agent 1 holds l units of the
bond plus one unit of the risky asset (l = 1..7). The tabular map picks, for
every profile, the sdf that gives agent 0 a gain of V0(k, l)/100 and agent 1
a bad-state gain of V1(k, l)/100 - 1/10, where

    V0(k, l) = k if k <= l + 1 else 0
    V1(k, l) = l if l <= k + 1 else 0

so each elimination round removes exactly the lowest surviving strategy of
each agent. With --perturb, every sdf gets a distinct tiny shift in the
good state, which makes the map one-to-one.

--pool parity|pairs replaces the map by a coarse one on the same market
(pooling profiles by the parity of k + l, or by l // 2); the two coarse
maps are not comparable by responsiveness and feed the sweep tests.
"""
import argparse
import json
from fractions import Fraction as F

N0, N1 = 8, 7


def s(x):
    x = F(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def v0(k, l):
    return k if k <= l + 1 else 0


def v1(k, l):
    return l if l <= k + 1 else 0


def sdf(k, l, shift):
    q_bond = 1 - F(v0(k, l), 100 * k)
    q_risky = l * (1 - q_bond) - F(v1(k, l), 100) + F(1, 10) + shift
    # prices with probabilities (1/2, 1/2): bond = (m1 + m2)/2, risky = m1
    m1 = q_risky
    m2 = 2 * q_bond - q_risky
    assert m1 > 0 and m2 > 0
    return [m1, m2]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--perturb", action="store_true")
    ap.add_argument("--pool", choices=["parity", "pairs"])
    ap.add_argument("out")
    args = ap.parse_args()
    entries = []
    for a in range(N0):
        for b in range(N1):
            shift = F(a * N1 + b, 10**6) if args.perturb else F(0)
            # shifts stay far below the 1/100 utility steps, so the ladder is unchanged
            if args.pool == "parity":
                m = [F(1), F(1) + F((a + b) % 2, 2)]
            elif args.pool == "pairs":
                m = [F(1), F(1) + F(b // 2, 8)]
            else:
                m = sdf(a + 1, b + 1, shift)
            entries.append({"profile": [a, b], "sdf": [s(x) for x in m]})
    doc = {
        "version": "1",
        "states": [{"label": "good", "prob": "1/2"}, {"label": "bad", "prob": "1/2"}],
        "assets": {"payoffs": [["1", "1"], ["2", "0"]], "risk_free_index": 0, "gross_rate": "1"},
        "agents": [
            {"name": "bond_holder", "strategies": [[s(k), "0"] for k in range(1, N0 + 1)]},
            {"name": "mixed_holder", "strategies": [[s(l), "1"] for l in range(1, N1 + 1)]},
        ],
        "aggregation": {"kind": "tabular", "name": args.pool or "staircase", "entries": entries},
        "flags": {"mode": "uniform", "max_steps": 100, "tie_break": "lexicographic", "seed": 0, "grid_bound": 1},
    }
    with open(args.out, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


if __name__ == "__main__":
    main()
