"""Scores a decomposition by looping over every ordered class pair.

Usage: metrics_table.py CALLS_CSV DECOMPOSITION_JSON LABEL
Prints the metric-by-approach CSV table.
"""
import csv
import itertools
import json
import sys


def main(calls_path, decomposition_path, label):
    with open(calls_path, newline="") as fh:
        rows = list(csv.reader(fh))
    names = rows[0][1:]
    calls = {(a, b): int(x or 0) for a, r in zip(names, rows[1:]) for b, x in zip(names, r[1:]) if a != b}
    with open(decomposition_path) as fh:
        services = [s for s in json.load(fh)["services"] if s["name"] != "__noise__"]
    member = {c: [i for i, s in enumerate(services) if c in s["classes"]] for c in names}
    M = len(services)
    mu = [0] * M
    gamma = {}
    intra = inter = 0
    interface = [set() for _ in range(M)]
    for (u, v), c in calls.items():
        if c == 0:
            continue
        for s in member[u]:
            for t in member[v]:
                if s == t:
                    mu[s] += c
                    intra += c
                else:
                    gamma[frozenset((s, t))] = gamma.get(frozenset((s, t)), 0) + c
                    inter += c
                    interface[t].add(v)
    size = [len(s["classes"]) for s in services]
    scoh = [mu[i] / size[i] ** 2 for i in range(M)]
    if M == 1:
        sm = scoh[0]
    else:
        scop = [gamma.get(frozenset((i, j)), 0) / (2 * size[i] * size[j]) for i, j in itertools.combinations(range(M), 2)]
        sm = sum(scoh) / M - sum(scop) / (M * (M - 1) / 2)
    icp = inter / (inter + intra) if inter + intra else 0.0
    ifn = sum(len(x) for x in interface) / M
    ned = 1 - sum(5 <= n <= 20 for n in size) / M
    counts = {}
    for s in services:
        for c in set(s["classes"]):
            counts[c] = counts.get(c, 0) + 1
    dup = sum(k > 1 for k in counts.values())
    print(f"metric,{label}")
    for key, value in [("SM", sm), ("ICP", icp), ("IFN", ifn), ("NED", ned)]:
        print(f"{key},{float(value)!r}")
    print(f"DUP,{dup}")


if __name__ == "__main__":
    main(*sys.argv[1:4])
