"""Exhaustive sweep of the continuity classes over small spaces.

Counts, for every ordered pair of classes (p, q), the maps that are p but
not q, and prints the first such map in canonical order.
"""

import argparse
import itertools
import time

import numpy as np

from semihomotopy.finite_space import enumerate_topologies
from semihomotopy.maps import QUERY_CLASSES, SpaceMap, all_maps, class_table


def describe(space) -> str:
    return "{" + " ".join(space.fmt(u) for u in space.opens) + "}"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=3, help="number of points in domain and codomain")
    args = ap.parse_args()

    spaces = tuple(enumerate_topologies(args.points))
    maps = all_maps(args.points, args.points)
    counts = {pq: 0 for pq in itertools.permutations(QUERY_CLASSES, 2)}
    first = {}
    t0 = time.perf_counter()
    for X in spaces:
        for Y in spaces:
            tab = class_table(X, Y)
            for p, q in counts:
                bad = tab[p] & ~tab[q]
                counts[(p, q)] += int(np.count_nonzero(bad))
                if (p, q) not in first and bad.any():
                    first[(p, q)] = SpaceMap(X, Y, tuple(int(v) for v in maps[np.flatnonzero(bad)[0]]))
    elapsed = time.perf_counter() - t0

    total = len(spaces) ** 2 * len(maps)
    print(f"{len(spaces)} topologies, {total} maps, {elapsed:.2f} s")
    for (p, q), n in counts.items():
        verdict = "implies" if n == 0 else f"{n} maps are {p} but not {q}"
        line = f"{p:>10} -> {q:<10} {verdict}"
        if n:
            f = first[(p, q)]
            line += f"; first: {describe(f.domain)} -> {describe(f.codomain)}, images {f.images}"
        print(line)


if __name__ == "__main__":
    main()
