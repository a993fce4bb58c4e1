"""Shared helpers: independent brute-force oracles and tiny graph builders.

The oracles are deliberately naive (exhaustive enumeration, direct formula
evaluation) so they cannot share bugs with the optimized implementations they
check.
"""

from __future__ import annotations

import itertools
import random

from echosim.graph import DirectedGraph


def graph_from_edges(n: int, edges) -> DirectedGraph:
    g = DirectedGraph(n)
    for u, v in edges:
        g.add_edge(u, v)
    return g


def random_graph(rng: random.Random, n: int, e: int) -> DirectedGraph:
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    return graph_from_edges(n, rng.sample(pairs, e))


# -- brute-force oracles -----------------------------------------------------

def brute_triads(g: DirectedGraph) -> tuple[int, int]:
    """(closed, open) by exhaustive enumeration of all ordered triplets."""
    closed = 0
    opened = 0
    for i, j, k in itertools.permutations(range(g.n), 3):
        present = sum((g.has_edge(i, j), g.has_edge(j, k), g.has_edge(i, k)))
        if present == 3:
            closed += 1
        elif present > 0:
            opened += 1
    return closed, opened


def brute_segregation(g: DirectedGraph, partition: dict[int, int]) -> float:
    """Direct evaluation of 1 - |E_b| / (2 d |C_a| |C_b|)."""
    labels = sorted(set(partition.values()))
    assert len(labels) == 2
    sizes = {lab: sum(1 for v in partition.values() if v == lab)
             for lab in labels}
    cross = sum(1 for u, v in g.edges() if partition[u] != partition[v])
    density = g.edge_count / (g.n * (g.n - 1))
    return 1.0 - cross / (2.0 * density * sizes[labels[0]] * sizes[labels[1]])


def brute_peaks(values, bins: int, lo: float, hi: float,
                min_height_fraction: float) -> int:
    """Histogram peak count by direct definition: bins that clear the height
    floor and strictly exceed every existing neighbor."""
    counts = [0] * bins
    for v in values:
        # same binning expression as the implementation on purpose: binning is
        # the trivial part, the peak-detection logic below is the independent one
        idx = int((v - lo) / (hi - lo) * bins)
        idx = min(max(idx, 0), bins - 1)
        counts[idx] += 1
    floor = min_height_fraction * len(values)
    peaks = 0
    for i in range(bins):
        if counts[i] == 0 or counts[i] < floor:
            continue
        neighbors = []
        if i > 0:
            neighbors.append(counts[i - 1])
        if i < bins - 1:
            neighbors.append(counts[i + 1])
        if all(counts[i] > nb for nb in neighbors):
            peaks += 1
    return peaks


def brute_overlap_distance(a: tuple[int, ...], b: tuple[int, ...]) -> float:
    """1 - (a.b)/min(|a|,|b|) computed long-hand on binary vectors."""
    dot = sum(1 for x, y in zip(a, b) if x == 1 and y == 1)
    wa = sum(a)
    wb = sum(b)
    return 1.0 - dot / min(wa, wb)
