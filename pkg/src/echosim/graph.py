"""Directed-graph substrate: simple digraphs with in-place rewiring plus the
structural algorithms (components, k-core, triad census, degree distributions)
used by the metrics and data-preparation pipelines.

Edge u -> v means "u follows v": v is u's friend, u is v's follower.
"""

from __future__ import annotations

import random
from typing import Iterable, Iterator, Optional


class GraphError(Exception):
    """Structural precondition violated (bad edge counts, invalid rewire, ...)."""


class RewireError(GraphError):
    """A rewire would break graph simplicity (duplicate edge or self-loop)."""


class DirectedGraph:
    """Simple directed graph over nodes 0..n-1 with both adjacency directions
    indexed. Membership tests are O(1); rewiring keeps the edge count and the
    out-degree sequence fixed.

    Single-owner mutable: callers serialize mutation, reads are safe to share
    while no rewiring is in flight.
    """

    __slots__ = ("n", "out", "inn", "edge_count")

    def __init__(self, n: int):
        if n < 0:
            raise GraphError(f"node count must be non-negative, got {n}")
        self.n = n
        self.out = [set() for _ in range(n)]
        self.inn = [set() for _ in range(n)]
        self.edge_count = 0

    # -- construction -----------------------------------------------------

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise GraphError(f"self-loop ({u},{v}) not allowed")
        if v in self.out[u]:
            raise GraphError(f"duplicate edge ({u},{v})")
        self.out[u].add(v)
        self.inn[v].add(u)
        self.edge_count += 1

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.out[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self.out[u]:
                yield (u, v)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges())

    def out_degree(self, u: int) -> int:
        return len(self.out[u])

    def in_degree(self, v: int) -> int:
        return len(self.inn[v])

    def copy(self) -> "DirectedGraph":
        g = DirectedGraph(self.n)
        for u in range(self.n):
            g.out[u] = set(self.out[u])
            g.inn[u] = set(self.inn[u])
        g.edge_count = self.edge_count
        return g

    # -- rewiring ---------------------------------------------------------

    def rewire_edge(self, u: int, old_v: int, new_v: int) -> None:
        """Replace edge (u, old_v) by (u, new_v). E and u's out-degree are
        unchanged; preconditions guarantee the graph stays simple."""
        if old_v not in self.out[u]:
            raise RewireError(f"edge ({u},{old_v}) not present")
        if new_v == u:
            raise RewireError(f"rewire ({u},{old_v})->({u},{new_v}) creates self-loop")
        if new_v in self.out[u]:
            raise RewireError(f"({u},{new_v}) already present")
        self.out[u].discard(old_v)
        self.inn[old_v].discard(u)
        self.out[u].add(new_v)
        self.inn[new_v].add(u)


def random_directed_graph(n: int, e: int, rng: random.Random) -> DirectedGraph:
    """Sample e distinct directed non-self-loop edges uniformly without
    replacement among the n(n-1) ordered pairs."""
    max_e = n * (n - 1)
    if not (0 <= e <= max_e):
        raise GraphError(f"edge count {e} outside [0, {max_e}] for n={n}")
    g = DirectedGraph(n)
    # Rejection sampling; for the near-saturated regime fall back to an
    # explicit shuffle of all pairs to avoid long rejection chains.
    if e > max_e // 2 and max_e <= 2_000_000:
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        for u, v in rng.sample(pairs, e):
            g.add_edge(u, v)
        return g
    seen = set()
    while len(seen) < e:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        key = u * n + v
        if key in seen:
            continue
        seen.add(key)
        g.add_edge(u, v)
    return g


# -- components ------------------------------------------------------------

def weakly_connected_components(g: DirectedGraph) -> list[list[int]]:
    """Maximal sets mutually reachable ignoring edge direction, each sorted,
    listed by smallest member."""
    seen = [False] * g.n
    comps = []
    for start in range(g.n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in g.out[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
            for v in g.inn[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        comp.sort()
        comps.append(comp)
    return comps


def strongly_connected_components(g: DirectedGraph) -> list[list[int]]:
    """Tarjan's algorithm, iterative to survive deep graphs."""
    index = [0] * g.n
    low = [0] * g.n
    on_stack = [False] * g.n
    visited = [False] * g.n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 1

    for root in range(g.n):
        if visited[root]:
            continue
        work = [(root, iter(g.out[root]))]
        visited[root] = True
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            u, it = work[-1]
            advanced = False
            for v in it:
                if not visited[v]:
                    visited[v] = True
                    index[v] = low[v] = counter
                    counter += 1
                    stack.append(v)
                    on_stack[v] = True
                    work.append((v, iter(g.out[v])))
                    advanced = True
                    break
                elif on_stack[v]:
                    if index[v] < low[u]:
                        low[u] = index[v]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[u] < low[parent]:
                    low[parent] = low[u]
            if low[u] == index[u]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == u:
                        break
                comp.sort()
                comps.append(comp)
    return comps


def induced_subgraph(g: DirectedGraph, nodes: Iterable[int]) -> tuple[DirectedGraph, list[int]]:
    """Subgraph on `nodes` with ids remapped densely; returns (graph, old_ids)
    where old_ids[new] = original id, sorted ascending."""
    old_ids = sorted(set(nodes))
    remap = {old: new for new, old in enumerate(old_ids)}
    sub = DirectedGraph(len(old_ids))
    for old_u in old_ids:
        u = remap[old_u]
        for old_v in g.out[old_u]:
            if old_v in remap:
                sub.add_edge(u, remap[old_v])
    return sub, old_ids


def largest_strongly_connected_component(g: DirectedGraph) -> tuple[DirectedGraph, list[int]]:
    """Induced subgraph on the largest SCC; ties broken by smallest minimum
    node id for determinism."""
    comps = strongly_connected_components(g)
    if not comps:
        return DirectedGraph(0), []
    best = max(comps, key=lambda c: (len(c), -c[0]))
    return induced_subgraph(g, best)


def k_core(g: DirectedGraph, k: int) -> tuple[DirectedGraph, list[int]]:
    """Maximal induced subgraph where every node has total degree (in + out)
    >= k, by iterative peeling."""
    if k < 0:
        raise GraphError(f"k must be >= 0, got {k}")
    deg = [len(g.out[u]) + len(g.inn[u]) for u in range(g.n)]
    alive = [True] * g.n
    stack = [u for u in range(g.n) if deg[u] < k]
    for u in stack:
        alive[u] = False
    while stack:
        u = stack.pop()
        for v in g.out[u]:
            if alive[v]:
                deg[v] -= 1
                if deg[v] < k:
                    alive[v] = False
                    stack.append(v)
        for v in g.inn[u]:
            if alive[v]:
                deg[v] -= 1
                if deg[v] < k:
                    alive[v] = False
                    stack.append(v)
    return induced_subgraph(g, [u for u in range(g.n) if alive[u]])


# -- triads ----------------------------------------------------------------

class TriadCensus:
    """Counts of ordered node triplets (i, j, k): `closed` has all of
    {i->j, j->k, i->k}; `open` has a nonempty proper subset of them."""

    __slots__ = ("closed", "open")

    def __init__(self, closed: int, open: int):
        self.closed = closed
        self.open = open

    @property
    def fraction(self) -> float:
        total = self.closed + self.open
        return self.closed / total if total else 0.0

    def __eq__(self, other):
        return (self.closed, self.open) == (other.closed, other.open)

    def __repr__(self):
        return f"TriadCensus(closed={self.closed}, open={self.open})"


def triad_census(g: DirectedGraph) -> TriadCensus:
    """Closed triads by direct enumeration of 2-paths; open triads by
    inclusion-exclusion over the three pattern edges, so the cost stays
    O(sum of path counts) rather than O(n^3)."""
    n, e = g.n, g.edge_count
    closed = 0
    for i in range(n):
        out_i = g.out[i]
        for j in out_i:
            for k in g.out[j]:
                if k != i and k in out_i:
                    closed += 1
    if n < 3:
        return TriadCensus(0, 0)
    # Ordered triplets with at least one of {i->j, j->k, i->k} present:
    single = 3 * e * (n - 2)
    mutual = sum(1 for u in range(n) for v in g.out[u] if u in g.out[v])
    two_paths = sum(len(g.inn[j]) * len(g.out[j]) for j in range(n)) - mutual
    out_pairs = sum(d * (d - 1) for d in (len(g.out[u]) for u in range(n)))
    in_pairs = sum(d * (d - 1) for d in (len(g.inn[u]) for u in range(n)))
    at_least_one = single - two_paths - out_pairs - in_pairs + closed
    return TriadCensus(closed, at_least_one - closed)


# -- degree distributions --------------------------------------------------

def in_degree_ccdf(g: DirectedGraph) -> list[tuple[int, float]]:
    """(degree, fraction of nodes with in-degree >= degree) for each degree
    from 0 up to the max; fractions are non-increasing and start at 1."""
    if g.n == 0:
        return [(0, 1.0)]
    degrees = [len(g.inn[v]) for v in range(g.n)]
    max_d = max(degrees)
    counts = [0] * (max_d + 1)
    for d in degrees:
        counts[d] += 1
    ccdf = []
    remaining = g.n
    for d in range(max_d + 1):
        ccdf.append((d, remaining / g.n))
        remaining -= counts[d]
    return ccdf


# -- edge-list I/O ---------------------------------------------------------

class FormatError(Exception):
    """Malformed input file; message carries the offending line number."""


def load_edge_list(path) -> tuple[DirectedGraph, dict[str, int]]:
    """Read "source<ws>target" lines (extra fields ignored, '#' comments
    skipped). Arbitrary string ids are mapped to dense integers; the mapping
    is returned for callers to emit alongside outputs. Duplicate edges and
    self-loops in the file are dropped."""
    ids: dict[str, int] = {}
    pairs: list[tuple[int, int]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if len(fields) < 2:
                raise FormatError(f"{path}:{lineno}: expected 'source target', got {line!r}")
            s, t = fields[0], fields[1]
            for name in (s, t):
                if name not in ids:
                    ids[name] = len(ids)
            pairs.append((ids[s], ids[t]))
    g = DirectedGraph(len(ids))
    for u, v in pairs:
        if u != v and not g.has_edge(u, v):
            g.add_edge(u, v)
    return g, ids


def save_edge_list(g: DirectedGraph, path, id_map: Optional[dict[str, int]] = None) -> None:
    names = {v: k for k, v in id_map.items()} if id_map else None
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in g.sorted_edges():
            if names:
                fh.write(f"{names[u]}\t{names[v]}\n")
            else:
                fh.write(f"{u}\t{v}\n")
