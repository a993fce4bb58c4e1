"""Observables over simulation states and graphs: screen entropy, opinion
peaks and distances, segregation, neighbor diversity, and the echo-chamber
steady-state predicate. All functions are pure; snapshots can be evaluated
concurrently."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graph import DirectedGraph, triad_census, weakly_connected_components

OPINION_BINS = 10

PEAK_BINS = 20
PEAK_MIN_HEIGHT_FRACTION = 0.05


class MetricError(ValueError):
    """Metric precondition violated (empty input, degenerate partition...)."""


@dataclass
class MetricsSnapshot:
    """One row of the time series exported by runs and validation."""

    t: int
    segregation: float
    triad_fraction: float
    mean_screen_entropy: float
    neighbor_diversity: float
    opinion_histogram: list[int]

    CSV_HEADER = (["t", "segregation", "triad_fraction", "entropy", "diversity"]
                  + [f"hist_{i}" for i in range(OPINION_BINS)])

    def as_csv_row(self) -> list:
        return ([self.t, self.segregation, self.triad_fraction,
                 self.mean_screen_entropy, self.neighbor_diversity]
                + list(self.opinion_histogram))


def _bin_index(value: float, bins: int, lo: float, hi: float) -> int:
    idx = int((value - lo) / (hi - lo) * bins)
    if idx < 0:
        return 0
    if idx >= bins:
        return bins - 1
    return idx


def opinion_histogram(opinions, bins: int = OPINION_BINS,
                      lo: float = -1.0, hi: float = 1.0) -> list[int]:
    counts = [0] * bins
    for o in opinions:
        counts[_bin_index(o, bins, lo, hi)] += 1
    return counts


def screen_entropy(state) -> float:
    """Mean over users of the Shannon entropy (natural log) of screen message
    opinions binned into 10 equal bins of [-1, 1]. Users with empty screens
    are left out of the mean; if every screen is empty, 0."""
    total = 0.0
    counted = 0
    for screen in state.screens:
        if not screen:
            continue
        counts = opinion_histogram([msg.opinion for msg, _d in screen])
        size = len(screen)
        h = 0.0
        for c in counts:
            if c:
                pr = c / size
                h -= pr * math.log(pr)
        total += h
        counted += 1
    return total / counted if counted else 0.0


def histogram_peaks(values, bins: int, lo: float, hi: float,
                    min_height_fraction: float) -> int:
    """Count strict local maxima of the histogram of `values` over [lo, hi]
    that clear the minimum-height threshold. Boundary bins compare against
    their single neighbor."""
    if bins < 3:
        raise MetricError(f"bins must be >= 3, got {bins}")
    counts = opinion_histogram(values, bins, lo, hi)
    n = len(values)
    min_count = min_height_fraction * n
    peaks = 0
    for i, c in enumerate(counts):
        if c < min_count or c == 0:
            continue
        left_ok = i == 0 or c > counts[i - 1]
        right_ok = i == bins - 1 or c > counts[i + 1]
        if left_ok and right_ok:
            peaks += 1
    return peaks


def count_opinion_peaks(opinions, bins: int = PEAK_BINS,
                        min_height_fraction: float = PEAK_MIN_HEIGHT_FRACTION) -> int:
    """Peaks of the opinion histogram over [-1, 1]; the number of surviving
    opinion clusters at a steady state."""
    return histogram_peaks(opinions, bins, -1.0, 1.0, min_height_fraction)


def max_opinion_distance(opinions) -> float:
    if not opinions:
        raise MetricError("opinions must be nonempty")
    return max(opinions) - min(opinions)


def opinion_partition(opinions) -> dict[int, int]:
    """Two-cluster sign partition: label 0 for o < 0, label 1 for o >= 0."""
    return {i: (0 if o < 0.0 else 1) for i, o in enumerate(opinions)}


def segregation_index(g: DirectedGraph, partition: dict[int, int]) -> float:
    """1 - |E_b| / (2 d |C+| |C-|) with d = E / (N(N-1)): observed
    cross-cluster edges against their expectation in a density-matched random
    graph. 1 means fully segregated; negative values (more mixing than
    random) are kept as-is."""
    labels = set(partition.values())
    if len(labels) != 2:
        raise MetricError(f"need exactly 2 nonempty clusters, got {len(labels)}")
    a, b = sorted(labels)
    size_a = sum(1 for v in partition.values() if v == a)
    size_b = sum(1 for v in partition.values() if v == b)
    n = g.n
    if n < 2 or g.edge_count == 0:
        raise MetricError("graph must have >= 2 nodes and >= 1 edge")
    cross = 0
    for u in range(n):
        pu = partition[u]
        for v in g.out[u]:
            if partition[v] != pu:
                cross += 1
    density = g.edge_count / (n * (n - 1))
    return 1.0 - cross / (2.0 * density * size_a * size_b)


def pairwise_opinion_distances(opinions) -> list[float]:
    """|o_i - o_j| over all unordered pairs; C(n,2) values in [0, 2]."""
    n = len(opinions)
    if n < 2:
        raise MetricError("need at least 2 opinions")
    out = []
    for i in range(n):
        oi = opinions[i]
        for j in range(i + 1, n):
            out.append(abs(oi - opinions[j]))
    return out


def neighbor_opinion_diversity(g: DirectedGraph, opinions) -> float:
    """Mean |o_u - o_v| over directed edges (u, v)."""
    if g.edge_count == 0:
        raise MetricError("graph has no edges")
    total = 0.0
    for u in range(g.n):
        ou = opinions[u]
        for v in g.out[u]:
            total += abs(ou - opinions[v])
    return total / g.edge_count


def is_echo_chamber(state, epsilon: float = None) -> bool:
    """Steady-state predicate: no follower edge spans an opinion gap >=
    epsilon, and every weakly connected component's internal opinion spread
    is < epsilon. Once true, unfollowing can never fire again."""
    g = state.graph
    opinions = state.opinions
    if epsilon is None:
        epsilon = state.params.epsilon
    for u in range(g.n):
        ou = opinions[u]
        for v in g.out[u]:
            if abs(ou - opinions[v]) >= epsilon:
                return False
    for comp in weakly_connected_components(g):
        lo = min(opinions[u] for u in comp)
        hi = max(opinions[u] for u in comp)
        if hi - lo >= epsilon:
            return False
    return True


def opinion_clusters(opinions, epsilon: float) -> list[list[int]]:
    """Single-linkage chaining in opinion space: nodes whose sorted opinions
    are connected by gaps < epsilon share a cluster."""
    order = sorted(range(len(opinions)), key=lambda i: (opinions[i], i))
    clusters = []
    current = []
    prev = None
    for i in order:
        if prev is not None and opinions[i] - prev >= epsilon:
            clusters.append(current)
            current = []
        current.append(i)
        prev = opinions[i]
    if current:
        clusters.append(current)
    return clusters


def exclusion_check(g: DirectedGraph, opinions, epsilon: float) -> bool:
    """True when the run can never fully segregate: some node's out-degree is
    at least (its opinion cluster size - 1), so its out-edges cannot all stay
    within the cluster."""
    for cluster in opinion_clusters(opinions, epsilon):
        limit = len(cluster) - 1
        for u in cluster:
            d = g.out_degree(u)
            if d > 0 and d >= limit:
                return True
    return False


def snapshot(state, partition: dict[int, int] = None,
             with_triads: bool = True) -> MetricsSnapshot:
    """Assemble a MetricsSnapshot from the live state. Segregation uses the
    sign partition unless one is supplied; NaN when a sign cluster is empty
    or there are no edges."""
    g = state.graph
    part = partition if partition is not None else opinion_partition(state.opinions)
    try:
        seg = segregation_index(g, part)
    except MetricError:
        seg = float("nan")
    try:
        div = neighbor_opinion_diversity(g, state.opinions)
    except MetricError:
        div = float("nan")
    frac = triad_census(g).fraction if with_triads else float("nan")
    return MetricsSnapshot(
        t=state.t,
        segregation=seg,
        triad_fraction=frac,
        mean_screen_entropy=screen_entropy(state),
        neighbor_diversity=div,
        opinion_histogram=opinion_histogram(state.opinions),
    )
