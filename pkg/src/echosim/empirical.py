"""Empirical-data side: loading labeled retweet networks and hashtag
adoptions, the hashtag-overlap opinion distance, synthetic retweet-network
construction from simulation event logs, and the calibrated validation run
that matches simulated segregation to the empirical level."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .engine import Params, init_simulation, step
from .graph import (DirectedGraph, FormatError,
                    largest_strongly_connected_component, load_edge_list,
                    triad_census)
from .metrics import (MetricError, MetricsSnapshot, histogram_peaks,
                      neighbor_opinion_diversity,
                      pairwise_opinion_distances, segregation_index)

DEFAULT_TOP_HASHTAGS = 20
SNAPSHOT_EVERY_EPOCHS = 10
DEFAULT_EPOCH_BUDGET = 10_000


class DataError(Exception):
    """Input data is structurally valid but inconsistent (missing labels...)."""


def load_labels(path) -> dict[str, str]:
    """"node_id<ws>label" lines; '#' comments and blanks skipped."""
    labels: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if len(fields) < 2:
                raise FormatError(f"{path}:{lineno}: expected 'node label', got {line!r}")
            labels[fields[0]] = fields[1]
    return labels


def load_labeled_network(edges_path, labels_path):
    """Load a retweet network (edge i->j: j retweeted i), restrict it to its
    largest SCC, and attach the file labels as a partition. Every retained
    node must be labeled.

    Returns (graph, partition, id_map) where partition maps dense node id ->
    integer label and id_map maps original string id -> dense id."""
    full, ids = load_edge_list(edges_path)
    raw_labels = load_labels(labels_path)
    scc, old_ids = largest_strongly_connected_component(full)
    names = {v: k for k, v in ids.items()}
    missing = [names[old] for old in old_ids if names[old] not in raw_labels]
    if missing:
        shown = ", ".join(missing[:10])
        more = f" (+{len(missing) - 10} more)" if len(missing) > 10 else ""
        raise DataError(f"{len(missing)} SCC nodes missing labels: {shown}{more}")
    label_values = sorted({raw_labels[names[old]] for old in old_ids})
    label_code = {lv: i for i, lv in enumerate(label_values)}
    partition = {new: label_code[raw_labels[names[old]]]
                 for new, old in enumerate(old_ids)}
    id_map = {names[old]: new for new, old in enumerate(old_ids)}
    return scc, partition, id_map


@dataclass
class HashtagVector:
    """Binary adoption vector over the top-D hashtags for one user."""

    user: str
    adopted: tuple[int, ...]

    @property
    def weight(self) -> int:
        return sum(self.adopted)


def hashtag_vectors(adoption_path, d: int = DEFAULT_TOP_HASHTAGS):
    """Read "user<ws>hashtag" adoption lines, keep the d most frequent
    hashtags (ties by lexicographic order), and emit per-user binary vectors.
    Users adopting none of the top hashtags are dropped.

    Returns (vectors, coverage, top_hashtags) with coverage = retained users /
    all users seen in the file."""
    adoptions: dict[str, set[str]] = {}
    tag_counts: dict[str, int] = {}
    seen_pairs = set()
    with open(adoption_path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if len(fields) < 2:
                raise FormatError(
                    f"{adoption_path}:{lineno}: expected 'user hashtag', got {line!r}")
            user, tag = fields[0], fields[1]
            adoptions.setdefault(user, set()).add(tag)
            if (user, tag) not in seen_pairs:
                seen_pairs.add((user, tag))
                tag_counts[tag] = tag_counts.get(tag, 0) + 1
    top = sorted(tag_counts, key=lambda t: (-tag_counts[t], t))[:d]
    index = {t: i for i, t in enumerate(top)}
    vectors = []
    for user in sorted(adoptions):
        vec = [0] * len(top)
        for tag in adoptions[user]:
            if tag in index:
                vec[index[tag]] = 1
        if any(vec):
            vectors.append(HashtagVector(user, tuple(vec)))
    coverage = len(vectors) / len(adoptions) if adoptions else 0.0
    return vectors, coverage, top


def empirical_opinion_distance(a: HashtagVector, b: HashtagVector) -> float:
    """1 - (a.b) / min(|a|, |b|) over binary adoption vectors; 0 for fully
    shared usage, 1 for disjoint usage."""
    wa, wb = a.weight, b.weight
    if wa == 0 or wb == 0:
        raise MetricError("hashtag vectors must be nonzero")
    dot = sum(x & y for x, y in zip(a.adopted, b.adopted))
    return 1.0 - dot / min(wa, wb)


def build_retweet_network(repost_pairs, n: int, e: int) -> DirectedGraph:
    """Graph of the most recent `e` distinct (originator -> reposter) edges
    in the chronological pair list; fewer if not enough distinct pairs exist.
    Self-pairs never occur (users cannot repost their own originals back onto
    their own screens) but are skipped defensively."""
    chosen = []
    seen = set()
    for orig, rep in reversed(repost_pairs):
        if orig == rep or (orig, rep) in seen:
            continue
        seen.add((orig, rep))
        chosen.append((orig, rep))
        if len(chosen) >= e:
            break
    g = DirectedGraph(n)
    for u, v in chosen:
        g.add_edge(u, v)
    return g


def repost_pairs_from_events(event_log):
    """(originator, reposter) pairs from a recorded event log, in order."""
    return [(ev.originator, ev.actor) for ev in event_log if ev.kind == "repost"]


def _scc_segregation(scc: DirectedGraph, opinions_by_old, old_ids):
    """Sign-partition segregation of an SCC-restricted retweet snapshot, or
    None when the partition is one-sided (segregation between two camps is
    undefined for a single-camp snapshot)."""
    part = {new: (0 if opinions_by_old[old] < 0 else 1)
            for new, old in enumerate(old_ids)}
    if len(set(part.values())) < 2 or scc.edge_count == 0:
        return None
    return segregation_index(scc, part)


@dataclass
class ValidationReport:
    """Output of a calibrated validation run."""

    params: Params
    s_emp: float
    empirical_triad_fraction: float
    snapshots: list[MetricsSnapshot] = field(default_factory=list)
    stop_epoch: Optional[int] = None
    censored: bool = False
    do_distances: list[float] = field(default_factory=list)

    def do_histogram_peaks(self, bins: int = 20,
                           min_height_fraction: float = 0.05) -> int:
        return histogram_peaks(self.do_distances, bins, 0.0, 2.0,
                               min_height_fraction)


def validation_run(params: Params, empirical_graph: DirectedGraph,
                   empirical_partition: dict[int, int],
                   epoch_budget: int = DEFAULT_EPOCH_BUDGET,
                   snapshot_every: int = SNAPSHOT_EVERY_EPOCHS,
                   initial_graph: Optional[DirectedGraph] = None,
                   progress=None) -> ValidationReport:
    """Simulate the calibrated model in epochs of N steps. Every
    `snapshot_every` epochs, build the synthetic retweet network from the
    latest E_emp distinct repost edges, restrict it to its largest SCC, and
    record segregation (sign partition), triad fraction, and neighbor opinion
    diversity. Stops at the first snapshot whose segregation reaches the
    empirical level, or flags the report censored at the epoch budget."""
    s_emp = segregation_index(empirical_graph, empirical_partition)
    emp_frac = triad_census(empirical_graph).fraction
    e_emp = empirical_graph.edge_count

    state = init_simulation(params, initial_graph=initial_graph,
                            record_events=False)
    n = state.graph.n
    report = ValidationReport(params=state.params, s_emp=s_emp,
                              empirical_triad_fraction=emp_frac)
    epoch = 0
    while epoch < epoch_budget:
        for _ in range(snapshot_every * n):
            step(state)
        epoch += snapshot_every
        rt = build_retweet_network(state.repost_edges, n, e_emp)
        scc, old_ids = largest_strongly_connected_component(rt)
        if scc.n < 2 or scc.edge_count == 0:
            continue
        seg = _scc_segregation(scc, state.opinions, old_ids)
        if seg is None:
            # single-camp snapshot: segregation between camps is undefined,
            # so it can neither match nor exceed the empirical level
            continue
        scc_opinions = [state.opinions[old] for old in old_ids]
        try:
            div = neighbor_opinion_diversity(scc, scc_opinions)
        except MetricError:
            div = float("nan")
        snap = MetricsSnapshot(
            t=state.t,
            segregation=seg,
            triad_fraction=triad_census(scc).fraction,
            mean_screen_entropy=float("nan"),
            neighbor_diversity=div,
            opinion_histogram=[0] * 10,
        )
        report.snapshots.append(snap)
        if progress is not None:
            progress(epoch, snap)
        if seg >= s_emp:
            report.stop_epoch = epoch
            if len(scc_opinions) >= 2:
                report.do_distances = pairwise_opinion_distances(scc_opinions)
            return report
    report.censored = True
    report.stop_epoch = epoch
    rt = build_retweet_network(state.repost_edges, n, e_emp)
    scc, old_ids = largest_strongly_connected_component(rt)
    if scc.n >= 2:
        report.do_distances = pairwise_opinion_distances(
            [state.opinions[old] for old in old_ids])
    return report


def export_validation_report(report: ValidationReport, out_dir,
                             dt_distances=None) -> None:
    """Write series.csv, do_hist.csv, dt_hist.csv, meta.json under out_dir."""
    import csv
    import os
    from dataclasses import asdict

    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "series.csv"), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(MetricsSnapshot.CSV_HEADER)
        for snap in report.snapshots:
            w.writerow(snap.as_csv_row())

    def write_hist(name, values, lo, hi, bins=20):
        counts = [0] * bins
        for v in values:
            idx = int((v - lo) / (hi - lo) * bins)
            counts[min(max(idx, 0), bins - 1)] += 1
        with open(os.path.join(out_dir, name), "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["bin_lo", "bin_hi", "count"])
            width = (hi - lo) / bins
            for i, c in enumerate(counts):
                w.writerow([lo + i * width, lo + (i + 1) * width, c])

    write_hist("do_hist.csv", report.do_distances, 0.0, 2.0)
    write_hist("dt_hist.csv", dt_distances or [], 0.0, 1.0)
    meta = {
        "params": asdict(report.params),
        "s_emp": report.s_emp,
        "empirical_triad_fraction": report.empirical_triad_fraction,
        "stop_epoch": report.stop_epoch,
        "censored": report.censored,
        "snapshots": len(report.snapshots),
    }
    with open(os.path.join(out_dir, "meta.json"), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
