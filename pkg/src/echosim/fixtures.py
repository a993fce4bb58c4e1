"""Deterministic synthetic two-cluster fixture: a small labeled retweet
network plus hashtag adoptions, shaped like the empirical data files so the
whole validation pipeline can run end-to-end in seconds without any external
dataset. The bundled copy under data/fixture_two_cluster is generated by
write_two_cluster_fixture with the default arguments."""

from __future__ import annotations

import os
import random
from importlib import resources

CLUSTER_SIZE = 60
WITHIN_EDGES = 150
CROSS_EDGES_PER_DIRECTION = 18
FIXTURE_SEED = 20101102

LEFT_TAGS = [f"#blue{i:02d}" for i in range(12)]
RIGHT_TAGS = [f"#red{i:02d}" for i in range(12)]


def _node_names():
    left = [f"L{i:02d}" for i in range(CLUSTER_SIZE)]
    right = [f"R{i:02d}" for i in range(CLUSTER_SIZE)]
    return left, right


def build_two_cluster_fixture(seed: int = FIXTURE_SEED):
    """Returns (edges, labels, adoptions): edges as (src, dst) string pairs,
    labels as {node: 'left'|'right'}, adoptions as (user, hashtag) pairs.

    Each cluster carries a directed ring (so it is strongly connected on its
    own) plus random internal edges; a handful of cross edges in each
    direction welds the two clusters into one SCC with partial segregation."""
    rng = random.Random(seed)
    left, right = _node_names()
    edges = []
    seen = set()

    def add(u, v):
        if u != v and (u, v) not in seen:
            seen.add((u, v))
            edges.append((u, v))

    for group in (left, right):
        for i, u in enumerate(group):
            add(u, group[(i + 1) % len(group)])
        added = 0
        while added < WITHIN_EDGES:
            u = group[rng.randrange(len(group))]
            v = group[rng.randrange(len(group))]
            if u != v and (u, v) not in seen:
                add(u, v)
                added += 1
    for _ in range(CROSS_EDGES_PER_DIRECTION):
        add(left[rng.randrange(len(left))], right[rng.randrange(len(right))])
        add(right[rng.randrange(len(right))], left[rng.randrange(len(left))])

    labels = {u: "left" for u in left}
    labels.update({u: "right" for u in right})

    adoptions = []
    for group, own_tags, other_tags in ((left, LEFT_TAGS, RIGHT_TAGS),
                                        (right, RIGHT_TAGS, LEFT_TAGS)):
        for idx, user in enumerate(group):
            if idx % 15 == 14:
                continue  # a few users adopt nothing and get dropped
            k = 2 + rng.randrange(3)
            for tag in rng.sample(own_tags, k):
                adoptions.append((user, tag))
            if rng.random() < 0.1:
                adoptions.append((user, other_tags[rng.randrange(len(other_tags))]))
    return edges, labels, adoptions


def write_two_cluster_fixture(out_dir, seed: int = FIXTURE_SEED):
    """Write edges.txt, labels.txt, hashtags.txt under out_dir."""
    edges, labels, adoptions = build_two_cluster_fixture(seed)
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "edges.txt"), "w", encoding="utf-8") as fh:
        fh.write("# synthetic two-cluster retweet network: src dst\n")
        for u, v in edges:
            fh.write(f"{u}\t{v}\n")
    with open(os.path.join(out_dir, "labels.txt"), "w", encoding="utf-8") as fh:
        fh.write("# node label\n")
        for node in sorted(labels):
            fh.write(f"{node}\t{labels[node]}\n")
    with open(os.path.join(out_dir, "hashtags.txt"), "w", encoding="utf-8") as fh:
        fh.write("# user hashtag\n")
        for user, tag in adoptions:
            fh.write(f"{user}\t{tag}\n")
    return out_dir


def bundled_fixture_dir() -> str:
    """Path of the fixture data shipped inside the package."""
    return str(resources.files("echosim").joinpath("data/fixture_two_cluster"))
