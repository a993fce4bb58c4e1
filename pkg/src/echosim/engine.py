"""Generative model of information sharing on a follower network.

Each step: a random user absorbs influence from concordant messages on their
screen, then posts or reposts, then (with some probability) unfollows the
deliverer of a discordant message and rewires to a new friend picked by the
configured strategy. Opinions live in [-1, 1]; the edge count and the
out-degree sequence never change.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from .graph import DirectedGraph, random_directed_graph

STRATEGIES = ("random", "repost", "recommendation")

DEFAULT_RECENT_WINDOW = 100


class ParameterError(ValueError):
    """A Params field is outside its allowed range."""


@dataclass
class Params:
    """Full parameterization of one run."""

    n: int = 100
    e: int = 400
    epsilon: float = 0.4
    mu: float = 0.5
    p: float = 0.5
    q: float = 0.5
    l: int = 10
    strategy: str = "random"
    t_max: int = 100_000
    seed: int = 0
    recent_window: int = DEFAULT_RECENT_WINDOW

    def validate(self) -> "Params":
        if self.n < 1:
            raise ParameterError(f"n must be >= 1, got {self.n}")
        if not (0 <= self.e <= self.n * (self.n - 1)):
            raise ParameterError(f"e={self.e} outside [0, n(n-1)]")
        for name in ("p", "q", "mu"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ParameterError(f"{name}={v} outside [0, 1]")
        if self.epsilon < 0:
            raise ParameterError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.l < 1:
            raise ParameterError(f"l must be >= 1, got {self.l}")
        if self.strategy not in STRATEGIES:
            raise ParameterError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if self.t_max < 0:
            raise ParameterError(f"t_max must be >= 0, got {self.t_max}")
        if self.recent_window < 1:
            raise ParameterError(f"recent_window must be >= 1, got {self.recent_window}")
        return self

    def with_overrides(self, **kw) -> "Params":
        return replace(self, **kw).validate()


class Message:
    """Immutable payload of an originated post. The opinion value is frozen at
    creation time; only the repost chain grows."""

    __slots__ = ("id", "originator", "opinion", "repost_chain", "created_at")

    def __init__(self, id: int, originator: int, opinion: float, created_at: int):
        self.id = id
        self.originator = originator
        self.opinion = opinion
        self.repost_chain: list[int] = []
        self.created_at = created_at


@dataclass
class Event:
    """One logged action. kind is 'post', 'repost', or 'rewire'; unused fields
    stay None. For reposts, `originator` is the message's original author (the
    retweeted party)."""

    step: int
    kind: str
    actor: int
    message_id: Optional[int] = None
    originator: Optional[int] = None
    unfollowed: Optional[int] = None
    new_friend: Optional[int] = None

    def as_csv_row(self) -> list:
        blank = lambda x: "" if x is None else x
        return [self.step, self.kind, self.actor, blank(self.message_id),
                blank(self.originator), blank(self.unfollowed), blank(self.new_friend)]


EVENT_CSV_HEADER = ["step", "kind", "actor", "message_id", "originator",
                    "unfollowed", "new_friend"]


class SimState:
    """The entire mutable world of one run. Strictly single-owner; step() is
    sequential and parallelism lives across independent states."""

    __slots__ = ("params", "graph", "opinions", "screens", "recent_posts",
                 "event_log", "t", "rng", "_next_message_id", "record_events",
                 "repost_edges")

    def __init__(self, params: Params, graph: DirectedGraph,
                 opinions: list[float], rng: random.Random,
                 record_events: bool = True):
        self.params = params
        self.graph = graph
        self.opinions = opinions
        # Screen entries are (message, deliverer); deque(maxlen=l) gives the
        # FIFO eviction for free.
        self.screens = [deque(maxlen=params.l) for _ in range(graph.n)]
        self.recent_posts = deque(maxlen=params.recent_window)
        self.event_log: list[Event] = []
        self.t = 0
        self.rng = rng
        self._next_message_id = 0
        self.record_events = record_events
        # (originator, reposter) pairs in chronological order; kept even when
        # full event logging is off so retweet networks stay constructible.
        self.repost_edges: list[tuple[int, int]] = []

    def new_message(self, originator: int) -> Message:
        msg = Message(self._next_message_id, originator,
                      self.opinions[originator], self.t)
        self._next_message_id += 1
        return msg


def concordant(o: float, m: float, epsilon: float) -> bool:
    """Strict bounded-confidence test: |o - m| < epsilon."""
    return abs(o - m) < epsilon


def opinion_update(o: float, screen, epsilon: float, mu: float) -> float:
    """Move o toward the mean of concordant screen message opinions by a
    factor mu; identity when nothing on the screen is concordant. The update
    is a convex combination, so the result stays in [-1, 1]."""
    total = 0.0
    count = 0
    for msg, _deliverer in screen:
        if abs(o - msg.opinion) < epsilon:
            total += msg.opinion
            count += 1
    if count == 0:
        return o
    return o + mu * (total / count - o)


def _deliver(state: SimState, author: int, msg: Message) -> None:
    screens = state.screens
    for follower in state.graph.inn[author]:
        screens[follower].append((msg, author))


def act(state: SimState, i: int) -> list[Event]:
    """Post or repost. With probability p a concordant screen message (if any)
    is reposted; otherwise the user originates a message carrying their
    current opinion. Either way the message lands on all followers' screens
    and in the recent-post log."""
    events = []
    o_i = state.opinions[i]
    eps = state.params.epsilon
    reposted = None
    if state.rng.random() < state.params.p:
        candidates = [msg for msg, _d in state.screens[i]
                      if abs(o_i - msg.opinion) < eps]
        if candidates:
            reposted = candidates[state.rng.randrange(len(candidates))]
    if reposted is not None:
        reposted.repost_chain.append(i)
        _deliver(state, i, reposted)
        state.recent_posts.append((i, reposted.opinion))
        state.repost_edges.append((reposted.originator, i))
        if state.record_events:
            ev = Event(state.t, "repost", i, message_id=reposted.id,
                       originator=reposted.originator)
            state.event_log.append(ev)
            events.append(ev)
    else:
        msg = state.new_message(i)
        _deliver(state, i, msg)
        state.recent_posts.append((i, msg.opinion))
        if state.record_events:
            ev = Event(state.t, "post", i, message_id=msg.id, originator=i)
            state.event_log.append(ev)
            events.append(ev)
    return events


def select_rewire_target(state: SimState, i: int, strategy: str,
                         exclude: Optional[int] = None) -> Optional[int]:
    """Pick the replacement friend. The pool never contains i, current
    friends, or `exclude` (the friend being dropped in the same rewire).
    repost/recommendation fall back to random when their pool is empty;
    None only when i already follows everyone else."""
    rng = state.rng
    out_i = state.graph.out[i]
    n = state.graph.n

    def random_pool_size() -> int:
        size = n - 1 - len(out_i)
        if exclude is not None and exclude not in out_i and exclude != i:
            size -= 1
        return size

    def pick_random() -> Optional[int]:
        if random_pool_size() <= 0:
            return None
        while True:
            c = rng.randrange(n)
            if c != i and c != exclude and c not in out_i:
                return c

    if strategy == "random":
        return pick_random()

    if strategy == "repost":
        pool = {msg.originator for msg, _d in state.screens[i]
                if msg.repost_chain}
    elif strategy == "recommendation":
        o_i = state.opinions[i]
        eps = state.params.epsilon
        pool = {author for author, m in state.recent_posts
                if abs(o_i - m) < eps}
    else:
        raise ParameterError(f"unknown strategy {strategy!r}")

    pool.discard(i)
    if exclude is not None:
        pool.discard(exclude)
    pool -= out_i
    if not pool:
        return pick_random()
    ordered = sorted(pool)
    return ordered[rng.randrange(len(ordered))]


def maybe_unfollow(state: SimState, i: int) -> list[Event]:
    """With probability q, drop the edge to the deliverer of a random
    discordant screen message (skipping entries whose deliverer was already
    unfollowed) and follow a strategy-selected replacement instead. Aborted,
    with the edge kept, when no replacement exists."""
    if state.rng.random() >= state.params.q:
        return []
    o_i = state.opinions[i]
    eps = state.params.epsilon
    out_i = state.graph.out[i]
    candidates = [deliverer for msg, deliverer in state.screens[i]
                  if abs(o_i - msg.opinion) >= eps and deliverer in out_i]
    if not candidates:
        return []
    friend = candidates[state.rng.randrange(len(candidates))]
    target = select_rewire_target(state, i, state.params.strategy, exclude=friend)
    if target is None:
        return []
    state.graph.rewire_edge(i, friend, target)
    if state.record_events:
        ev = Event(state.t, "rewire", i, unfollowed=friend, new_friend=target)
        state.event_log.append(ev)
        return [ev]
    return []


def step(state: SimState) -> list[Event]:
    """One model step: pick a user uniformly, update their opinion from the
    screen, then act, then maybe unfollow. Influence is asymmetric: only the
    selected user's opinion moves."""
    i = state.rng.randrange(state.graph.n)
    p = state.params
    state.opinions[i] = opinion_update(state.opinions[i], state.screens[i],
                                       p.epsilon, p.mu)
    events = act(state, i)
    events += maybe_unfollow(state, i)
    state.t += 1
    return events


def init_simulation(params: Params,
                    initial_graph: Optional[DirectedGraph] = None,
                    record_events: bool = True) -> SimState:
    """Fresh state: i.i.d. uniform opinions on [-1, 1], empty screens and
    logs, graph either supplied or sampled uniformly. A supplied graph's node
    count overrides params.n."""
    params = params.validate()
    rng = random.Random(params.seed)
    if initial_graph is not None:
        graph = initial_graph
        if graph.n != params.n:
            params = replace(params, n=graph.n, e=graph.edge_count)
    else:
        graph = random_directed_graph(params.n, params.e, rng)
    opinions = [rng.uniform(-1.0, 1.0) for _ in range(graph.n)]
    return SimState(params, graph, opinions, rng, record_events=record_events)


@dataclass
class RunOutcome:
    """Result of run_until: status is 'converged' or 'censored'; t is the step
    at which the stop condition was first seen true (within check_every
    resolution) or t_max."""

    status: str
    t: int

    @property
    def converged(self) -> bool:
        return self.status == "converged"


def run_until(state: SimState, stop: Callable[[SimState], bool],
              check_every: int = 1) -> RunOutcome:
    """Advance until stop(state) (tested every check_every steps) or until
    t_max. stop is also evaluated on the initial state."""
    if check_every < 1:
        raise ParameterError(f"check_every must be >= 1, got {check_every}")
    t_max = state.params.t_max
    if stop(state):
        return RunOutcome("converged", state.t)
    while state.t < t_max:
        budget = min(check_every, t_max - state.t)
        for _ in range(budget):
            step(state)
        if stop(state):
            return RunOutcome("converged", state.t)
    return RunOutcome("censored", state.t)
