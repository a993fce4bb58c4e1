"""Experiment drivers: seeded Monte Carlo sweeps over the model parameters
with run-level parallelism. Per-run seeds are derived from (master seed, cell,
run index), so results are identical for any worker count or execution
order."""

from __future__ import annotations

import hashlib
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from scipy import stats as scipy_stats

from .engine import Params, init_simulation, run_until
from .graph import in_degree_ccdf, triad_census
from .metrics import (count_opinion_peaks, exclusion_check, is_echo_chamber,
                      max_opinion_distance)

CONVERGED = "converged"
CENSORED = "censored"
EXCLUDED = "excluded"


def derive_seed(master_seed: int, *parts) -> int:
    """Stable 63-bit seed from the master seed and any cell/run coordinates;
    independent of process or hash randomization."""
    text = ":".join([str(master_seed)] + [repr(p) for p in parts])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


@dataclass
class RunResult:
    """Outcome of a single seeded run driven to the echo-chamber predicate."""

    status: str
    t: int
    peaks: Optional[int] = None
    max_distance: Optional[float] = None
    components: Optional[int] = None
    closed_triads: Optional[int] = None


def time_to_echo_chamber(params: Params, check_every: Optional[int] = None,
                         collect_final: bool = False,
                         settle_epochs: int = 0) -> RunResult:
    """Run until the echo-chamber steady state, checking every N steps by
    default. Runs where a node's out-degree exceeds what its opinion cluster
    can absorb are reported excluded; t_max hits are censored. When
    settle_epochs > 0, converged runs take that many extra epochs (N steps
    each) before final metrics are collected, letting within-component
    opinions finish contracting; the reported time excludes the settle."""
    state = init_simulation(params, record_events=False)
    if check_every is None:
        check_every = state.graph.n
    excluded = False

    def stop(s):
        nonlocal excluded
        if is_echo_chamber(s):
            return True
        if exclusion_check(s.graph, s.opinions, s.params.epsilon):
            excluded = True
            return True
        return False

    outcome = run_until(state, stop, check_every=check_every)
    if excluded:
        status = EXCLUDED
    elif outcome.converged:
        status = CONVERGED
    else:
        status = CENSORED
    result = RunResult(status=status, t=outcome.t)
    if collect_final:
        from .engine import step
        from .graph import weakly_connected_components

        if status == CONVERGED and settle_epochs > 0:
            for _ in range(settle_epochs * state.graph.n):
                step(state)
        result.peaks = count_opinion_peaks(state.opinions)
        result.max_distance = max_opinion_distance(state.opinions)
        result.components = len(weakly_connected_components(state.graph))
        result.closed_triads = triad_census(state.graph).closed
    return result


# -- parallel plumbing -----------------------------------------------------

DEFAULT_SETTLE_EPOCHS = 10


def _run_cell_job(job):
    params, collect_final, settle_epochs = job
    return time_to_echo_chamber(params, collect_final=collect_final,
                                settle_epochs=settle_epochs)


def _map_runs(jobs, workers: Optional[int]):
    jobs = list(jobs)
    if not workers or workers <= 1:
        return [_run_cell_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_cell_job, jobs, chunksize=1))


def _mean_std(values):
    if not values:
        return float("nan"), float("nan")
    if len(values) == 1:
        return float(values[0]), 0.0
    return statistics.mean(values), statistics.stdev(values)


# -- (mu, q) synergy grid --------------------------------------------------

@dataclass
class SweepSpec:
    mu_values: list[float] = field(default_factory=list)
    q_values: list[float] = field(default_factory=list)
    runs_per_cell: int = 20
    base: Params = field(default_factory=Params)
    master_seed: int = 0


@dataclass
class CellStats:
    mu: float
    q: float
    results: list[RunResult]

    @property
    def converged_times(self):
        return [r.t for r in self.results if r.status == CONVERGED]

    @property
    def censored(self) -> int:
        return sum(1 for r in self.results if r.status == CENSORED)

    @property
    def excluded(self) -> int:
        return sum(1 for r in self.results if r.status == EXCLUDED)

    @property
    def mean_time(self) -> float:
        return _mean_std(self.converged_times)[0]

    @property
    def std_time(self) -> float:
        return _mean_std(self.converged_times)[1]

    def mean_time_censored_at_max(self, t_max: int) -> float:
        """Mean time over non-excluded runs, with censored runs counted at
        t_max (a lower bound on the true mean)."""
        times = [r.t if r.status == CONVERGED else t_max
                 for r in self.results if r.status != EXCLUDED]
        return _mean_std(times)[0]


def sweep_mu_q(spec: SweepSpec, workers: Optional[int] = None) -> list[CellStats]:
    """Evaluate time-to-echo-chamber over the (mu, q) grid."""
    jobs = []
    cells = []
    for mu in spec.mu_values:
        for q in spec.q_values:
            cells.append((mu, q))
            for run in range(spec.runs_per_cell):
                seed = derive_seed(spec.master_seed, "mu_q", mu, q, run)
                params = spec.base.with_overrides(mu=mu, q=q, seed=seed)
                jobs.append((params, False, 0))
    results = _map_runs(jobs, workers)
    out = []
    idx = 0
    for mu, q in cells:
        chunk = results[idx:idx + spec.runs_per_cell]
        idx += spec.runs_per_cell
        out.append(CellStats(mu=mu, q=q, results=chunk))
    return out


# -- epsilon sweep ---------------------------------------------------------

@dataclass
class EpsilonRow:
    epsilon: float
    results: list[RunResult]

    def _valid(self):
        return [r for r in self.results if r.status != EXCLUDED]

    @property
    def mean_peaks(self) -> float:
        return _mean_std([r.peaks for r in self._valid()])[0]

    @property
    def std_peaks(self) -> float:
        return _mean_std([r.peaks for r in self._valid()])[1]

    @property
    def mean_max_distance(self) -> float:
        return _mean_std([r.max_distance for r in self._valid()])[0]

    @property
    def std_max_distance(self) -> float:
        return _mean_std([r.max_distance for r in self._valid()])[1]


def sweep_epsilon(values, runs: int, base: Params, master_seed: int = 0,
                  workers: Optional[int] = None,
                  settle_epochs: int = DEFAULT_SETTLE_EPOCHS) -> list[EpsilonRow]:
    """Final peak count and opinion spread per confidence bound. Converged
    runs settle for settle_epochs extra epochs before metrics are read, so
    peak counts describe the contracted stationary opinions rather than the
    first instant the stop predicate holds."""
    jobs = []
    for eps in values:
        for run in range(runs):
            seed = derive_seed(master_seed, "epsilon", eps, run)
            jobs.append((base.with_overrides(epsilon=eps, seed=seed), True,
                         settle_epochs))
    results = _map_runs(jobs, workers)
    rows = []
    for k, eps in enumerate(values):
        rows.append(EpsilonRow(eps, results[k * runs:(k + 1) * runs]))
    return rows


# -- size scaling ----------------------------------------------------------

@dataclass
class ScalingRow:
    n: int
    e: int
    results: list[RunResult]

    @property
    def times(self):
        return [r.t for r in self.results if r.status == CONVERGED]

    @property
    def mean_time(self) -> float:
        return _mean_std(self.times)[0]

    @property
    def std_time(self) -> float:
        return _mean_std(self.times)[1]


def scaling_in_n(n_values, runs: int, base: Params, master_seed: int = 0,
                 workers: Optional[int] = None) -> list[ScalingRow]:
    """Time to echo chamber as N grows with the edge density of `base` held
    fixed (e = round(d n (n-1)))."""
    density = base.e / (base.n * (base.n - 1))
    jobs = []
    sizes = []
    for n in n_values:
        e = round(density * n * (n - 1))
        sizes.append((n, e))
        for run in range(runs):
            seed = derive_seed(master_seed, "scaling", n, run)
            jobs.append((base.with_overrides(n=n, e=e, seed=seed), False, 0))
    results = _map_runs(jobs, workers)
    rows = []
    for k, (n, e) in enumerate(sizes):
        rows.append(ScalingRow(n, e, results[k * runs:(k + 1) * runs]))
    return rows


def linear_fit(xs, ys):
    """Least-squares slope/intercept/R^2; rejects degenerate single-point
    input."""
    if len(set(xs)) < 2:
        raise ValueError("need at least two distinct x values for a fit")
    res = scipy_stats.linregress(xs, ys)
    return res.slope, res.intercept, res.rvalue ** 2


# -- strategy comparison ---------------------------------------------------

@dataclass
class StrategyStats:
    strategy: str
    results: list[RunResult]
    ccdf: Optional[list[tuple[int, float]]] = None
    max_in_degree: Optional[int] = None

    def _valid(self):
        return [r for r in self.results if r.status != EXCLUDED]

    @property
    def triad_counts(self):
        return [r.closed_triads for r in self._valid()]

    @property
    def mean_closed_triads(self) -> float:
        return _mean_std(self.triad_counts)[0]

    @property
    def convergence_times(self):
        return [r.t for r in self._valid() if r.status == CONVERGED]

    @property
    def mean_convergence_time(self) -> float:
        return _mean_std(self.convergence_times)[0]

    @property
    def mean_peaks(self) -> float:
        return _mean_std([r.peaks for r in self._valid()])[0]


@dataclass
class StrategyComparison:
    by_strategy: dict[str, StrategyStats]
    triad_pvalues: dict[tuple[str, str], float]


def _ccdf_job(job):
    params, = job
    state = init_simulation(params, record_events=False)
    n = state.graph.n

    def stop(s):
        return is_echo_chamber(s)

    run_until(state, stop, check_every=n)
    ccdf = in_degree_ccdf(state.graph)
    max_in = max(len(state.graph.inn[v]) for v in range(n))
    return ccdf, max_in


def compare_strategies(runs: int, base: Params, master_seed: int = 0,
                       strategies=("random", "repost", "recommendation"),
                       ccdf_params: Optional[Params] = None,
                       workers: Optional[int] = None,
                       settle_epochs: int = DEFAULT_SETTLE_EPOCHS) -> StrategyComparison:
    """Matched-seed comparison: run index k uses the same seed (hence the
    same initial graph and opinions) under every strategy. Reports closed
    triads on the final follower graph, convergence times, final peak counts,
    and a rank-based two-sample test on triad counts; optionally the
    in-degree CCDF at a larger scale (one seeded run per strategy)."""
    jobs = []
    for strategy in strategies:
        for run in range(runs):
            seed = derive_seed(master_seed, "strategy", run)
            jobs.append((base.with_overrides(strategy=strategy, seed=seed),
                         True, settle_epochs))
    results = _map_runs(jobs, workers)
    by_strategy = {}
    for k, strategy in enumerate(strategies):
        by_strategy[strategy] = StrategyStats(
            strategy, results[k * runs:(k + 1) * runs])

    if ccdf_params is not None:
        for strategy in strategies:
            seed = derive_seed(master_seed, "ccdf", strategy)
            ccdf, max_in = _ccdf_job(
                (ccdf_params.with_overrides(strategy=strategy, seed=seed),))
            by_strategy[strategy].ccdf = ccdf
            by_strategy[strategy].max_in_degree = max_in

    pvalues = {}
    names = list(strategies)
    for a in range(len(names)):
        for b in range(a + 1, len(names)):
            xs = by_strategy[names[a]].triad_counts
            ys = by_strategy[names[b]].triad_counts
            if xs and ys:
                stat = scipy_stats.mannwhitneyu(xs, ys, alternative="two-sided")
                pvalues[(names[a], names[b])] = float(stat.pvalue)
            else:
                pvalues[(names[a], names[b])] = float("nan")
    return StrategyComparison(by_strategy=by_strategy, triad_pvalues=pvalues)
