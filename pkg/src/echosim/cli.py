"""Command-line entry point. One subcommand per experiment protocol plus the
interactive serve mode. Every subcommand honors --seed; rerunning with the
same seed produces byte-identical CSV outputs (manifest.json carries the only
volatile fields, such as wall time)."""

from __future__ import annotations

import csv
import json
import os
import subprocess
import sys
import time
from dataclasses import asdict

import click

from . import empirical, fixtures, harness, metrics as metrics_mod, plots
from .config import load_config, params_from_table, parse_overrides
from .engine import (EVENT_CSV_HEADER, ParameterError, Params,
                     init_simulation, step)
from .graph import (FormatError, load_edge_list, save_edge_list,
                    triad_census, weakly_connected_components,
                    largest_strongly_connected_component, in_degree_ccdf)
from .metrics import MetricsSnapshot, count_opinion_peaks, is_echo_chamber, snapshot
from .presets import PRESETS, get_preset

EXIT_RUNTIME = 1
EXIT_USAGE = 2


def _fail(message: str, code: int = EXIT_RUNTIME):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _build_params(preset, config, sets, seed) -> Params:
    try:
        params = get_preset(preset) if preset else Params()
        if config:
            params = params_from_table(load_config(config), base=params)
        if sets:
            params = params_from_table(parse_overrides(sets), base=params)
        if seed is not None:
            params = params.with_overrides(seed=seed)
        return params.validate()
    except (ParameterError, KeyError, json.JSONDecodeError) as exc:
        _fail(str(exc), EXIT_USAGE)


def _git_commit():
    try:
        out = subprocess.run(["git", "rev-parse", "HEAD"], capture_output=True,
                             text=True, timeout=5)
        return out.stdout.strip() or None
    except Exception:
        return None


def _write_manifest(out_dir, command, spec: dict, started: float):
    manifest = {
        "command": command,
        "spec": spec,
        "commit": _git_commit(),
        "wall_time_s": round(time.time() - started, 3),
    }
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _ensure_out(out_dir):
    try:
        os.makedirs(out_dir, exist_ok=True)
        probe = os.path.join(out_dir, ".write_probe")
        with open(probe, "w"):
            pass
        os.remove(probe)
    except OSError as exc:
        _fail(f"cannot write to {out_dir}: {exc}")


common_options = [
    click.option("--preset", type=click.Choice(sorted(PRESETS)), default=None,
                 help="Named parameter preset."),
    click.option("--config", type=click.Path(exists=True, dir_okay=False),
                 default=None, help="JSON or key=value parameter file."),
    click.option("--set", "sets", multiple=True, metavar="KEY=VALUE",
                 help="Override a single parameter (repeatable)."),
    click.option("--seed", type=int, default=None, help="Master RNG seed."),
]


def with_common(fn):
    for opt in reversed(common_options):
        fn = opt(fn)
    return fn


@click.group()
def main():
    """Simulator and analysis toolkit for coevolving opinion polarization and
    network segregation in online social networks."""


# -- run ---------------------------------------------------------------------

@main.command()
@with_common
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--snapshot-every", type=int, default=10, show_default=True,
              help="Epochs between metric snapshots (1 epoch = N steps).")
@click.option("--initial-edges", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Start from this follower edge list instead "
                                 "of a random graph.")
@click.option("--svg/--no-svg", default=True, show_default=True)
def run(preset, config, sets, seed, out_dir, snapshot_every, initial_edges, svg):
    """Run one simulation to the echo-chamber steady state (or t_max) and
    export the metric series, final opinions, final edge list, and event log."""
    started = time.time()
    params = _build_params(preset, config, sets, seed)
    _ensure_out(out_dir)
    if snapshot_every < 1:
        _fail("--snapshot-every must be >= 1", EXIT_USAGE)

    initial_graph = None
    id_map = None
    if initial_edges:
        try:
            initial_graph, id_map = load_edge_list(initial_edges)
        except (FormatError, OSError) as exc:
            _fail(str(exc))

    state = init_simulation(params, initial_graph=initial_graph)
    n = state.graph.n
    snapshots = [snapshot(state)]
    status, stop_t = "censored", params.t_max
    while state.t < params.t_max:
        for _ in range(min(snapshot_every * n, params.t_max - state.t)):
            step(state)
        snapshots.append(snapshot(state))
        if is_echo_chamber(state):
            status, stop_t = "converged", state.t
            break

    _write_csv(os.path.join(out_dir, "series.csv"), MetricsSnapshot.CSV_HEADER,
               [s.as_csv_row() for s in snapshots])
    _write_csv(os.path.join(out_dir, "opinions_final.csv"), ["node", "opinion"],
               [[i, o] for i, o in enumerate(state.opinions)])
    _write_csv(os.path.join(out_dir, "events.csv"), EVENT_CSV_HEADER,
               [ev.as_csv_row() for ev in state.event_log])
    save_edge_list(state.graph, os.path.join(out_dir, "edges_final.txt"))
    if id_map:
        _write_csv(os.path.join(out_dir, "node_ids.csv"), ["name", "node"],
                   sorted(id_map.items(), key=lambda kv: kv[1]))
    summary = {
        "status": status,
        "t": stop_t,
        "peaks": count_opinion_peaks(state.opinions),
        "components": len(weakly_connected_components(state.graph)),
        "params": asdict(state.params),
    }
    with open(os.path.join(out_dir, "run.json"), "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if svg:
        plots.plot_series(snapshots, os.path.join(out_dir, "run.svg"))
    _write_manifest(out_dir, "run", asdict(state.params), started)
    click.echo(f"{status} at t={stop_t} "
               f"(peaks={summary['peaks']}, components={summary['components']})")


# -- epsilon sweep -------------------------------------------------------------

@main.command()
@with_common
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--values", default="0.2,0.3,0.4,0.6,0.8,1.0", show_default=True,
              help="Comma-separated epsilon values.")
@click.option("--runs", type=int, default=20, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--svg/--no-svg", default=True, show_default=True)
def epsilon(preset, config, sets, seed, out_dir, values, runs, workers, svg):
    """Sweep the confidence bound and tabulate final opinion peaks/spread."""
    started = time.time()
    params = _build_params(preset or "fig4", config, sets, None)
    master_seed = seed if seed is not None else 0
    _ensure_out(out_dir)
    eps_values = [float(v) for v in values.split(",") if v.strip()]
    rows = harness.sweep_epsilon(eps_values, runs, params,
                                 master_seed=master_seed, workers=workers)
    _write_csv(os.path.join(out_dir, "epsilon.csv"),
               ["epsilon", "runs", "excluded", "mean_peaks", "std_peaks",
                "mean_max_distance", "std_max_distance"],
               [[r.epsilon, len(r.results),
                 sum(1 for x in r.results if x.status == harness.EXCLUDED),
                 r.mean_peaks, r.std_peaks,
                 r.mean_max_distance, r.std_max_distance] for r in rows])
    if svg:
        plots.plot_epsilon_rows(rows, os.path.join(out_dir, "epsilon.svg"))
    _write_manifest(out_dir, "epsilon",
                    {"base": asdict(params), "values": eps_values,
                     "runs": runs, "master_seed": master_seed}, started)
    click.echo(f"wrote {out_dir}/epsilon.csv")


# -- (mu, q) sweep -------------------------------------------------------------

@main.command()
@with_common
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--mu", "mu_values", default="0.001,0.01,0.1,0.5", show_default=True)
@click.option("--q", "q_values", default="0.001,0.01,0.1,0.5", show_default=True)
@click.option("--runs", type=int, default=20, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--svg/--no-svg", default=True, show_default=True)
def sweep(preset, config, sets, seed, out_dir, mu_values, q_values, runs,
          workers, svg):
    """Grid sweep of influence strength and rewiring rate; reports
    time-to-echo-chamber statistics per cell."""
    started = time.time()
    params = _build_params(preset or "fig6a", config, sets, None)
    master_seed = seed if seed is not None else 0
    _ensure_out(out_dir)
    spec = harness.SweepSpec(
        mu_values=[float(v) for v in mu_values.split(",") if v.strip()],
        q_values=[float(v) for v in q_values.split(",") if v.strip()],
        runs_per_cell=runs, base=params, master_seed=master_seed)
    cells = harness.sweep_mu_q(spec, workers=workers)
    _write_csv(os.path.join(out_dir, "mu_q.csv"),
               ["mu", "q", "runs", "converged", "censored", "excluded",
                "mean_time", "std_time", "mean_time_censored_at_tmax"],
               [[c.mu, c.q, len(c.results), len(c.converged_times),
                 c.censored, c.excluded, c.mean_time, c.std_time,
                 c.mean_time_censored_at_max(params.t_max)] for c in cells])
    if svg:
        plots.plot_mu_q_grid(cells, params.t_max, os.path.join(out_dir, "mu_q.svg"))
    _write_manifest(out_dir, "sweep",
                    {"base": asdict(params), "mu": spec.mu_values,
                     "q": spec.q_values, "runs": runs,
                     "master_seed": master_seed}, started)
    click.echo(f"wrote {out_dir}/mu_q.csv")


# -- N scaling -----------------------------------------------------------------

@main.command()
@with_common
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--n-values", default="50,100,200,400", show_default=True)
@click.option("--runs", type=int, default=10, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--svg/--no-svg", default=True, show_default=True)
def scaling(preset, config, sets, seed, out_dir, n_values, runs, workers, svg):
    """Time to echo chamber versus network size at fixed edge density."""
    started = time.time()
    params = _build_params(preset or "fig6b", config, sets, None)
    master_seed = seed if seed is not None else 0
    _ensure_out(out_dir)
    sizes = [int(v) for v in n_values.split(",") if v.strip()]
    rows = harness.scaling_in_n(sizes, runs, params, master_seed=master_seed,
                                workers=workers)
    xs = [r.n for r in rows]
    ys = [r.mean_time for r in rows]
    fit = {}
    if len(set(xs)) >= 2:
        slope, intercept, r2 = harness.linear_fit(xs, ys)
        fit = {"slope": slope, "intercept": intercept, "r2": r2}
    else:
        click.echo("single N value: no linear fit", err=True)
    _write_csv(os.path.join(out_dir, "scaling.csv"),
               ["n", "e", "runs", "converged", "censored", "excluded",
                "mean_time", "std_time"],
               [[r.n, r.e, len(r.results), len(r.times),
                 sum(1 for x in r.results if x.status == harness.CENSORED),
                 sum(1 for x in r.results if x.status == harness.EXCLUDED),
                 r.mean_time, r.std_time] for r in rows])
    if svg:
        plots.plot_scaling_rows(rows, os.path.join(out_dir, "scaling.svg"))
    _write_manifest(out_dir, "scaling",
                    {"base": asdict(params), "n_values": sizes, "runs": runs,
                     "master_seed": master_seed, "fit": fit}, started)
    click.echo(f"wrote {out_dir}/scaling.csv")


# -- strategies ----------------------------------------------------------------

@main.command()
@with_common
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--runs", type=int, default=20, show_default=True)
@click.option("--ccdf/--no-ccdf", default=False, show_default=True,
              help="Also run the large-scale in-degree CCDF comparison "
                   "(fig7b preset; slow).")
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--svg/--no-svg", default=True, show_default=True)
def strategies(preset, config, sets, seed, out_dir, runs, ccdf, workers, svg):
    """Matched-seed comparison of the three rewiring strategies."""
    started = time.time()
    params = _build_params(preset or "fig7a", config, sets, None)
    master_seed = seed if seed is not None else 0
    _ensure_out(out_dir)
    ccdf_params = get_preset("fig7b") if ccdf else None
    comp = harness.compare_strategies(runs, params, master_seed=master_seed,
                                      ccdf_params=ccdf_params, workers=workers)
    _write_csv(os.path.join(out_dir, "strategies.csv"),
               ["strategy", "runs", "excluded", "mean_closed_triads",
                "mean_convergence_time", "mean_peaks", "max_in_degree"],
               [[s.strategy, len(s.results),
                 sum(1 for x in s.results if x.status == harness.EXCLUDED),
                 s.mean_closed_triads, s.mean_convergence_time, s.mean_peaks,
                 "" if s.max_in_degree is None else s.max_in_degree]
                for s in comp.by_strategy.values()])
    _write_csv(os.path.join(out_dir, "triad_pvalues.csv"),
               ["strategy_a", "strategy_b", "p_value"],
               [[a, b, p] for (a, b), p in comp.triad_pvalues.items()])
    for name, stats in comp.by_strategy.items():
        if stats.ccdf:
            _write_csv(os.path.join(out_dir, f"ccdf_{name}.csv"),
                       ["in_degree", "fraction_ge"], stats.ccdf)
    if svg and ccdf:
        plots.plot_strategy_ccdfs(comp.by_strategy,
                                  os.path.join(out_dir, "ccdf.svg"))
    _write_manifest(out_dir, "strategies",
                    {"base": asdict(params), "runs": runs, "ccdf": ccdf,
                     "master_seed": master_seed}, started)
    click.echo(f"wrote {out_dir}/strategies.csv")


# -- validate ------------------------------------------------------------------

@main.command()
@with_common
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
@click.option("--edges", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--labels", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--hashtags", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--fixture", is_flag=True,
              help="Use the bundled synthetic two-cluster fixture.")
@click.option("--epoch-budget", type=int, default=10_000, show_default=True)
@click.option("--svg/--no-svg", default=True, show_default=True)
def validate(preset, config, sets, seed, out_dir, edges, labels, hashtags,
             fixture, epoch_budget, svg):
    """Run the calibrated model until it matches the empirical segregation
    level and export the comparison report."""
    started = time.time()
    _ensure_out(out_dir)
    if fixture:
        fdir = fixtures.bundled_fixture_dir()
        edges = edges or os.path.join(fdir, "edges.txt")
        labels = labels or os.path.join(fdir, "labels.txt")
        hashtags = hashtags or os.path.join(fdir, "hashtags.txt")
    if not edges or not labels:
        _fail("--edges and --labels are required (or use --fixture)", EXIT_USAGE)

    try:
        emp_graph, emp_partition, _ids = empirical.load_labeled_network(edges, labels)
    except (FormatError, empirical.DataError, OSError) as exc:
        _fail(str(exc))

    if preset or config or sets:
        params = _build_params(preset, config, sets, seed)
        if params.n != emp_graph.n:
            density = params.e / (params.n * (params.n - 1))
            params = params.with_overrides(
                n=emp_graph.n,
                e=round(density * emp_graph.n * (emp_graph.n - 1)))
    else:
        # defaults: the calibrated dynamics parameters on a follower graph
        # with mean out-degree 4; slow influence keeps the retweet-network
        # snapshots two-sided through the segregation transition
        params = Params(n=emp_graph.n, e=4 * emp_graph.n, epsilon=0.65,
                        mu=0.015, p=0.25, q=0.25, l=10, strategy="random",
                        t_max=epoch_budget * emp_graph.n + 1)
    if seed is not None:
        params = params.with_overrides(seed=seed)
    if params.t_max < epoch_budget * emp_graph.n:
        params = params.with_overrides(t_max=epoch_budget * emp_graph.n + 1)

    report = empirical.validation_run(params, emp_graph, emp_partition,
                                      epoch_budget=epoch_budget)
    dt_values = None
    coverage = None
    if hashtags:
        try:
            vectors, coverage, _top = empirical.hashtag_vectors(hashtags)
        except (FormatError, OSError) as exc:
            _fail(str(exc))
        dt_values = [empirical.empirical_opinion_distance(a, b)
                     for i, a in enumerate(vectors) for b in vectors[i + 1:]]
    empirical.export_validation_report(report, out_dir, dt_distances=dt_values)
    if coverage is not None:
        meta_path = os.path.join(out_dir, "meta.json")
        with open(meta_path) as fh:
            meta = json.load(fh)
        meta["hashtag_coverage"] = coverage
        with open(meta_path, "w") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if svg and report.snapshots:
        plots.plot_series(report.snapshots, os.path.join(out_dir, "series.svg"))
    _write_manifest(out_dir, "validate",
                    {"params": asdict(report.params), "edges": str(edges),
                     "labels": str(labels), "hashtags": str(hashtags),
                     "epoch_budget": epoch_budget}, started)
    state_word = "censored" if report.censored else "matched"
    click.echo(f"{state_word}: s_emp={report.s_emp:.4f} "
               f"stop_epoch={report.stop_epoch} snapshots={len(report.snapshots)}")
    if report.censored:
        sys.exit(EXIT_RUNTIME)


# -- metrics -------------------------------------------------------------------

@main.command("metrics")
@click.option("--edges", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--labels", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="Write the JSON report here instead of stdout.")
def metrics_cmd(edges, labels, out_path):
    """Structural metrics of an edge-list graph (triads, components, CCDF,
    and segregation when labels are given)."""
    try:
        g, ids = load_edge_list(edges)
    except (FormatError, OSError) as exc:
        _fail(str(exc))
    census = triad_census(g)
    scc, _scc_ids = largest_strongly_connected_component(g)
    report = {
        "n": g.n,
        "e": g.edge_count,
        "closed_triads": census.closed,
        "open_triads": census.open,
        "triad_fraction": census.fraction,
        "weakly_connected_components": len(weakly_connected_components(g)),
        "largest_scc_n": scc.n,
        "largest_scc_e": scc.edge_count,
        "in_degree_ccdf": in_degree_ccdf(g),
    }
    if labels:
        try:
            raw = empirical.load_labels(labels)
        except (FormatError, OSError) as exc:
            _fail(str(exc))
        names = {v: k for k, v in ids.items()}
        values = sorted(set(raw.values()))
        code = {v: i for i, v in enumerate(values)}
        try:
            partition = {u: code[raw[names[u]]] for u in range(g.n)}
        except KeyError as exc:
            _fail(f"node {exc} has no label")
        report["segregation"] = metrics_mod.segregation_index(g, partition)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


# -- serve ---------------------------------------------------------------------

@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8765, show_default=True)
@click.option("--static-dir", type=click.Path(exists=True, file_okay=False),
              default=None, help="Serve a browser UI from this directory.")
def serve(host, port, static_dir):
    """Long-running session server for the interactive demo (JSON over
    WebSocket at /ws)."""
    from . import server as server_mod

    click.echo(f"serving on ws://{host}:{port}/ws")
    server_mod.serve(host=host, port=port, static_dir=static_dir)


if __name__ == "__main__":
    main()
