"""Command-line front end.

All commands emit JSON (compact by default, --pretty for humans) and are
deterministic given their full flag set including --seed.  The default seed
is 0, overridable with the RIGID_SEED environment variable.

Exit codes: 2 parse error, 3 dimension too small, 4 no solution found,
5 scale exceeded, 6 precondition failed.
"""

from __future__ import annotations

import json
import os
import sys

import click

from .catalog import CATALOG
from .errors import (DimensionTooSmall, NotLocallyRigid, PreconditionFailed,
                     RigidgeoError, ScaleExceeded, ShapeMismatch)
from .exact import Configuration
from .graphs import (EdgeBijection, OrderedGraph, are_isomorphic,
                     is_cycle_isomorphism, random_graph,
                     vertex_map_from_edge_bijection)
from .rigidity import Framework, analyze as analyze_graph, measure
from .unlabeled import (DistanceMultiset, ReconstructOptions,
                        not_rr_pair, reconstruct as run_reconstruct,
                        same_measurement_variety_sampled, certify as run_certify)

EXIT_PARSE = 2
EXIT_DIM = 3
EXIT_NO_SOLUTION = 4
EXIT_SCALE = 5
EXIT_PRECONDITION = 6


def _default_seed() -> int:
    return int(os.environ.get("RIGID_SEED", "0"))


def _emit(obj, pretty: bool):
    if pretty:
        click.echo(json.dumps(obj, indent=2, sort_keys=True))
    else:
        click.echo(json.dumps(obj, sort_keys=True, separators=(",", ":")))


def _load_graph(path: str) -> OrderedGraph:
    try:
        text = open(path).read()
        if text.lstrip().startswith("{"):
            return OrderedGraph.from_json(text)
        return OrderedGraph.from_text(text)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        click.echo(f"error: cannot parse graph file {path}: {exc}", err=True)
        sys.exit(EXIT_PARSE)


def _load_distances(path: str):
    try:
        return DistanceMultiset.from_text(open(path).read())
    except (OSError, ValueError) as exc:
        click.echo(f"error: cannot parse distance file {path}: {exc}", err=True)
        sys.exit(EXIT_PARSE)


def _graph_dict(g: OrderedGraph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges]}


seed_option = click.option("--seed", type=int, default=None,
                           help="RNG seed (default: RIGID_SEED env or 0)")
pretty_option = click.option("--pretty", is_flag=True, help="indented JSON")


@click.group()
def main():
    """Graph rigidity analysis and unlabeled distance-geometry tools."""


@main.command("analyze")
@click.argument("graph_file")
@click.option("--dim", "-d", type=int, default=2, show_default=True)
@seed_option
@pretty_option
def analyze_cmd(graph_file, dim, seed, pretty):
    """Full rigidity report for a graph."""
    g = _load_graph(graph_file)
    seed = _default_seed() if seed is None else seed
    try:
        report = analyze_graph(g, dim, seed)
    except DimensionTooSmall as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_DIM)
    _emit(report.to_dict(g), pretty)


@main.command("reconstruct")
@click.argument("distance_file")
@click.option("--restarts", type=int, default=32, show_default=True)
@click.option("--max-time", type=float, default=None,
              help="soft time limit in seconds")
@click.option("--jobs", type=int, default=1, show_default=True,
              help="max worker processes")
@seed_option
@pretty_option
def reconstruct_cmd(distance_file, restarts, max_time, jobs, seed, pretty):
    """Recover all (graph, configuration) classes from unlabeled distances."""
    v, n, d = _load_distances(distance_file)
    seed = _default_seed() if seed is None else seed
    opts = ReconstructOptions(restarts=restarts, seed=seed,
                              max_time=max_time, jobs=jobs)
    try:
        result = run_reconstruct(v, n, d, opts)
    except ScaleExceeded as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_SCALE)
    except RigidgeoError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    sols = []
    for h, config in result.solutions:
        measured = sorted(measure(Framework(h, config)).values)
        residual = sum((a - b) ** 2 for a, b in zip(measured, v.values))
        sols.append({"graph": _graph_dict(h),
                     "coords": [list(p) for p in config.coords],
                     "residual": residual})
    _emit({"solutions": sols, "stats": result.stats}, pretty)
    if not sols:
        sys.exit(EXIT_NO_SOLUTION)


@main.command("certify")
@click.argument("distance_file")
@click.argument("graph_file")
@click.argument("coords_file")
@seed_option
@pretty_option
def certify_cmd(distance_file, graph_file, coords_file, seed, pretty):
    """Check a candidate (graph, configuration) pair against an instance."""
    v, n, d = _load_distances(distance_file)
    h = _load_graph(graph_file)
    seed = _default_seed() if seed is None else seed
    try:
        obj = json.loads(open(coords_file).read())
        coords = tuple(tuple(float(x) for x in p) for p in obj["coords"])
        q = Configuration(len(coords), len(coords[0]), coords, exact=False)
    except (OSError, ValueError, KeyError, IndexError,
            json.JSONDecodeError) as exc:
        click.echo(f"error: cannot parse coords file {coords_file}: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    try:
        ok = run_certify(v, n, d, h, q, seed=seed)
    except ShapeMismatch as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    except DimensionTooSmall as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_DIM)
    _emit({"certified": ok}, pretty)


@main.command("compare-matroid")
@click.argument("graph_file_1")
@click.argument("graph_file_2")
@click.argument("bijection_file", required=False)
@click.option("--max-circuits", type=int, default=10**5, show_default=True)
@pretty_option
def compare_matroid_cmd(graph_file_1, graph_file_2, bijection_file,
                        max_circuits, pretty):
    """Cycle-isomorphism verdict and, when possible, the vertex relabeling.

    The edge bijection defaults to the identity on edge indices; an optional
    file may list the target edge index for each source index (0-based).
    """
    g = _load_graph(graph_file_1)
    h = _load_graph(graph_file_2)
    if g.m != h.m:
        click.echo("error: edge counts differ", err=True)
        sys.exit(EXIT_PARSE)
    mapping = tuple(range(g.m))
    if bijection_file:
        try:
            tokens = open(bijection_file).read().replace(",", " ").split()
            mapping = tuple(int(t) for t in tokens if t not in "[]")
        except (OSError, ValueError) as exc:
            click.echo(f"error: cannot parse bijection file: {exc}", err=True)
            sys.exit(EXIT_PARSE)
    try:
        b = EdgeBijection(g, h, mapping)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    cyc = is_cycle_isomorphism(b, cap=max_circuits)
    vm = vertex_map_from_edge_bijection(b) if cyc else None
    verdict = ("isomorphic" if vm is not None
               else "2-isomorphic only" if cyc else "not cycle-isomorphic")
    _emit({"cycle_isomorphic": cyc,
           "vertex_map": list(vm.perm) if vm is not None else None,
           "verdict": verdict}, pretty)


@main.command("variety-pair")
@click.argument("graph_file")
@click.option("--edge", type=int, required=True,
              help="index (0-based) of the edge to remove")
@click.option("--new-edge", required=True,
              help="replacement vertex pair, e.g. '1,7'")
@click.option("--dim", "-d", type=int, default=2, show_default=True)
@click.option("--trials", type=int, default=3, show_default=True)
@click.option("--restarts", type=int, default=32, show_default=True)
@click.option("--out-prefix", default=None,
              help="write the two graphs to PREFIX_a.txt / PREFIX_b.txt")
@seed_option
@pretty_option
def variety_pair_cmd(graph_file, edge, new_edge, dim, trials, restarts,
                     out_prefix, seed, pretty):
    """Build the edge-swapped same-variety pair and test sampled equality."""
    g = _load_graph(graph_file)
    seed = _default_seed() if seed is None else seed
    try:
        i, j = (int(t) for t in new_edge.split(","))
    except ValueError:
        click.echo("error: --new-edge must be 'i,j'", err=True)
        sys.exit(EXIT_PARSE)
    try:
        a, b = not_rr_pair(g, edge, (i, j), dim, seed)
    except (PreconditionFailed, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PRECONDITION)
    if out_prefix:
        open(f"{out_prefix}_a.txt", "w").write(a.to_text())
        open(f"{out_prefix}_b.txt", "w").write(b.to_text())
    bij = EdgeBijection.identity(a, b)
    equal = same_measurement_variety_sampled(a, b, dim, trials=trials,
                                             seed=seed, bijection=bij,
                                             restarts=restarts)
    _emit({"graph_a": _graph_dict(a), "graph_b": _graph_dict(b),
           "equal_variety_sampled": equal,
           "isomorphic": are_isomorphic(a, b)}, pretty)


@main.command("generate")
@click.argument("name")
@click.option("--dim", "-d", type=int, default=2, show_default=True)
@click.option("--distances", is_flag=True,
              help="emit a distance-multiset instance instead of the graph")
@click.option("--out", default=None, help="write to a file instead of stdout")
@seed_option
def generate_cmd(name, dim, distances, out, seed):
    """Emit a catalog graph ('K4', 'W4', ...) or 'random:N:M', optionally as a
    measured generic distance instance."""
    seed = _default_seed() if seed is None else seed
    if name in CATALOG:
        g = CATALOG[name]
    elif name.startswith("random:"):
        try:
            _, ns, ms = name.split(":")
            g = random_graph(int(ns), int(ms), seed, no_isolated=True)
        except ValueError:
            click.echo("error: random spec must be 'random:N:M'", err=True)
            sys.exit(EXIT_PARSE)
    else:
        click.echo(f"error: unknown graph name {name!r}; "
                   f"choices: {', '.join(sorted(CATALOG))}", err=True)
        sys.exit(EXIT_PARSE)
    if distances:
        from .exact import random_generic_configuration
        config = random_generic_configuration(g.n, dim, seed).to_float()
        vals = measure(Framework(g, config)).values
        text = DistanceMultiset(vals).to_text(g.n, dim)
    else:
        text = g.to_text()
    if out:
        open(out, "w").write(text)
    else:
        click.echo(text, nl=False)


if __name__ == "__main__":
    main()
