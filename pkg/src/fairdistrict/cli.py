"""Command-line entry point.

Exit codes: 0 success, 1 targets not met, 2 bad input, 3 internal invariant
violation, 4 infeasible seeding.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from .ensemble import analysis
from .ensemble.analysis import Scenario, parse_sweep
from .ensemble.chain import PRNG_NAME, InfeasibleSeedingError, run_chain
from .ensemble.graph import GRID_PATTERNS, GraphError, GraphInstance, grid_graph
from .ensemble.metrics import BatchEvaluator
from .intervals import Instance, format_fraction, to_fraction
from .oracle import AtomInstance, EnumerationLimitError, brute_max_competitive, brute_minmax_seats
from .protocol import ProtocolInvariantError, build_gt_partition
from .targets import battleground, geometric_target, seat_bounds

EXIT_OK = 0
EXIT_UNMET = 1
EXIT_INPUT = 2
EXIT_INVARIANT = 3
EXIT_INFEASIBLE = 4

DEFAULTS: dict[str, Any] = {
    "steps": 50000,
    "burn_in": 1000,
    "seed": 0,
    "epsilon": None,
    "dataset": None,
    "belief_1": None,
    "belief_2": None,
    "deviate": [],
    "deviation_seed": None,
    "out": "-",
    "summary": None,
    "sweep_out": None,
    "rows": 6,
    "cols": 6,
    "pattern": "uniform",
    "m": 2,
    "pop": 100,
    "share": 0.5,
    "spread": 0.4,
}


class InputError(Exception):
    pass


def _read_json(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {path}: {exc}") from exc


def _write(path: str | None, text: str) -> None:
    if path is None:
        return
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _settings(args: argparse.Namespace, keys: Sequence[str]) -> dict[str, Any]:
    """Resolve each setting as flag, then config file, then built-in default."""
    config = {}
    if getattr(args, "config", None):
        config = _read_json(args.config)
        if not isinstance(config, dict):
            raise InputError("config file must hold a JSON object")
        config = {k.replace("-", "_"): v for k, v in config.items()}
    out = {}
    for key in keys:
        flag = getattr(args, key, None)
        if flag is not None and flag != []:
            out[key] = flag
        elif key in config:
            out[key] = config[key]
        else:
            out[key] = DEFAULTS[key]
    return out


def _load_instance(path: str) -> Instance:
    try:
        return Instance.from_json(_read_json(path))
    except (ValueError, TypeError) as exc:
        raise InputError(f"invalid instance: {exc}") from exc


def cmd_protocol(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    try:
        trace = build_gt_partition(inst)
    except ProtocolInvariantError as exc:
        _write(args.out, _dump({"error": str(exc), "trace": exc.trace.to_json()}))
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    _write(args.out, _dump(trace.to_json()))
    report = trace.report
    for pr in report.parties:
        print(
            f"party {pr.party}: target {pr.target} achieved {pr.achieved} "
            f"({'met' if pr.satisfied else 'NOT met'})",
            file=sys.stderr,
        )
    return EXIT_OK if report.satisfied else EXIT_UNMET


def cmd_targets(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    rows = []
    for i in (1, 2):
        bg = battleground(inst, i)
        lo, hi = seat_bounds(inst, i, bg.m_i)
        rows.append({"party": i, "min": lo, "max": hi, "m_i": bg.m_i, "target": geometric_target(lo, hi)})
    _write(args.out, _dump({"m": inst.m, "parties": rows}))
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    data = _read_json(args.instance)
    try:
        atoms = AtomInstance.of(int(data["m"]), data["values_1"], data.get("values_2"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"invalid atom instance: {exc}") from exc
    inst = atoms.to_instance()
    rows = []
    try:
        for i in (1, 2):
            lo, hi = brute_minmax_seats(atoms, i)
            rows.append(
                {
                    "party": i,
                    "brute_min": lo,
                    "brute_max": hi,
                    "closed_form": list(seat_bounds(inst, i)),
                    "brute_m_i": brute_max_competitive(atoms, i),
                    "m_i": battleground(inst, i).m_i,
                }
            )
    except EnumerationLimitError as exc:
        raise InputError(str(exc)) from exc
    _write(args.out, _dump({"m": atoms.m, "atoms": atoms.n, "exact_on_grid": atoms.exact_on_grid, "parties": rows}))
    return EXIT_OK


def cmd_gridgen(args: argparse.Namespace) -> int:
    s = _settings(args, ("rows", "cols", "pattern", "seed", "m", "epsilon", "pop", "share", "spread"))
    eps = s["epsilon"] if s["epsilon"] is not None else "2/100"
    try:
        g = grid_graph(
            int(s["rows"]),
            int(s["cols"]),
            s["pattern"],
            int(s["seed"]),
            m=int(s["m"]),
            epsilon=eps,
            pop=int(s["pop"]),
            share=float(s["share"]),
            spread=float(s["spread"]),
        )
    except (GraphError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    _write(args.out, g.dumps())
    return EXIT_OK


def _derived(out: str, suffix: str) -> str | None:
    return None if out == "-" else str(Path(out).with_suffix("")) + suffix


def cmd_ensemble(args: argparse.Namespace) -> int:
    s = _settings(
        args,
        (
            "steps",
            "burn_in",
            "seed",
            "epsilon",
            "dataset",
            "belief_1",
            "belief_2",
            "deviate",
            "deviation_seed",
            "out",
            "summary",
            "sweep_out",
        ),
    )
    try:
        g = GraphInstance.from_json(_read_json(args.graph))
        if s["epsilon"] is not None:
            g = GraphInstance(g.nodes, g.edges, g.m, to_fraction(s["epsilon"]))
        g.validate()
        datasets = g.datasets
        if not datasets:
            raise GraphError("graph carries no vote datasets")
        truth = s["dataset"] or datasets[0]
        beliefs = {1: s["belief_1"] or truth, 2: s["belief_2"] or truth}
        for name in (truth, *beliefs.values()):
            g.vote_columns(name)
        specs = s["deviate"] if isinstance(s["deviate"], list) else [s["deviate"]]
        scenarios: list[Scenario] = [sc for spec in specs for sc in parse_sweep(spec)]
        steps, burn_in, seed = int(s["steps"]), int(s["burn_in"]), int(s["seed"])
        if steps < burn_in or burn_in < 0:
            raise InputError("need steps >= burn-in >= 0")
        if not 0 <= seed < 2**64:
            raise InputError("seed must be a 64-bit unsigned integer")
    except (GraphError, ValueError) as exc:
        raise InputError(str(exc)) from exc

    try:
        run = run_chain(g, steps, burn_in, seed)
    except InfeasibleSeedingError as exc:
        print(f"infeasible seeding: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE

    ev = BatchEvaluator(g)
    table = analysis.evaluate(ev, run.states, run.sample_indices, truth, beliefs)
    summary: dict[str, Any] = {
        "prng": {"algorithm": "PCG64", "implementation": PRNG_NAME, "numpy": np.__version__, "seed": seed},
        "run": {
            "steps": steps,
            "burn_in": burn_in,
            "records": len(table),
            "accepted_moves": run.accepted,
            "m": g.m,
            "epsilon": format_fraction(g.epsilon),
            "nodes": g.n,
            "truth": truth,
            "beliefs": {str(p): name for p, name in beliefs.items()},
        },
    }
    if len(table):
        base, table, _ = analysis.run_scenario(g, ev, run.states, table, Scenario(None, "none", to_fraction(0)))
        summary["targets"] = [base.targets[p].to_json() for p in (1, 2)]
        summary["table"] = [r.to_json() for r in base.report]
        gap = analysis.compactness_gap(base.report)
        summary["compactness_gap"] = gap
        summary["compactness_within_10pct"] = None if gap is None else gap <= 0.10
        dev_seed = seed if s["deviation_seed"] is None else int(s["deviation_seed"])
        results = [base] + [
            analysis.run_scenario(g, ev, run.states, table, sc, seed=dev_seed)[0] for sc in scenarios
        ]
        if scenarios:
            summary["sweep"] = [r.to_json() for r in results]
            _write(s["sweep_out"] or _derived(s["out"], ".sweep.csv"), analysis.sweep_csv(results))
    else:
        summary["targets"] = None
        summary["table"] = []
        if scenarios:
            print("no records after burn-in; deviation sweep skipped", file=sys.stderr)
    _write(s["out"], analysis.records_csv(table))
    summary_path = s["summary"] or _derived(s["out"], ".summary.json")
    if summary_path is None:
        print(_dump(summary), file=sys.stderr, end="")
    else:
        _write(summary_path, _dump(summary))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fairdistrict",
        description="Geometric-target redistricting: exact protocol runs and ensemble analysis.",
    )
    p.add_argument("-v", "--verbose", action="store_true", help="log progress and tie-break notices to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, func: Callable[[argparse.Namespace], int], help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_, description=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("protocol", cmd_protocol, "build a partition meeting both geometric targets and write its trace")
    sp.add_argument("instance", help="instance JSON file ('-' for stdin)")
    sp.add_argument("--out", default="-", help="where to write the trace JSON (default: stdout)")

    sp = add("targets", cmd_targets, "report per-party seat bounds, battleground size and target")
    sp.add_argument("instance", help="instance JSON file ('-' for stdin)")
    sp.add_argument("--out", default="-", help="where to write the JSON report (default: stdout)")

    sp = add("oracle", cmd_oracle, "compare closed-form bounds with brute force on an atom instance")
    sp.add_argument("instance", help='atom JSON {"m", "values_1", optional "values_2"}')
    sp.add_argument("--out", default="-", help="where to write the comparison JSON (default: stdout)")

    sp = add("gridgen", cmd_gridgen, "generate a synthetic grid graph instance")
    sp.add_argument("--config", help="JSON file of defaults for any flag below (flags take precedence)")
    sp.add_argument("--rows", type=int, help=f"grid rows (default {DEFAULTS['rows']})")
    sp.add_argument("--cols", type=int, help=f"grid columns (default {DEFAULTS['cols']})")
    sp.add_argument("--pattern", choices=GRID_PATTERNS, help="planted party-1 vote field (default uniform)")
    sp.add_argument("--seed", type=int, help="seed for the clustered pattern (default 0)")
    sp.add_argument("--m", type=int, help=f"number of districts (default {DEFAULTS['m']})")
    sp.add_argument("--epsilon", help="population tolerance as a fraction, e.g. 0.02 or 1/50 (default 2/100)")
    sp.add_argument("--pop", type=int, help=f"population per cell (default {DEFAULTS['pop']})")
    sp.add_argument("--share", type=float, help="mean party-1 vote share (default 0.5)")
    sp.add_argument("--spread", type=float, help="range of the party-1 share across the field (default 0.4)")
    sp.add_argument("--out", default="-", help="where to write the graph JSON (default: stdout)")

    sp = add("ensemble", cmd_ensemble, "sample districtings with a recombination chain and report metrics")
    sp.add_argument("graph", help="graph JSON file ('-' for stdin)")
    sp.add_argument("--config", help="JSON file of defaults for any flag below (flags take precedence)")
    sp.add_argument("--steps", type=int, help=f"chain states including the seed state (default {DEFAULTS['steps']})")
    sp.add_argument("--burn-in", type=int, help=f"leading states to discard (default {DEFAULTS['burn_in']})")
    sp.add_argument("--seed", type=int, help="64-bit seed for the PCG64 generator (default 0)")
    sp.add_argument("--epsilon", help="override the graph's population tolerance, e.g. 0.02 or 1/50")
    sp.add_argument("--dataset", help="vote dataset used for EG and competitiveness (default: first in file)")
    sp.add_argument("--belief-1", help="dataset party 1 uses to count its seats (default: --dataset)")
    sp.add_argument("--belief-2", help="dataset party 2 uses to count its seats (default: --dataset)")
    sp.add_argument(
        "--deviate",
        action="append",
        help="deviation sweep PARTY:MODE:XS, PARTY in {1,2,both}, MODE in {uniform,random}, "
        "XS a comma list or range A..B/STEP in percent, e.g. both:uniform:-50..50/5 (repeatable)",
    )
    sp.add_argument("--deviation-seed", type=int, help="seed for random-mode deviations (default: --seed)")
    sp.add_argument("--out", help="records CSV path (default: stdout)")
    sp.add_argument("--summary", help="summary JSON path (default: OUT with its extension replaced by .summary.json, or stderr with stdout CSV)")
    sp.add_argument("--sweep-out", help="deviation sweep CSV path (default: OUT with its extension replaced by .sweep.csv)")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
