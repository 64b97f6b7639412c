"""Ensemble records, ensemble-derived targets, belief deviations and
price-of-fairness reports."""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Iterator, Sequence

import numpy as np

from ..intervals import to_fraction
from ..targets import geometric_target
from .graph import GraphInstance
from .metrics import BatchEvaluator

log = logging.getLogger(__name__)

RECORD_HEADER = ("sample", "seats_1", "seats_2", "eg", "competitive", "pp_mean", "gt")
SWEEP_HEADER = (
    "scenario",
    "deviating_party",
    "mode",
    "x",
    "target_1",
    "target_2",
    "samples",
    "gt_samples",
    "competitive_all",
    "competitive_gt",
    "abs_eg_all",
    "abs_eg_gt",
    "pp_mean_all",
    "pp_mean_gt",
    "note",
)
NO_GT = "no GT partition observed"
DEVIATION_MODES = ("uniform", "random")
# random deviations are drawn as floats and quantized to this many steps per percent
RANDOM_QUANTUM = 10**6


@dataclass(frozen=True)
class EnsembleRecord:
    sample: int
    seats_1: int
    seats_2: int
    eg: float
    competitive: int
    pp_mean: float
    gt: bool | None


@dataclass(frozen=True)
class RecordTable:
    """Column-wise metrics for a batch of districtings.

    ``seats_i`` is party i's seat count under its own belief dataset
    ``beliefs[i]``; ``eg`` and ``competitive`` use the ``truth`` dataset.
    """

    sample: np.ndarray
    seats_1: np.ndarray
    seats_2: np.ndarray
    eg: np.ndarray
    competitive: np.ndarray
    pp_mean: np.ndarray
    beliefs: dict[int, str]
    truth: str
    gt: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.sample)

    def seats(self, party: int) -> np.ndarray:
        return self.seats_1 if party == 1 else self.seats_2

    def records(self) -> Iterator[EnsembleRecord]:
        for k in range(len(self)):
            yield EnsembleRecord(
                int(self.sample[k]),
                int(self.seats_1[k]),
                int(self.seats_2[k]),
                float(self.eg[k]),
                int(self.competitive[k]),
                float(self.pp_mean[k]),
                None if self.gt is None else bool(self.gt[k]),
            )


def evaluate(
    ev: BatchEvaluator,
    states: np.ndarray,
    samples: Sequence[int],
    truth: str,
    beliefs: dict[int, str] | None = None,
) -> RecordTable:
    beliefs = dict(beliefs or {1: truth, 2: truth})
    d1, d2 = ev.district_vote_sums(states, truth)
    ties = int((d1 == d2).sum())
    if ties:
        log.info("%d district ties under %r broken toward party 2", ties, truth)
    return RecordTable(
        sample=np.asarray(samples, dtype=np.int64),
        seats_1=ev.seats(states, beliefs[1])[0],
        seats_2=ev.seats(states, beliefs[2])[1],
        eg=ev.efficiency_gap(states, truth),
        competitive=ev.competitive(states, truth),
        pp_mean=ev.pp_mean(states),
        beliefs=beliefs,
        truth=truth,
    )


def with_beliefs(table: RecordTable, ev: BatchEvaluator, states: np.ndarray, beliefs: dict[int, str]) -> RecordTable:
    """Same districtings with seat counts re-evaluated under new belief datasets."""
    return replace(
        table,
        seats_1=ev.seats(states, beliefs[1])[0],
        seats_2=ev.seats(states, beliefs[2])[1],
        beliefs=dict(beliefs),
        gt=None,
    )


@dataclass(frozen=True)
class PartyTarget:
    party: int
    min_seats: int
    max_seats: int
    target: int

    def to_json(self) -> dict[str, int]:
        return {"party": self.party, "min": self.min_seats, "max": self.max_seats, "target": self.target}


def ensemble_targets(table: RecordTable) -> dict[int, PartyTarget]:
    """Per party, the floor of the midpoint of its fewest and most seats over
    the ensemble, each party judged by its own beliefs."""
    if len(table) == 0:
        raise ValueError("cannot derive targets from an empty ensemble")
    out = {}
    for p in (1, 2):
        s = table.seats(p)
        lo, hi = int(s.min()), int(s.max())
        out[p] = PartyTarget(p, lo, hi, geometric_target(lo, hi))
    return out


def with_gt(table: RecordTable, targets: dict[int, PartyTarget]) -> RecordTable:
    gt = (table.seats_1 >= targets[1].target) & (table.seats_2 >= targets[2].target)
    return replace(table, gt=gt)


@dataclass(frozen=True)
class MetricOptimum:
    metric: str
    sense: str
    unconstrained: float | int | None
    constrained: float | int | None
    gt_samples: int

    @property
    def note(self) -> str:
        return NO_GT if self.gt_samples == 0 else ""

    def to_json(self) -> dict[str, Any]:
        return {
            "metric": self.metric,
            "sense": self.sense,
            "unconstrained": self.unconstrained,
            "constrained": self.constrained,
            "gt_samples": self.gt_samples,
            "note": self.note,
        }


def _best(values: np.ndarray, sense: str):
    if len(values) == 0:
        return None
    v = values.max() if sense == "max" else values.min()
    return v.item()


def price_of_fairness_report(table: RecordTable, targets: dict[int, PartyTarget] | None = None) -> list[MetricOptimum]:
    """Best value of each metric over all records and over GT-satisfying records."""
    if targets is not None:
        table = with_gt(table, targets)
    if table.gt is None:
        raise ValueError("records carry no GT flags; pass targets")
    columns = (
        ("competitive", "max", table.competitive),
        ("abs_eg", "min", np.abs(table.eg)),
        ("pp_mean", "max", table.pp_mean),
    )
    gt_count = int(table.gt.sum())
    return [
        MetricOptimum(name, sense, _best(col, sense), _best(col[table.gt], sense), gt_count)
        for name, sense, col in columns
    ]


def compactness_gap(report: list[MetricOptimum]) -> float | None:
    """Relative loss in best mean Polsby-Popper from imposing the target, or None
    when no record meets it."""
    row = next(r for r in report if r.metric == "pp_mean")
    if row.constrained is None or not row.unconstrained:
        return None
    return (row.unconstrained - row.constrained) / row.unconstrained


def deviation_dataset(source: str, party: int, mode: str, x: Fraction | int) -> str:
    return f"{source}~p{party}-{mode}{format(Fraction(x), '')}"


def apply_deviation(
    g: GraphInstance,
    party: int,
    mode: str,
    x: Fraction | int | str,
    seed: int = 0,
    source: str | None = None,
) -> tuple[GraphInstance, str]:
    """Add a belief dataset in which ``party`` misjudges its vote share.

    ``uniform`` scales the party's two-party share in every node by ``1 + x/100``
    (negative ``x`` deflates). ``random`` scales each node independently by
    ``1 + y/100`` with ``y`` uniform on ``[-|x|, |x|]``, quantized to
    ``1/RANDOM_QUANTUM`` percent so the stored dataset stays exact. Shares are
    clamped to ``[0, 1]`` and the opponent gets the complement of the node total.
    Returns the extended graph and the new dataset's name.
    """
    if party not in (1, 2):
        raise ValueError(f"party must be 1 or 2, got {party!r}")
    if mode not in DEVIATION_MODES:
        raise ValueError(f"mode must be one of {DEVIATION_MODES}, got {mode!r}")
    x = to_fraction(x)
    source = source or g.datasets[0]
    name = deviation_dataset(source, party, mode, x)
    if mode == "uniform":
        factors = [1 + x / 100] * g.n
    else:
        rng = np.random.Generator(np.random.PCG64(seed))
        draws = rng.uniform(-float(abs(x)), float(abs(x)), size=g.n) if x else np.zeros(g.n)
        factors = [1 + Fraction(round(y * RANDOM_QUANTUM), RANDOM_QUANTUM) / 100 for y in draws]
    votes = []
    for node, factor in zip(g.nodes, factors):
        v1, v2 = node.votes[source]
        total = v1 + v2
        own = v1 if party == 1 else v2
        if total == 0:
            votes.append((v1, v2))
            continue
        share = min(max(own / total * factor, Fraction(0)), Fraction(1))
        new_own = share * total
        votes.append((new_own, total - new_own) if party == 1 else (total - new_own, new_own))
    return g.with_dataset(name, votes), name


def _fmt(v: Any) -> str:
    if v is None:
        return "NA"
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, Fraction):
        return str(v)
    return str(v)


def records_csv(table: RecordTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RECORD_HEADER)
    for r in table.records():
        w.writerow([_fmt(v) for v in (r.sample, r.seats_1, r.seats_2, r.eg, r.competitive, r.pp_mean, r.gt)])
    return buf.getvalue()


@dataclass(frozen=True)
class Scenario:
    """One belief-deviation setting; ``party=None`` is the undeviated baseline."""

    party: int | None
    mode: str
    x: Fraction

    @property
    def name(self) -> str:
        if self.party is None:
            return "baseline"
        return f"p{self.party}-{self.mode}{format(self.x, '')}"


@dataclass(frozen=True)
class ScenarioResult:
    scenario: Scenario
    targets: dict[int, PartyTarget]
    report: list[MetricOptimum]
    samples: int

    def row(self) -> list[str]:
        by = {r.metric: r for r in self.report}
        gt = by["competitive"].gt_samples
        return [
            self.scenario.name,
            _fmt(self.scenario.party),
            self.scenario.mode if self.scenario.party is not None else "none",
            _fmt(self.scenario.x),
            str(self.targets[1].target),
            str(self.targets[2].target),
            str(self.samples),
            str(gt),
            _fmt(by["competitive"].unconstrained),
            _fmt(by["competitive"].constrained),
            _fmt(by["abs_eg"].unconstrained),
            _fmt(by["abs_eg"].constrained),
            _fmt(by["pp_mean"].unconstrained),
            _fmt(by["pp_mean"].constrained),
            NO_GT if gt == 0 else "",
        ]

    def to_json(self) -> dict[str, Any]:
        return {
            "scenario": self.scenario.name,
            "deviating_party": self.scenario.party,
            "mode": self.scenario.mode,
            "x": format(self.scenario.x, ""),
            "targets": [self.targets[p].to_json() for p in (1, 2)],
            "samples": self.samples,
            "optima": [r.to_json() for r in self.report],
        }


def run_scenario(
    g: GraphInstance,
    ev: BatchEvaluator,
    states: np.ndarray,
    base: RecordTable,
    scenario: Scenario,
    seed: int = 0,
) -> tuple[ScenarioResult, RecordTable, GraphInstance]:
    """Re-judge fixed chain states with the deviating party's beliefs.

    The chain itself ignores votes, so every scenario reuses the same states;
    only seat counts, targets and GT flags change.
    """
    if scenario.party is None:
        table = base
    else:
        g, name = apply_deviation(g, scenario.party, scenario.mode, scenario.x, seed=seed, source=base.truth)
        ev = BatchEvaluator(g) if ev.g is not g else ev
        beliefs = dict(base.beliefs)
        beliefs[scenario.party] = name
        table = with_beliefs(base, ev, states, beliefs)
    targets = ensemble_targets(table)
    table = with_gt(table, targets)
    report = price_of_fairness_report(table)
    return ScenarioResult(scenario, targets, report, len(table)), table, g


def sweep_csv(results: Sequence[ScenarioResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in results:
        w.writerow(r.row())
    return buf.getvalue()


def parse_sweep(spec: str) -> list[Scenario]:
    """Parse ``PARTY:MODE:XS`` where PARTY is 1, 2 or ``both`` and XS is a comma
    list of integers or ranges ``A..B/STEP`` (e.g. ``both:uniform:-50..50/5``)."""
    try:
        party_s, mode, xs_s = spec.split(":")
    except ValueError:
        raise ValueError(f"deviation spec {spec!r} is not PARTY:MODE:XS") from None
    if party_s not in ("1", "2", "both"):
        raise ValueError(f"deviating party must be 1, 2 or both, got {party_s!r}")
    if mode not in DEVIATION_MODES:
        raise ValueError(f"mode must be one of {DEVIATION_MODES}, got {mode!r}")
    xs: list[Fraction] = []
    for item in xs_s.split(","):
        if ".." in item:
            lo_s, rest = item.split("..")
            hi_s, _, step_s = rest.partition("/")
            lo, hi, step = int(lo_s), int(hi_s), int(step_s or 1)
            if step <= 0:
                raise ValueError("range step must be positive")
            xs.extend(Fraction(v) for v in range(lo, hi + 1, step))
        else:
            xs.append(to_fraction(item))
    parties = (1, 2) if party_s == "both" else (int(party_s),)
    return [Scenario(p, mode, x) for p in parties for x in xs]
