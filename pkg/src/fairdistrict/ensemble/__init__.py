"""Ensemble analysis of districtings on precinct adjacency graphs."""

from .analysis import (
    EnsembleRecord,
    MetricOptimum,
    PartyTarget,
    RecordTable,
    Scenario,
    apply_deviation,
    ensemble_targets,
    evaluate,
    parse_sweep,
    price_of_fairness_report,
    records_csv,
    run_scenario,
    sweep_csv,
    with_gt,
)
from .chain import InfeasibleSeedingError, make_rng, recom_step, run_chain, seed_districting
from .enumeration import enumerate_districtings
from .graph import GraphError, GraphInstance, grid_graph
from .metrics import BatchEvaluator, competitive_count, efficiency_gap, polsby_popper

__all__ = [
    "BatchEvaluator",
    "EnsembleRecord",
    "GraphError",
    "GraphInstance",
    "InfeasibleSeedingError",
    "MetricOptimum",
    "PartyTarget",
    "RecordTable",
    "Scenario",
    "apply_deviation",
    "competitive_count",
    "efficiency_gap",
    "ensemble_targets",
    "enumerate_districtings",
    "evaluate",
    "grid_graph",
    "make_rng",
    "parse_sweep",
    "polsby_popper",
    "price_of_fairness_report",
    "recom_step",
    "records_csv",
    "run_chain",
    "run_scenario",
    "seed_districting",
    "sweep_csv",
    "with_gt",
]
