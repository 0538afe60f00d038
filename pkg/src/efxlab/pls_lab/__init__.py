from .pipeline import PipelineResult, end_to_end
from .problems import (
    MAXIMIZE,
    MINIMIZE,
    FlipInstance,
    KneserInstance,
    LocalSearchResult,
    local_search,
    problem_from_json,
)
from .reductions import (
    KneserValuation,
    Lift,
    LiftedValuation,
    ReductionArtifact,
    big_m,
    flip_to_kneser,
    kneser_cost_circuit,
    kneser_to_efx,
    lift_two_to_n,
    map_back_flip,
    map_back_kneser,
    map_back_lift,
)

__all__ = [
    "PipelineResult", "end_to_end", "MAXIMIZE", "MINIMIZE", "FlipInstance", "KneserInstance",
    "LocalSearchResult", "local_search", "problem_from_json", "KneserValuation", "Lift",
    "LiftedValuation", "ReductionArtifact", "big_m", "flip_to_kneser", "kneser_cost_circuit",
    "kneser_to_efx", "lift_two_to_n", "map_back_flip", "map_back_kneser", "map_back_lift",
]
