from .base import (
    OXS,
    Additive,
    BudgetAdditive,
    ComposedRule,
    Table,
    UnitDemand,
    Valuation,
    apply_increasing,
    budget_cap,
    max_weight_assignment,
    register_json_type,
    table_from_dict,
    valuation_from_json,
)
from .checks import (
    CHECKS,
    CancelableWitness,
    ClassCheckResult,
    LayeredWitness,
    MonotoneWitness,
    SubmodularWitness,
    check_cancelable,
    check_monotone,
    check_submodular,
    check_weakly_well_layered,
    check_well_layered_at_price,
    greedy_trajectories,
    greedy_with_prices,
)
from .examples import CanonicalExample, canonical_examples, example1, example2, example3, goods


def value(v: Valuation, S: int):
    return v.value(S)


def marginal(v: Valuation, S: int, g: int):
    return v.marginal(S, g)


__all__ = [
    "OXS", "Additive", "BudgetAdditive", "ComposedRule", "Table", "UnitDemand", "Valuation",
    "apply_increasing", "budget_cap", "max_weight_assignment", "register_json_type",
    "table_from_dict", "valuation_from_json", "CHECKS", "CancelableWitness", "ClassCheckResult",
    "LayeredWitness", "MonotoneWitness", "SubmodularWitness", "check_cancelable",
    "check_monotone", "check_submodular", "check_weakly_well_layered",
    "check_well_layered_at_price", "greedy_trajectories", "greedy_with_prices",
    "CanonicalExample", "canonical_examples", "example1", "example2", "example3", "goods",
    "value", "marginal",
]
