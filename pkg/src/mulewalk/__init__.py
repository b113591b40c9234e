"""Expected walking distances of a piecer at a spinning mule.

The package computes, exactly or in floating point, how far a worker is
expected to walk per stroke while repairing randomly breaking threads:
by direct summation for the single-stroke model, by finite-horizon value
iteration for repeated rounds under three breakage laws, and it verifies
that the two independent-breakage formulations coincide via strong
probabilistic bisimulation.
"""

from .numerics import NumberMode, binomial, binomial_ratio, factorial
from .breakage import (
    BERNOULLI_ENUMERATION_CAP,
    BROKEN,
    FINE,
    Span,
    SummaryDistribution,
    bernoulli_distribution,
    count_broken,
    extremes_distribution,
    fixed_n_distribution,
    lbt,
    rbt,
    reflect_summary,
    summarize,
)
from .closed_form import (
    ClosedFormInstance,
    DeltaBreakdown,
    case_probabilities,
    closed_form_check,
    delta1,
    delta2,
    delta3,
    delta4,
    expected_distance,
)
from .piecer import (
    MuleModel,
    RoundChoice,
    ValueTable,
    compute_value_table,
    fixed_n_model,
    natural_model,
    optimized_model,
    per_round_values,
    resolve_round,
    simulate_relative_distance,
    value_iteration,
)
from .plts import (
    Partition,
    Plts,
    bisimilar,
    build_plts,
    coarsest_partition,
    disjoint_union,
    format_plts,
    minimal_expected_distance,
    quotient,
)
from .cli import (
    FIGURE7_PROBS,
    DayEstimate,
    Grid,
    RunConfig,
    emit_day_estimate,
    emit_figure7,
    emit_table,
    emit_table1,
    run_bisim_check,
)

__version__ = "0.1.0"

__all__ = [
    "NumberMode", "factorial", "binomial", "binomial_ratio",
    "FINE", "BROKEN", "Span", "SummaryDistribution",
    "lbt", "rbt", "count_broken", "summarize", "reflect_summary",
    "fixed_n_distribution", "bernoulli_distribution", "extremes_distribution",
    "BERNOULLI_ENUMERATION_CAP",
    "ClosedFormInstance", "DeltaBreakdown", "delta1", "delta2", "delta3",
    "delta4", "expected_distance", "case_probabilities", "closed_form_check",
    "RoundChoice", "MuleModel", "ValueTable", "resolve_round",
    "fixed_n_model", "natural_model", "optimized_model",
    "compute_value_table", "value_iteration", "per_round_values",
    "simulate_relative_distance",
    "Plts", "Partition", "build_plts", "coarsest_partition", "disjoint_union",
    "bisimilar", "quotient", "format_plts", "minimal_expected_distance",
    "Grid", "DayEstimate", "RunConfig", "FIGURE7_PROBS",
    "emit_table1", "emit_table", "emit_figure7", "emit_day_estimate",
    "run_bisim_check",
]
