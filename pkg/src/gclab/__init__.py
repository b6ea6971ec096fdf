"""Graph collision toolkit: span-program witnesses, simulated quantum counting,
the three-step decision procedure and random-graph bounds."""

from .graph import (
    BudgetExhausted,
    Graph,
    GraphCollisionInstance,
    GraphCollisionPromise,
    GraphError,
    alpha_star,
    alpha_star_witness,
    deg_sum,
    has_collision,
    is_independent,
    sample_gnp,
)
from .span_program import (
    GCSpanProgram,
    WitnessReport,
    build_gc_span_program,
    evaluate,
    min_negative_witness,
    min_positive_witness,
    proof_negative_witness,
    proof_positive_witness,
    to_explicit,
)
from .counting import CountingSpec, bound_value, count_boosted, count_once, outcome_distribution
from .pipeline import PipelineConfig, PipelineReport, error_budget_trial, run_pipeline

__version__ = "0.1.0"
