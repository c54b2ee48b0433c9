from ._core import (
    BudgetError,
    ConsistencyError,
    F_estimate,
    Hypergraph,
    InputError,
    Template,
    analytic_F_bound,
    complete_template,
    decide_positive_type,
    f_signature,
    is_valid,
    m_star,
    random_template,
    run_cli,
    transfer_counterexamples,
)

__all__ = [
    "BudgetError",
    "ConsistencyError",
    "F_estimate",
    "Hypergraph",
    "InputError",
    "Template",
    "analytic_F_bound",
    "complete_template",
    "decide_positive_type",
    "f_signature",
    "is_valid",
    "m_star",
    "random_template",
    "run_cli",
    "transfer_counterexamples",
]
