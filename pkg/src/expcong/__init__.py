"""Solutions of a_1 g_1^{x_1} + a_2 g_2^{x_2} + a_3 g_3^{x_3} = b over finite fields.

Exact counting and density census, a baby-step/giant-step classical solver,
and classical-vs-quantum cost models with a simulated Grover/BBHT search.
"""
from .arith import Factorization, OrderInfo, factorize, multiplicative_order
from .census import (
    CensusReport,
    DensityReport,
    EquationInstance,
    SearchRegion,
    count_all_b,
    count_brute,
    count_via_charsum,
    min_r,
    weil_check,
)
from .dlog import DlogTable, build_table, dlog
from .errors import CapacityError, DomainError, ParameterError
from .ff import (
    Field,
    FieldElement,
    FieldParams,
    additive_character,
    ff_add,
    ff_inv,
    ff_mul,
    ff_pow,
    ff_trace,
    field_from_spec,
    prime_field,
)
from .kernels import backend
from .qmodel import (
    BBHT,
    CostReport,
    GroverRun,
    KnownM,
    cost_report,
    grover_closed_form,
    grover_search,
    quantum_solve_simulated,
    ratio_scan,
)
from .solver import SolveOutcome, SolvePlan, Status, plan, solve_classical, verify

__version__ = "0.1.0"

__all__ = [
    "additive_character",
    "backend",
    "BBHT",
    "build_table",
    "CapacityError",
    "CensusReport",
    "cost_report",
    "CostReport",
    "count_all_b",
    "count_brute",
    "count_via_charsum",
    "DensityReport",
    "dlog",
    "DlogTable",
    "DomainError",
    "EquationInstance",
    "Factorization",
    "factorize",
    "ff_add",
    "ff_inv",
    "ff_mul",
    "ff_pow",
    "ff_trace",
    "Field",
    "field_from_spec",
    "FieldElement",
    "FieldParams",
    "grover_closed_form",
    "grover_search",
    "GroverRun",
    "KnownM",
    "min_r",
    "multiplicative_order",
    "OrderInfo",
    "ParameterError",
    "plan",
    "prime_field",
    "quantum_solve_simulated",
    "ratio_scan",
    "SearchRegion",
    "solve_classical",
    "SolveOutcome",
    "SolvePlan",
    "Status",
    "verify",
    "weil_check",
]
