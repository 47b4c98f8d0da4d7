"""Topology of the divisibility complexes of the integers: Betti numbers,
exact homology oracles, shadow inequalities and growth reports."""

from .asymptotics import ConvergenceRow, run_report
from .betti import (
    BettiVector,
    FVector,
    IdentityError,
    Method,
    betti_delta,
    betti_delta_shifted_count,
    betti_delta_tilde,
    euler_check_delta,
    euler_check_delta_tilde,
    f_vector_delta,
)
from .oracle import (
    MulticomplexModel,
    SimplicialComplexModel,
    build_delta_complex,
    build_divisor_multicomplex,
    homology_betti,
    multicomplex_betti,
    verify_shifted,
)
from .shadow import cascade, lower_shadow, upper_shadow, verify_shadow_bounds
from .sieve import (
    NumberTables,
    RangeError,
    SieveBudgetError,
    SieveTable,
    SummatoryTables,
    WeightCounters,
    build_sieve,
    build_tables,
    liouville_summatory,
    mertens,
    primorial_dim,
)

__version__ = "0.1.0"
