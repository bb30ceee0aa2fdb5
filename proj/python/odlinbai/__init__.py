"""Fixed-budget best arm identification in linear bandits."""

from ._core import (
    BudgetTooSmallError,
    Design,
    Error,
    LinearBanditInstance,
    RankDeficientError,
    ZeroSpanError,
    algorithms,
    bench,
    compute_m,
    effective_dimension,
    g_of,
    gen_hard_instance,
    gen_mab_embedding,
    gen_sphere_instance,
    hardness_profile,
    instance_from_spec,
    load_instance,
    orthonormal_basis,
    prune_support,
    run,
    solve_g_optimal,
    theorem2_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")]
