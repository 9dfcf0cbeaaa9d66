"""Kernel selection: compiled extension when built, numpy fallback otherwise."""

try:
    from ._fastkernel import (  # type: ignore[attr-defined]
        BACKEND,
        exchange_violation,
        independence_table,
        rank_table,
        subset_rank,
    )
except ImportError:
    from ._pykernel import (
        BACKEND,
        exchange_violation,
        independence_table,
        rank_table,
        subset_rank,
    )

__all__ = [
    "BACKEND",
    "exchange_violation",
    "independence_table",
    "rank_table",
    "subset_rank",
]
