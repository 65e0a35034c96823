from __future__ import annotations

import functools

from hopflift import catalog
from hopflift.lifting import LiftingSolver, run_case


@functools.lru_cache(maxsize=None)
def solved(cid: str, tag: str | None = None) -> LiftingSolver:
    """Symbolic solution of a catalog case, shared across test modules."""
    S = LiftingSolver(catalog.load(cid, tag))
    S.run()
    return S


@functools.lru_cache(maxsize=None)
def full_report(cid: str, tag: str | None = None) -> dict:
    return run_case(catalog.load(cid, tag))
