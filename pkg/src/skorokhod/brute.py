"""Exhaustive reference counts for up-crossings and eta-oscillations.

These maximize over every admissible choice of segment indices instead of
scanning greedily, so they serve as independent oracles for
:mod:`skorokhod.functionals`.  Cost is quadratic per path; fine for the
short paths used in verification.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

__all__ = ["brute_upcrossings", "brute_oscillations"]


def brute_upcrossings(values: Sequence[float], a: float, b: float) -> int:
    """Largest ``k`` with ``i_1 < j_1 < i_2 < ... < j_k``, ``v[i] < a`` and ``v[j] > b``."""
    return _upcrossings(tuple(values), a, b)


def brute_oscillations(values: Sequence[float], eta: float) -> int:
    """Largest ``k`` with ``i_1 < j_1 <= i_2 < j_2 <= ...`` and ``|v[j] - v[i]| > eta``."""
    return _oscillations(tuple(values), eta)


# results are memoized per value tuple: exhaustive corpora repeat paths often
@lru_cache(maxsize=65536)
def _upcrossings(vals: tuple[float, ...], a: float, b: float) -> int:
    m = len(vals)

    @lru_cache(maxsize=None)
    def best(start: int) -> int:
        out = 0
        for i in range(start, m):
            if vals[i] < a:
                for j in range(i + 1, m):
                    if vals[j] > b:
                        out = max(out, 1 + best(j + 1))
        return out

    return best(0)


@lru_cache(maxsize=65536)
def _oscillations(vals: tuple[float, ...], eta: float) -> int:
    m = len(vals)

    @lru_cache(maxsize=None)
    def best(start: int) -> int:
        out = 0
        for i in range(start, m):
            for j in range(i + 1, m):
                if abs(vals[j] - vals[i]) > eta:
                    out = max(out, 1 + best(j))
        return out

    return best(0)
