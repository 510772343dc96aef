"""Combinatorial path functionals and the eps-quantization of a step path.

All counts are computed on the sequence of segment values: a step path
takes only finitely many values, each on a time set that is either an
interval or the terminal point, so every supremum over time points in the
definitions is attained at segment values.  Comparisons are strict and use
no tolerance, since slack would change integer outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import CadlagStep, linear_combine, sup_distance
from .errors import DomainError

__all__ = [
    "upcrossings",
    "upcrossing_indices",
    "oscillations",
    "oscillation_indices",
    "Quantization",
    "quantize",
    "quantization_bound_check",
]


def upcrossing_indices(x: CadlagStep, a: float, b: float) -> list[tuple[int, int]]:
    """Segment indices ``(low, high)`` of a maximal family of up-crossings.

    Greedy left-to-right scan: take the first segment below ``a``, then the
    first later segment above ``b``, and repeat.
    """
    if not a < b:
        raise DomainError(f"up-crossing levels need a < b, got a={a!r}, b={b!r}")
    pairs = []
    low = None
    for i, v in enumerate(x.values):
        if low is None:
            if v < a:
                low = i
        elif v > b:
            pairs.append((low, i))
            low = None
    return pairs


def upcrossings(x: CadlagStep, a: float, b: float) -> int:
    """Number of up-crossings of the band ``(a, b)`` by ``x``."""
    return len(upcrossing_indices(x, a, b))


def oscillation_indices(x: CadlagStep, eta: float) -> list[tuple[int, int]]:
    """Segment index pairs of a maximal chain of ``eta``-oscillations.

    Each pair ends at the earliest segment whose value is more than ``eta``
    away from some value seen since the previous pair ended; the next pair
    may start at that same segment.
    """
    if not eta > 0:
        raise DomainError(f"eta must be positive, got {eta!r}")
    vals = x.values
    pairs = []
    start = 0
    lo = hi = vals[0]
    lo_i = hi_i = 0
    for j in range(1, len(vals)):
        v = vals[j]
        if v - lo > eta:
            pairs.append((lo_i, j))
        elif hi - v > eta:
            pairs.append((hi_i, j))
        else:
            if v < lo:
                lo, lo_i = v, j
            if v > hi:
                hi, hi_i = v, j
            continue
        start = j
        lo = hi = v
        lo_i = hi_i = start
    return pairs


def oscillations(x: CadlagStep, eta: float) -> int:
    """Number of ``eta``-oscillations ``N_eta(x)``."""
    return len(oscillation_indices(x, eta))


@dataclass(frozen=True)
class Quantization:
    """The eps-skeleton of a path.

    ``jump_decomposition`` holds ``(z_k, tau_k)`` with ``z_0 = x(0)`` and
    ``z_k = x(tau_k) - x(tau_{k-1})``, so that the skeleton equals
    ``sum_k z_k * 1_[tau_k, T]``.
    """

    eps: float
    skeleton: CadlagStep
    stopping_times: tuple[float, ...]
    jump_count: int
    jump_decomposition: tuple[tuple[float, float], ...]

    def reconstruct(self) -> CadlagStep:
        horizon = self.skeleton.horizon
        total = CadlagStep.constant(0.0, horizon)
        for z, tau in self.jump_decomposition:
            total = linear_combine(total, CadlagStep.indicator(tau, horizon), 1.0, z)
        return total

    def approximation_error(self, x: CadlagStep) -> float:
        return sup_distance(x, self.skeleton)


def quantize(x: CadlagStep, eps: float) -> Quantization:
    """Stopping times where ``x`` first moves more than ``eps`` from its last recorded value."""
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps!r}")
    taus = [0.0]
    levels = [x.values[0]]
    for s, v in zip(x.breakpoints[1:], x.values[1:]):
        if abs(v - levels[-1]) > eps:
            taus.append(s)
            levels.append(v)
    skeleton = CadlagStep(x.horizon, taus, levels)
    decomposition = [(levels[0], 0.0)]
    decomposition += [(levels[k] - levels[k - 1], taus[k]) for k in range(1, len(taus))]
    return Quantization(
        eps=float(eps),
        skeleton=skeleton,
        stopping_times=tuple(taus),
        jump_count=len(taus) - 1,
        jump_decomposition=tuple(decomposition),
    )


def quantization_bound_check(x: CadlagStep, eps: float) -> tuple[int, int]:
    """Return ``(M^eps(x), N_{eps/2}(x))``; raises if the first exceeds the second."""
    m = quantize(x, eps).jump_count
    n = oscillations(x, eps / 2)
    if m > n:
        raise AssertionError(f"quantization jump count {m} exceeds N_(eps/2) = {n}")
    return m, n
