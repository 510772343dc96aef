"""Explicit integrators that certify non-convergence, and named path families.

``lemma_upcrossing_witness`` turns ``N >= 2`` up-crossings of ``(a, b)`` into
an integrator with variation 2, sup-norm ``1/(N-1)`` and ``int x dA >= b - a``.
``unboundedness_refuter`` turns a large value ``a`` of ``|x|`` into an
integrator of variation ``1/sqrt(a)`` whose integral against ``x`` is
``sqrt(a)`` in magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CadlagStep, IntegratorPath
from .errors import PreconditionError
from .functionals import upcrossing_indices
from .stieltjes import integrate_x_dA, primitive_of_density

__all__ = [
    "UpcrossingWitness",
    "lemma_upcrossing_witness",
    "unboundedness_refuter",
    "figure1_spikes",
    "figure2_jumps",
    "sawtooth",
    "random_step_path",
]


@dataclass(frozen=True)
class UpcrossingWitness:
    integrator: IntegratorPath
    levels: tuple[float, float]
    N: int
    integral: float
    variation: float
    sup_norm: float

    @property
    def certificate(self) -> tuple[float, float, float]:
        return self.integral, self.variation, self.sup_norm

    def check(self, tol: float = 1e-9) -> bool:
        a, b = self.levels
        return (
            self.integral >= (b - a) - tol
            and abs(self.variation - 2.0) <= tol
            and abs(self.sup_norm - 1.0 / (self.N - 1)) <= tol
        )


def lemma_upcrossing_witness(x: CadlagStep, a: float, b: float) -> UpcrossingWitness:
    """Integrator pairing a negative pulse on each low visit with a positive pulse on the next high visit."""
    pairs = upcrossing_indices(x, a, b)
    n = len(pairs)
    if n < 2:
        raise PreconditionError(f"need at least 2 up-crossings of ({a}, {b}), found {n}")
    seg = [x.segment_bounds(i) for i in range(x.n_segments)]
    # only the first N-1 crossings carry pulses; the N-th low visit bounds the last one
    stops = [seg[lo][0] for lo, _ in pairs]
    bps = [0.0]
    rates = [0.0]
    for i in range(n - 1):
        lo, hi = pairs[i]
        t_low, end_low = seg[lo]
        t_high, end_high = seg[hi]
        delta = 0.5 * min(
            end_low - t_low,
            end_high - t_high,
            t_high - t_low,
            stops[i + 1] - t_high,
        )
        h = 1.0 / (delta * (n - 1))
        for start, rate in ((t_low, -h), (t_high, h)):
            if bps[-1] == start:
                rates[-1] = rate
            else:
                bps.append(start)
                rates.append(rate)
            bps.append(start + delta)
            rates.append(0.0)
    density = CadlagStep(x.horizon, bps, rates)
    integrator = primitive_of_density(density)
    return UpcrossingWitness(
        integrator=integrator,
        levels=(float(a), float(b)),
        N=n,
        integral=integrate_x_dA(x, integrator),
        variation=integrator.total_variation(),
        sup_norm=integrator.sup_norm(),
    )


def unboundedness_refuter(x: CadlagStep, level: float) -> tuple[IntegratorPath, float]:
    """Return ``(A, int x dA)`` for ``A`` the primitive of ``1/(sqrt(a) h) 1_[t, t+h]``.

    ``[t, t+h)`` is the longest constancy segment on which ``|x|`` takes its
    largest value ``a >= level``; then ``||A||(T) = ||A||_inf = 1/sqrt(a)`` and
    ``|int x dA| = sqrt(a)``.
    """
    if not level > 0:
        raise PreconditionError("level must be positive")
    best = None
    for i, v in enumerate(x.values):
        start, end = x.segment_bounds(i)
        if end <= start or abs(v) < level:
            continue
        key = (abs(v), end - start, -start)
        if best is None or key > best[0]:
            best = (key, start, end, abs(v))
    if best is None:
        raise PreconditionError(f"|x| never reaches {level} on a segment of positive length")
    _, start, end, amp = best
    h = end - start
    rate = 1.0 / (math.sqrt(amp) * h)
    if start == 0.0:
        bps, rates = [0.0, end], [rate, 0.0]
    else:
        bps, rates = [0.0, start, end], [0.0, rate, 0.0]
    if end == x.horizon:
        bps, rates = bps[:-1], rates[:-1]
    integrator = primitive_of_density(CadlagStep(x.horizon, bps, rates))
    return integrator, integrate_x_dA(x, integrator)


def figure1_spikes(n: int, horizon: float = 1.0) -> CadlagStep:
    """``1_[T/2 - T/n, T/2)``: a spike that shrinks into the midpoint."""
    if n < 3:
        raise PreconditionError("figure1_spikes needs n >= 3")
    return CadlagStep.indicator(horizon / 2 - horizon / n, horizon, end=horizon / 2)


def figure2_jumps(n: int, horizon: float = 1.0) -> CadlagStep:
    """``1_[T/n, T]``: a single jump drifting into the origin."""
    if n < 1:
        raise PreconditionError("figure2_jumps needs n >= 1")
    return CadlagStep.indicator(horizon / n, horizon)


def sawtooth(teeth: int, low: float = 0.0, high: float = 1.0, horizon: float = 1.0) -> CadlagStep:
    """Alternating ``low, high`` on ``2 * teeth`` equal segments."""
    if teeth < 1:
        raise PreconditionError("sawtooth needs at least one tooth")
    return CadlagStep.from_segments([low, high] * teeth, horizon)


def random_step_path(
    seed: int, segments: int, value_scale: float = 1.0, horizon: float = 1.0
) -> CadlagStep:
    """Seeded path with uniform breakpoints and values uniform on ``[-scale, scale]``."""
    if segments < 1:
        raise PreconditionError("segments must be at least 1")
    rng = np.random.default_rng(seed)
    inner = np.sort(rng.uniform(0.0, horizon, segments - 1))
    values = rng.uniform(-value_scale, value_scale, segments)
    return CadlagStep(horizon, [0.0, *inner.tolist()], values.tolist())
