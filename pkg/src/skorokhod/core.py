"""Exact càdlàg step paths and continuous piecewise-linear integrators.

A :class:`CadlagStep` is stored as its jump skeleton: the times where the
value changes and the value held from each of those times onwards.  Every
functional used elsewhere in the package (sup-norm, total variation,
crossing counts, Stieltjes integrals) is a finite computation on that
skeleton, so nothing here samples a grid.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, HorizonMismatchError

__all__ = [
    "CMP_TOL",
    "CadlagStep",
    "PiecewiseLinear",
    "IntegratorPath",
    "MultiPath",
    "eval_path",
    "sup_norm",
    "total_variation",
    "total_variation_integrator",
    "restrict",
    "extend_tilde",
    "linear_combine",
    "extend_integrator",
    "sup_distance",
]

# comparison tolerance for float assertions; breakpoint times are compared exactly
CMP_TOL = 1e-9


def _as_float_tuple(xs: Iterable[float]) -> tuple[float, ...]:
    return tuple(float(x) for x in xs)


def _check_horizon(horizon: float) -> float:
    horizon = float(horizon)
    if not (horizon > 0 and math.isfinite(horizon)):
        raise DomainError(f"horizon must be a positive finite time, got {horizon!r}")
    return horizon


@dataclass(frozen=True)
class CadlagStep:
    """Finite right-continuous step function on ``[0, horizon]``.

    ``x(t) = values[i]`` for ``breakpoints[i] <= t < breakpoints[i+1]`` and
    ``x(horizon) = values[-1]``.  A breakpoint equal to ``horizon`` encodes a
    jump at the terminal time.  Adjacent equal values are merged on
    construction, so ``len(breakpoints) - 1`` is always the number of jumps.
    """

    horizon: float
    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        horizon = _check_horizon(self.horizon)
        bps = _as_float_tuple(self.breakpoints)
        vals = _as_float_tuple(self.values)
        if len(bps) != len(vals) or not bps:
            raise DomainError("breakpoints and values must be non-empty and of equal length")
        if bps[0] != 0.0:
            raise DomainError("first breakpoint must be 0")
        for left, right in zip(bps, bps[1:]):
            if not left < right:
                raise DomainError("breakpoints must be strictly increasing")
        if bps[-1] > horizon:
            raise DomainError("breakpoints must lie in [0, horizon]")
        if not all(math.isfinite(v) for v in vals):
            raise DomainError("values must be finite")
        keep_b = [bps[0]]
        keep_v = [vals[0]]
        for b, v in zip(bps[1:], vals[1:]):
            if v != keep_v[-1]:
                keep_b.append(b)
                keep_v.append(v)
        object.__setattr__(self, "horizon", horizon)
        object.__setattr__(self, "breakpoints", tuple(keep_b))
        object.__setattr__(self, "values", tuple(keep_v))

    # constructors -----------------------------------------------------

    @classmethod
    def constant(cls, value: float, horizon: float = 1.0) -> "CadlagStep":
        return cls(horizon, (0.0,), (value,))

    @classmethod
    def indicator(
        cls, start: float, horizon: float = 1.0, end: float | None = None, height: float = 1.0
    ) -> "CadlagStep":
        """``height * 1_[start, end)``, or ``height * 1_[start, horizon]`` when ``end`` is None."""
        if not 0 <= start <= horizon:
            raise DomainError("indicator start must lie in [0, horizon]")
        if end is None:
            if start == 0:
                return cls(horizon, (0.0,), (height,))
            return cls(horizon, (0.0, start), (0.0, height))
        if not start < end <= horizon:
            raise DomainError("indicator needs start < end <= horizon")
        if start == 0:
            return cls(horizon, (0.0, end), (height, 0.0))
        return cls(horizon, (0.0, start, end), (0.0, height, 0.0))

    @classmethod
    def from_segments(cls, values: Sequence[float], horizon: float = 1.0) -> "CadlagStep":
        """Equal-length segments carrying ``values`` in order."""
        m = len(values)
        bps = [horizon * i / m for i in range(m)]
        return cls(horizon, bps, values)

    # basic access -----------------------------------------------------

    @property
    def n_segments(self) -> int:
        return len(self.values)

    @property
    def jumps(self) -> list[tuple[float, float]]:
        """``(time, signed size)`` of each jump, in time order."""
        v = self.values
        return [(self.breakpoints[i], v[i] - v[i - 1]) for i in range(1, len(v))]

    def segment_bounds(self, i: int) -> tuple[float, float]:
        """``[start, end)`` of segment ``i``; the terminal point segment has ``start == end``."""
        start = self.breakpoints[i]
        end = self.breakpoints[i + 1] if i + 1 < len(self.breakpoints) else self.horizon
        return start, end

    def segment_index(self, t: float) -> int:
        if not 0 <= t <= self.horizon:
            raise DomainError(f"t={t!r} outside [0, {self.horizon!r}]")
        return bisect.bisect_right(self.breakpoints, t) - 1

    def __call__(self, t: float) -> float:
        return self.values[self.segment_index(t)]

    def evaluate(self, ts) -> np.ndarray:
        """Vectorised evaluation; ``ts`` must lie in ``[0, horizon]``."""
        ts = np.asarray(ts, dtype=float)
        if ts.size and (ts.min() < 0 or ts.max() > self.horizon):
            raise DomainError("evaluation times outside [0, horizon]")
        idx = np.searchsorted(np.asarray(self.breakpoints), ts, side="right") - 1
        return np.asarray(self.values)[idx]

    @property
    def terminal_value(self) -> float:
        return self.values[-1]

    def left_limit(self, t: float) -> float:
        """``x(t-)`` for ``0 < t <= horizon``."""
        if not 0 < t <= self.horizon:
            raise DomainError("left limit needs 0 < t <= horizon")
        return self.values[bisect.bisect_left(self.breakpoints, t) - 1]

    def sup_norm(self) -> float:
        return max(abs(v) for v in self.values)

    def total_variation(self) -> float:
        v = self.values
        return abs(v[0]) + sum(abs(b - a) for a, b in zip(v, v[1:]))

    def __neg__(self) -> "CadlagStep":
        return CadlagStep(self.horizon, self.breakpoints, [-v for v in self.values])

    def __add__(self, other: "CadlagStep") -> "CadlagStep":
        return linear_combine(self, other, 1.0, 1.0)

    def __sub__(self, other: "CadlagStep") -> "CadlagStep":
        return linear_combine(self, other, 1.0, -1.0)

    def scale(self, alpha: float) -> "CadlagStep":
        return CadlagStep(self.horizon, self.breakpoints, [alpha * v for v in self.values])

    def allclose(self, other: "CadlagStep", tol: float = CMP_TOL) -> bool:
        return self.horizon == other.horizon and sup_distance(self, other) <= tol


@dataclass(frozen=True)
class PiecewiseLinear:
    """Continuous piecewise-linear function given by its nodes.

    Used directly as a test function; :class:`IntegratorPath` adds the
    ``A(0) = 0`` requirement for integrators.
    """

    horizon: float
    nodes: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        horizon = _check_horizon(self.horizon)
        nodes = _as_float_tuple(self.nodes)
        vals = _as_float_tuple(self.values)
        if len(nodes) != len(vals) or len(nodes) < 2:
            raise DomainError("need at least two nodes with one value each")
        if nodes[0] != 0.0 or nodes[-1] != horizon:
            raise DomainError("nodes must start at 0 and end at the horizon")
        for left, right in zip(nodes, nodes[1:]):
            if not left < right:
                raise DomainError("nodes must be strictly increasing")
        if not all(math.isfinite(v) for v in vals):
            raise DomainError("values must be finite")
        object.__setattr__(self, "horizon", horizon)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, value: float, horizon: float = 1.0):
        return cls(horizon, (0.0, horizon), (value, value))

    def __call__(self, t: float) -> float:
        if not 0 <= t <= self.horizon:
            raise DomainError(f"t={t!r} outside [0, {self.horizon!r}]")
        return float(np.interp(t, self.nodes, self.values))

    def evaluate(self, ts) -> np.ndarray:
        return np.interp(np.asarray(ts, dtype=float), self.nodes, self.values)

    def sup_norm(self) -> float:
        return max(abs(v) for v in self.values)

    def total_variation(self) -> float:
        """``|f(0)| + sum |f(u_{i+1}) - f(u_i)|``; exact since f is monotone between nodes."""
        v = self.values
        return abs(v[0]) + sum(abs(b - a) for a, b in zip(v, v[1:]))


@dataclass(frozen=True)
class IntegratorPath(PiecewiseLinear):
    """Continuous piecewise-linear integrator with ``A(0) = 0``."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.values[0] != 0.0:
            raise DomainError("integrator must satisfy A(0) = 0")

    @classmethod
    def zero(cls, horizon: float = 1.0) -> "IntegratorPath":
        return cls(horizon, (0.0, horizon), (0.0, 0.0))

    @classmethod
    def identity(cls, horizon: float = 1.0) -> "IntegratorPath":
        return cls(horizon, (0.0, horizon), (0.0, horizon))

    def scale(self, alpha: float) -> "IntegratorPath":
        return IntegratorPath(self.horizon, self.nodes, [alpha * v for v in self.values])


@dataclass(frozen=True)
class MultiPath:
    """``R^d``-valued step path, stored componentwise."""

    components: tuple[CadlagStep, ...]

    def __post_init__(self) -> None:
        comps = tuple(self.components)
        if not comps:
            raise DomainError("a MultiPath needs at least one component")
        horizon = comps[0].horizon
        if any(c.horizon != horizon for c in comps):
            raise HorizonMismatchError("all components must share one horizon")
        object.__setattr__(self, "components", comps)

    @property
    def dimension(self) -> int:
        return len(self.components)

    @property
    def horizon(self) -> float:
        return self.components[0].horizon

    def __call__(self, t: float) -> tuple[float, ...]:
        return tuple(c(t) for c in self.components)


# module-level operations ------------------------------------------------


def eval_path(x: CadlagStep, t: float) -> float:
    return x(t)


def sup_norm(x: CadlagStep) -> float:
    return x.sup_norm()


def total_variation(v: CadlagStep) -> float:
    return v.total_variation()


def total_variation_integrator(a: PiecewiseLinear) -> float:
    return a.total_variation()


def restrict(x: CadlagStep, new_horizon: float) -> CadlagStep:
    """Restriction of ``x`` to ``[0, new_horizon]``."""
    if not 0 < new_horizon <= x.horizon:
        raise DomainError("restriction horizon must lie in (0, horizon]")
    k = bisect.bisect_right(x.breakpoints, new_horizon)
    return CadlagStep(new_horizon, x.breakpoints[:k], x.values[:k])


def extend_tilde(x: CadlagStep, eps: float) -> CadlagStep:
    """Embed ``x`` into a path on ``[0, T + 2 eps]`` with origin moved to ``eps``.

    The result is 0 on ``[0, eps)``, ``x(t - eps)`` on ``[eps, T + eps)`` and
    ``x(T)`` on ``[T + eps, T + 2 eps]``.
    """
    if not eps > 0:
        raise DomainError("eps must be positive")
    bps = [0.0] + [eps + s for s in x.breakpoints]
    vals = [0.0] + list(x.values)
    return CadlagStep(x.horizon + 2 * eps, bps, vals)


def linear_combine(x: CadlagStep, y: CadlagStep, alpha: float, beta: float) -> CadlagStep:
    """Pointwise ``alpha * x + beta * y`` on the merged breakpoint set."""
    if x.horizon != y.horizon:
        raise HorizonMismatchError(f"horizons differ: {x.horizon!r} vs {y.horizon!r}")
    bps = np.union1d(x.breakpoints, y.breakpoints)
    vals = alpha * x.evaluate(bps) + beta * y.evaluate(bps)
    return CadlagStep(x.horizon, bps.tolist(), vals.tolist())


def sup_distance(x: CadlagStep, y: CadlagStep) -> float:
    """``||x - y||_inf`` computed on the merged breakpoints."""
    if x.horizon != y.horizon:
        raise HorizonMismatchError(f"horizons differ: {x.horizon!r} vs {y.horizon!r}")
    bps = np.union1d(x.breakpoints, y.breakpoints)
    return float(np.max(np.abs(x.evaluate(bps) - y.evaluate(bps))))


def extend_integrator(a: IntegratorPath, new_horizon: float) -> IntegratorPath:
    """Continue ``a`` past its horizon at the constant level ``a(T)``."""
    if new_horizon < a.horizon:
        raise DomainError("cannot extend an integrator to a shorter horizon")
    if new_horizon == a.horizon:
        return a
    return IntegratorPath(
        new_horizon, a.nodes + (float(new_horizon),), a.values + (a.values[-1],)
    )
