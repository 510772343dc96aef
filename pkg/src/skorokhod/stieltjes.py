"""Lebesgue-Stieltjes integrals between step paths and piecewise-linear functions.

Two integrals are exact here:

* ``int f dv`` for a step path ``v`` integrates against the atomic measure
  ``v(0) delta_0 + sum_jumps dv(s) delta_s``.  The atom at 0 matches the
  ``|v(0)|`` term in the total variation.
* ``int x dA`` for a continuous piecewise-linear ``A``: on each constancy
  segment of ``x`` the integral is ``x * (A(end) - A(start))``.

The tau- and weak-* tests evaluate sequences to a finite depth; see
:mod:`skorokhod.reports` for what "converges" means at finite depth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .core import CadlagStep, IntegratorPath, PiecewiseLinear
from .errors import HorizonMismatchError
from .reports import (
    ConvergenceReport,
    first_index_below,
    growth_flag,
    tail_ok,
    tail_start,
)

__all__ = [
    "StieltjesMeasure",
    "IntegratorSequence",
    "integrate_f_dv",
    "integrate_x_dA",
    "IntegratorBank",
    "integration_by_parts_residual",
    "ibp_tolerance",
    "primitive_of_density",
    "hat_function",
    "default_test_family",
    "sup_distance_linear",
    "tau_convergence_test",
    "weak_star_test",
]


def _same_horizon(a, b) -> None:
    if a.horizon != b.horizon:
        raise HorizonMismatchError(f"horizons differ: {a.horizon!r} vs {b.horizon!r}")


@dataclass(frozen=True)
class StieltjesMeasure:
    """Atoms ``(time, mass)`` of the measure ``dv`` induced by a step path."""

    horizon: float
    times: tuple[float, ...]
    masses: tuple[float, ...]

    @classmethod
    def from_path(cls, v: CadlagStep) -> "StieltjesMeasure":
        vals = v.values
        masses = [vals[0]] + [vals[i] - vals[i - 1] for i in range(1, len(vals))]
        return cls(v.horizon, v.breakpoints, tuple(masses))

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.times, self.masses))

    def total_mass(self) -> float:
        return math.fsum(self.masses)

    def total_abs_mass(self) -> float:
        return math.fsum(abs(m) for m in self.masses)

    def integrate(self, f: PiecewiseLinear) -> float:
        _same_horizon(self, f)
        return float(np.dot(f.evaluate(self.times), self.masses))


def integrate_f_dv(f: PiecewiseLinear, v: CadlagStep) -> float:
    """``int_[0,T] f dv = f(0) v(0) + sum_s f(s) (v(s) - v(s-))``."""
    return StieltjesMeasure.from_path(v).integrate(f)


def integrate_x_dA(x: CadlagStep, a: PiecewiseLinear) -> float:
    """``int_0^T x dA`` for a step ``x`` and continuous piecewise-linear ``A``.

    Summing ``x * dA`` cell by cell over the merged breakpoints telescopes
    within each constancy segment of ``x``, so only ``A`` at the breakpoints
    of ``x`` and at ``T`` is needed.
    """
    _same_horizon(x, a)
    ends = np.append(np.asarray(x.breakpoints), x.horizon)
    increments = np.diff(a.evaluate(ends))
    return float(np.dot(x.values, increments))


class IntegratorBank:
    """Several fixed integrators evaluated together on the union of their nodes.

    Each integrator is linear between consecutive union nodes, so one
    interpolation on the shared grid gives all of them at once.
    """

    def __init__(self, integrators: Sequence[PiecewiseLinear]):
        if not integrators:
            raise ValueError("an integrator bank needs at least one integrator")
        self.horizon = integrators[0].horizon
        for a in integrators:
            _same_horizon(a, integrators[0])
        self.grid = np.unique(np.concatenate([np.asarray(a.nodes) for a in integrators]))
        self.table = np.vstack([a.evaluate(self.grid) for a in integrators])

    def __len__(self) -> int:
        return self.table.shape[0]

    def integrate(self, x: CadlagStep) -> np.ndarray:
        """``int_0^T x dA`` for every integrator of the bank."""
        _same_horizon(x, self)
        ends = np.asarray(x.breakpoints + (x.horizon,))
        grid = self.grid
        i = np.clip(np.searchsorted(grid, ends, side="right") - 1, 0, len(grid) - 2)
        w = (ends - grid[i]) / (grid[i + 1] - grid[i])
        at_ends = self.table[:, i] * (1 - w) + self.table[:, i + 1] * w
        return np.diff(at_ends, axis=1) @ np.asarray(x.values)


def ibp_tolerance(v: CadlagStep, a: PiecewiseLinear, rel: float = 1e-9) -> float:
    return rel * (1 + v.total_variation() * a.sup_norm() + a.total_variation() * v.sup_norm())


def integration_by_parts_residual(v: CadlagStep, a: IntegratorPath) -> float:
    """``int v dA + int A dv - v(T) A(T)``, zero up to rounding when ``A(0) = 0``."""
    _same_horizon(v, a)
    return integrate_x_dA(v, a) + integrate_f_dv(a, v) - v.terminal_value * a.values[-1]


def primitive_of_density(f: CadlagStep) -> IntegratorPath:
    """``A_f(t) = int_0^t f(u) du`` for a step density ``f``."""
    nodes = list(f.breakpoints)
    rates = list(f.values)
    if nodes[-1] == f.horizon:
        # terminal point segment has zero length
        nodes.pop()
        rates.pop()
    nodes.append(f.horizon)
    widths = np.diff(nodes)
    values = np.concatenate([[0.0], np.cumsum(np.asarray(rates) * widths)])
    return IntegratorPath(f.horizon, nodes, values.tolist())


def hat_function(center: float, half_width: float, horizon: float) -> PiecewiseLinear:
    """Tent of height 1 at ``center``, clipped to ``[0, horizon]``."""
    pts = {0.0, float(horizon)}
    for p in (center - half_width, center, center + half_width):
        if 0 < p < horizon:
            pts.add(p)
    nodes = sorted(pts)
    vals = [max(0.0, 1.0 - abs(t - center) / half_width) for t in nodes]
    return PiecewiseLinear(horizon, nodes, vals)


def default_test_family(horizon: float = 1.0, level: int = 6) -> dict[str, PiecewiseLinear]:
    """The constant 1 plus tents of half-width ``T/2^L`` centred at ``k T / 2^L``."""
    family = {"one": PiecewiseLinear.constant(1.0, horizon)}
    m = 2**level
    width = horizon / m
    for k in range(m + 1):
        family[f"hat(L={level},k={k})"] = hat_function(horizon * k / m, width, horizon)
    return family


def sup_distance_linear(a: PiecewiseLinear, b: PiecewiseLinear) -> float:
    """``||a - b||_inf``; exact, attained at a node of either function."""
    _same_horizon(a, b)
    ts = np.union1d(a.nodes, b.nodes)
    return float(np.max(np.abs(a.evaluate(ts) - b.evaluate(ts))))


@dataclass
class IntegratorSequence:
    """Indexed family ``n -> A_n`` (``n >= 1``) with a declared limit ``A_0``.

    ``constant`` marks sequences with ``A_n = A_0`` for every ``n``; they are
    tau-convergent without evaluation.
    """

    name: str
    term: Callable[[int], IntegratorPath]
    limit: IntegratorPath
    constant: bool = False
    _cache: dict[int, IntegratorPath] = field(default_factory=dict, repr=False)

    @classmethod
    def fixed(cls, name: str, a: IntegratorPath) -> "IntegratorSequence":
        return cls(name, lambda n: a, a, constant=True)

    @property
    def horizon(self) -> float:
        return self.limit.horizon

    def __call__(self, n: int) -> IntegratorPath:
        if n not in self._cache:
            a = self.term(n)
            _same_horizon(a, self.limit)
            self._cache[n] = a
        return self._cache[n]


def tau_convergence_test(seq: IntegratorSequence, depth: int, tol: float) -> ConvergenceReport:
    """Finite-depth check of uniform convergence with bounded variation."""
    if depth < 2:
        raise ValueError("depth must be at least 2")
    if seq.constant:
        var = seq.limit.total_variation()
        return ConvergenceReport.build(
            "tau", depth, tol, [], {"uniform": [(depth, 0.0)]},
            {"variation_bound": var, "below_tol_from": 1, "sequence": seq.name},
        )
    variations = [seq(n).total_variation() for n in range(1, depth + 1)]
    idx = list(range(tail_start(depth), depth + 1))
    margins = [sup_distance_linear(seq(n), seq.limit) for n in idx]
    failures = []
    bump = tail_ok(margins, tol)
    if margins[-1] >= tol or bump is not None:
        failures.append(
            {
                "condition": "uniform",
                "index": depth if margins[-1] >= tol else idx[bump],
                "margin": margins[-1] if margins[-1] >= tol else margins[bump],
                "sequence": seq.name,
            }
        )
    if growth_flag(variations):
        n_max = int(np.argmax(variations)) + 1
        failures.append(
            {"condition": "variation", "index": n_max, "margin": variations[n_max - 1],
             "sequence": seq.name}
        )
    return ConvergenceReport.build(
        "tau", depth, tol, failures,
        {"uniform": list(zip(idx, margins))},
        {
            "variation_bound": max(variations),
            "below_tol_from": first_index_below(idx, margins, tol),
            "sequence": seq.name,
        },
    )


def _named_family(test_family) -> dict[str, PiecewiseLinear]:
    if isinstance(test_family, Mapping):
        return dict(test_family)
    return {f"f{i}": f for i, f in enumerate(test_family)}


def weak_star_test(
    v_n: Callable[[int], CadlagStep],
    v_0: CadlagStep,
    test_family: Mapping[str, PiecewiseLinear] | Sequence[PiecewiseLinear] | None = None,
    depth: int = 64,
    tol: float = 1e-2,
    level: int = 6,
) -> ConvergenceReport:
    """Finite-depth check of ``v_n => v_0`` against a family of test functions.

    Each test function's margin ``|int f dv_n - int f dv_0|`` is checked on
    the tail separately; the variation bound is checked over all ``n <= depth``.
    """
    family = _named_family(
        test_family if test_family is not None else default_test_family(v_0.horizon, level)
    )
    if not family:
        raise ValueError("test family must be non-empty")
    names = list(family)
    fs = [family[k] for k in names]
    mu0 = StieltjesMeasure.from_path(v_0)
    target = np.array([mu0.integrate(f) for f in fs])

    variations = [v_n(n).total_variation() for n in range(1, depth + 1)]
    idx = list(range(tail_start(depth), depth + 1))
    rows = []
    for n in idx:
        mu = StieltjesMeasure.from_path(v_n(n))
        _same_horizon(mu, v_0)
        rows.append([mu.integrate(f) for f in fs])
    diffs = np.abs(np.asarray(rows) - target)  # shape (tail, family)

    worst = diffs.max(axis=1).tolist()
    failures = []
    margins = {"max": list(zip(idx, worst))}
    for j, name in enumerate(names):
        col = diffs[:, j].tolist()
        bump = tail_ok(col, tol)
        if col[-1] >= tol or bump is not None:
            margins[name] = list(zip(idx, col))
            k = len(col) - 1 if col[-1] >= tol else bump
            failures.append(
                {"condition": "test_function", "test_function": name, "index": idx[k],
                 "margin": col[k]}
            )
    if growth_flag(variations):
        n_max = int(np.argmax(variations)) + 1
        failures.append(
            {"condition": "variation", "index": n_max, "margin": variations[n_max - 1]}
        )
    return ConvergenceReport.build(
        "weak-*", depth, tol, failures, margins,
        {
            "variation_bound": max(variations),
            "family_size": len(names),
            "below_tol_from": first_index_below(idx, worst, tol),
        },
    )
