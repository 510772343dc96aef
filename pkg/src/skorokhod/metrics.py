"""Brackets for the Skorokhod J1 distance and its mJ1 modification.

``d(x, y) = inf_lambda max(||lambda - id||, ||x o lambda - y||)`` over
increasing homeomorphisms of ``[0, T]``.  Neither bound claims to be the
distance itself:

* the upper bound is the cost of an explicit piecewise-linear time change
  that sends a monotone selection of jumps of ``y`` onto jumps of ``x``; the
  best selection is found by a bottleneck dynamic program;
* the lower bound collects facts every near-optimal time change must
  respect: fixed end points, preserved range, and jump matching (a jump of
  ``y`` of size ``J`` at ``t`` needs a jump of ``x`` of size within ``2 d``
  of ``J`` located within ``d`` of ``t``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import CadlagStep, extend_tilde, sup_distance
from .errors import DomainError, HorizonMismatchError

__all__ = [
    "DistanceBracket",
    "j1_lower_bound",
    "j1_upper_bound",
    "j1_distance_bounds",
    "mj1_distance_bounds",
    "time_change_cost",
    "mj1_compactness_modulus",
    "DEFAULT_MJ1_EPS",
]

DEFAULT_MJ1_EPS = 1.0


@dataclass(frozen=True)
class DistanceBracket:
    lower: float
    upper: float
    alignment: tuple[tuple[float, float], ...] = ()

    def __iter__(self):
        yield self.lower
        yield self.upper


def _check(x: CadlagStep, y: CadlagStep) -> None:
    if x.horizon != y.horizon:
        raise HorizonMismatchError(f"horizons differ: {x.horizon!r} vs {y.horizon!r}")


def _interior_jumps(x: CadlagStep) -> list[tuple[float, float]]:
    return [(t, j) for t, j in x.jumps if t < x.horizon]


def _terminal_jump(x: CadlagStep) -> float:
    if len(x.breakpoints) > 1 and x.breakpoints[-1] == x.horizon:
        return x.values[-1] - x.values[-2]
    return 0.0


def _jump_mismatch(x: CadlagStep, y: CadlagStep) -> float:
    """Largest ``delta`` certified by some jump of ``y`` that ``x`` cannot absorb."""
    best = 0.0
    xj = _interior_jumps(x)
    for t, size in _interior_jumps(y):
        bound = abs(size) / 2
        for s, other in xj:
            bound = min(bound, max(abs(s - t), abs(other - size) / 2))
            if bound <= best:
                break
        best = max(best, bound)
    return best


def j1_lower_bound(x: CadlagStep, y: CadlagStep) -> float:
    _check(x, y)
    terms = [
        abs(x.values[0] - y.values[0]),
        abs(x.terminal_value - y.terminal_value),
        abs(_terminal_jump(x) - _terminal_jump(y)) / 2,
        abs(max(x.values) - max(y.values)),
        abs(min(x.values) - min(y.values)),
        _jump_mismatch(x, y),
        _jump_mismatch(y, x),
    ]
    return max(terms)


def _pieces(x: CadlagStep, lo: float, hi: float) -> tuple[list[float], list[float]]:
    """Values of ``x`` on ``[lo, hi)`` and the breakpoints strictly inside."""
    bps = x.breakpoints
    vals = [x(lo)]
    inner = []
    for s, v in zip(bps, x.values):
        if lo < s < hi:
            inner.append(s)
            vals.append(v)
    return inner, vals


def _block_error(
    x: CadlagStep, y: CadlagStep, p1: float, q1: float, p2: float, q2: float
) -> float:
    """``sup |x(lambda(t)) - y(t)|`` over ``t`` in ``[q1, q2)``.

    ``lambda`` maps ``[q1, q2]`` linearly onto ``[p1, p2]``.  Breakpoints that
    land within rounding distance of each other are treated as possibly
    crossed, which can only overstate the error.
    """
    xs, xv = _pieces(x, p1, p2)
    ys, yv = _pieces(y, q1, q2)
    scale = (q2 - q1) / (p2 - p1)
    mx = [q1 + (s - p1) * scale for s in xs]
    slack = 1e-12 * max(1.0, x.horizon)
    err = 0.0
    i = j = 0
    while True:
        err = max(err, abs(xv[i] - yv[j]))
        nx = mx[i] if i < len(mx) else math.inf
        ny = ys[j] if j < len(ys) else math.inf
        if nx == math.inf and ny == math.inf:
            return err
        if abs(nx - ny) <= slack:
            err = max(err, abs(xv[i + 1] - yv[j]), abs(xv[i] - yv[j + 1]))
            i += 1
            j += 1
        elif nx < ny:
            i += 1
        else:
            j += 1


def time_change_cost(
    x: CadlagStep, y: CadlagStep, anchors: list[tuple[float, float]]
) -> float:
    """Cost ``max(||lambda - id||, ||x o lambda - y||)`` of a piecewise-linear time change.

    ``anchors`` lists interior pairs ``(p, q)`` with ``lambda(q) = p``,
    increasing in both coordinates; ``(0, 0)`` and ``(T, T)`` are implied.
    """
    _check(x, y)
    horizon = x.horizon
    pts = [(0.0, 0.0)] + list(anchors) + [(horizon, horizon)]
    for (p1, q1), (p2, q2) in zip(pts, pts[1:]):
        if not (p1 < p2 and q1 < q2):
            raise DomainError("anchors must be strictly increasing in both coordinates")
    cost = max(abs(p - q) for p, q in pts)
    for (p1, q1), (p2, q2) in zip(pts, pts[1:]):
        cost = max(cost, _block_error(x, y, p1, q1, p2, q2))
    return max(cost, abs(x.terminal_value - y.terminal_value))


def _dp_upper(x: CadlagStep, y: CadlagStep, grid: int) -> tuple[float, tuple]:
    horizon = x.horizon
    best = sup_distance(x, y)
    best_path: tuple = ()
    xs = [t for t, _ in _interior_jumps(x)]
    ys = [t for t, _ in _interior_jumps(y)]
    if not xs or not ys:
        return best, best_path
    nodes = []
    for q in ys:
        near = sorted(xs, key=lambda p: (abs(p - q), p))[:grid]
        nodes.extend((p, q) for p in near if abs(p - q) < best)
    nodes.sort()
    start = (0.0, 0.0)
    cost = {start: 0.0}
    parent: dict = {start: None}
    ordered = [start] + nodes
    for node in nodes:
        p2, q2 = node
        c_best = math.inf
        arg = None
        for prev in ordered:
            if prev is node:
                break
            p1, q1 = prev
            if not (p1 < p2 and q1 < q2) or prev not in cost:
                continue
            base = max(cost[prev], abs(p2 - q2))
            if base >= c_best:
                continue
            c = max(base, _block_error(x, y, p1, q1, p2, q2))
            if c < c_best:
                c_best, arg = c, prev
        if arg is not None and c_best < best:
            cost[node] = c_best
            parent[node] = arg
    end_best = best
    end_arg = None
    tail_err = abs(x.terminal_value - y.terminal_value)
    for node, c in cost.items():
        if node == start or c >= end_best:
            continue
        p1, q1 = node
        total = max(c, tail_err, _block_error(x, y, p1, q1, horizon, horizon))
        if total < end_best:
            end_best, end_arg = total, node
    if end_arg is None:
        return best, best_path
    path = []
    node = end_arg
    while node is not None and node != start:
        path.append(node)
        node = parent[node]
    return end_best, tuple(reversed(path))


def j1_upper_bound(x: CadlagStep, y: CadlagStep, grid: int = 16) -> tuple[float, tuple]:
    """Best cost over jump alignments; returns ``(cost, anchors)`` with ``lambda(q) = p``."""
    _check(x, y)
    forward = _dp_upper(x, y, grid)
    backward = _dp_upper(y, x, grid)
    if backward[0] < forward[0]:
        return backward[0], tuple((p, q) for q, p in backward[1])
    return forward


def j1_distance_bounds(x: CadlagStep, y: CadlagStep, grid: int = 16) -> DistanceBracket:
    """``(lower, upper)`` with ``lower <= d_J1(x, y) <= upper``.

    ``grid`` caps how many jumps of ``x`` (nearest in time) are tried as
    partners for each jump of ``y`` in the alignment search.
    """
    if grid < 1:
        raise DomainError("grid must be a positive integer")
    lower = j1_lower_bound(x, y)
    upper, anchors = j1_upper_bound(x, y, grid)
    return DistanceBracket(lower, max(upper, lower), anchors)


def mj1_distance_bounds(
    x: CadlagStep, y: CadlagStep, eps: float = DEFAULT_MJ1_EPS, grid: int = 16
) -> DistanceBracket:
    """J1 bracket between the embeddings ``x~`` and ``y~`` on ``[0, T + 2 eps]``."""
    _check(x, y)
    xt = extend_tilde(x, eps)
    yt = extend_tilde(y, eps)
    lower = j1_lower_bound(xt, yt)
    upper, anchors = j1_upper_bound(xt, yt, grid)
    # a time change of [0, T] lifts to the extended interval at the same cost
    plain, _ = j1_upper_bound(x, y, grid)
    if plain < upper:
        upper = plain
        anchors = ()
    return DistanceBracket(lower, max(upper, lower), anchors)


def _modulus_one(x: CadlagStep, delta: float) -> float:
    # pseudo-segment for x(0-) = 0 sits first; its "end" is time 0 and reachable exactly
    starts = [0.0] + list(x.breakpoints)
    ends = [0.0] + [x.segment_bounds(i)[1] for i in range(x.n_segments)]
    vals = [0.0] + list(x.values)
    m = len(vals)
    best = 0.0
    for i in range(m - 2):
        for k in range(i + 2, m):
            gap = starts[k] - ends[i]
            if gap >= delta:
                break
            ci, ck = vals[i], vals[k]
            for j in range(i + 1, k):
                cj = vals[j]
                best = max(best, min(abs(cj - ci), abs(ck - cj)))
    return best


def mj1_compactness_modulus(paths, delta: float) -> float:
    """``sup_x sup min(|x(t) - x(s)|, |x(u) - x(t)|)`` over ``s < t < u``, ``u - s < delta``.

    The point ``0-`` with value 0 is admitted as ``s``, at distance ``u`` from ``u``.
    """
    if not delta > 0:
        raise DomainError("delta must be positive")
    if isinstance(paths, CadlagStep):
        paths = [paths]
    return max((_modulus_one(x, delta) for x in paths), default=0.0)
