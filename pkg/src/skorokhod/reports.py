"""Verdict objects returned by the sequence tests, plus finite-depth helpers.

Every sequence test works at a finite depth: "tends to zero" means the
margin at the last index is below ``tol`` and the last ``ceil(depth/4)``
margins are non-increasing up to ``tol`` slack; "stays bounded" means the
running maximum does not grow by more than :data:`GROWTH_FACTOR` between
index ``depth // 2`` and ``depth``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

__all__ = [
    "PASS",
    "FAIL",
    "GROWTH_FACTOR",
    "ConvergenceReport",
    "CompactnessReport",
    "tail_start",
    "tail_ok",
    "growth_flag",
    "first_index_below",
]

PASS = "PASS"
FAIL = "FAIL"
GROWTH_FACTOR = 1.5


def tail_start(depth: int) -> int:
    """First index of the tail window ``[depth - ceil(depth/4) + 1, depth]``."""
    return depth - math.ceil(depth / 4) + 1


def tail_ok(margins: Sequence[float], tol: float) -> int | None:
    """Position of the first increase larger than ``tol`` in ``margins``, or None."""
    for k in range(1, len(margins)):
        if margins[k] > margins[k - 1] + tol:
            return k
    return None


def growth_flag(values: Sequence[float]) -> bool:
    """True when ``max(values)`` exceeds 1.5 times the max over the first half."""
    if len(values) < 2:
        return False
    half = max(values[: len(values) // 2])
    full = max(values)
    return full > GROWTH_FACTOR * half + 1e-12


def first_index_below(indices: Sequence[int], margins: Sequence[float], tol: float) -> int | None:
    """Smallest index from which every later margin is below ``tol``."""
    found = None
    for n, m in zip(reversed(indices), reversed(margins)):
        if m < tol:
            found = n
        else:
            break
    return found


def _clean(value: Any) -> Any:
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return repr(value)
        return value
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if hasattr(value, "item") and callable(value.item):
        return _clean(value.item())
    return value


@dataclass
class ConvergenceReport:
    """Outcome of one convergence oracle.

    ``failures`` lists every violated condition in a fixed order; ``witness``
    is the first of them.  ``margins`` maps a condition or test-object name
    to ``(index, margin)`` pairs over the evaluated tail.
    """

    verdict: str
    mode: str
    depth: int
    tol: float
    witness: dict[str, Any] | None = None
    failures: list[dict[str, Any]] = field(default_factory=list)
    margins: dict[str, list[tuple[int, float]]] = field(default_factory=dict)
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    @classmethod
    def build(
        cls,
        mode: str,
        depth: int,
        tol: float,
        failures: list[dict[str, Any]],
        margins: dict[str, list[tuple[int, float]]] | None = None,
        details: dict[str, Any] | None = None,
    ) -> "ConvergenceReport":
        return cls(
            verdict=FAIL if failures else PASS,
            mode=mode,
            depth=depth,
            tol=tol,
            witness=failures[0] if failures else None,
            failures=failures,
            margins=margins or {},
            details=details or {},
        )

    def final_margin(self) -> float:
        """Largest margin at the last evaluated index, over all tracked names."""
        finals = [series[-1][1] for series in self.margins.values() if series]
        return max(finals) if finals else 0.0

    def to_dict(self, include_margins: bool = True) -> dict[str, Any]:
        out = asdict(self)
        if not include_margins:
            out.pop("margins")
        return _clean(out)


@dataclass
class CompactnessReport:
    """Numeric bounds behind the three relative S-compactness criteria."""

    size: int
    sup_norm_bound: float
    sup_norm_growth: bool
    upcrossing_bounds: dict[tuple[float, float], int]
    upcrossing_growth: dict[tuple[float, float], bool]
    oscillation_bounds: dict[float, int]
    oscillation_growth: dict[float, bool]
    quantization_bounds: dict[float, dict[str, float]]
    quantization_growth: dict[float, bool]

    @property
    def criterion_i(self) -> bool:
        """True when no growth is flagged for the sup-norm or any up-crossing band."""
        return not (self.sup_norm_growth or any(self.upcrossing_growth.values()))

    @property
    def criterion_ii(self) -> bool:
        return not (self.sup_norm_growth or any(self.oscillation_growth.values()))

    @property
    def criterion_iii(self) -> bool:
        return not any(self.quantization_growth.values())

    def to_dict(self) -> dict[str, Any]:
        return _clean(
            {
                "size": self.size,
                "criterion_i": self.criterion_i,
                "criterion_ii": self.criterion_ii,
                "criterion_iii": self.criterion_iii,
                "sup_norm_bound": self.sup_norm_bound,
                "sup_norm_growth": self.sup_norm_growth,
                "upcrossing_bounds": [
                    {"a": a, "b": b, "bound": n, "growth": self.upcrossing_growth[(a, b)]}
                    for (a, b), n in self.upcrossing_bounds.items()
                ],
                "oscillation_bounds": [
                    {"eta": eta, "bound": n, "growth": self.oscillation_growth[eta]}
                    for eta, n in self.oscillation_bounds.items()
                ],
                "quantization_bounds": [
                    dict(eps=eps, growth=self.quantization_growth[eps], **row)
                    for eps, row in self.quantization_bounds.items()
                ],
            }
        )
