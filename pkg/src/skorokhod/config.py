"""Run configuration shared by the CLI and the demo suite."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .convergence import DEFAULT_BANDS
from .errors import ConfigurationError
from .metrics import DEFAULT_MJ1_EPS

__all__ = ["RunConfig", "FORMATS"]

FORMATS = ("json", "csv", "svg")


@dataclass(frozen=True)
class RunConfig:
    """Tolerances, depths and grids for one run.

    ``depth`` 2048 and ``tol`` 0.05 are the smallest round settings at which
    the level-6 catalog separates the shrinking spikes from a non-null
    sequence; deeper levels need proportionally deeper runs.
    """

    tol: float = 0.05
    depth: int = 2048
    mj1_eps: float = DEFAULT_MJ1_EPS
    catalog: tuple[str, ...] = ()
    level: int = 6
    levels: tuple[tuple[float, float], ...] = DEFAULT_BANDS
    etas: tuple[float, ...] = (0.25, 0.5)
    eps_grid: tuple[float, ...] = (0.1, 0.25, 0.5)
    T_grid: tuple[float, ...] = (1.0, 2.0, 4.0)
    formats: tuple[str, ...] = FORMATS
    seed: int = 7
    grid: int = 16
    tau_tol: float | None = None
    horizon: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.tol) and self.tol > 0):
            raise ConfigurationError(f"tolerance must be positive, got {self.tol!r}")
        if self.depth < 8:
            raise ConfigurationError(f"depth must be at least 8, got {self.depth!r}")
        if not 1 <= self.level <= 10:
            raise ConfigurationError(f"test-family level must be in 1..10, got {self.level!r}")
        if not self.mj1_eps > 0:
            raise ConfigurationError("mJ1 epsilon must be positive")
        if self.tau_tol is not None and not self.tau_tol > 0:
            raise ConfigurationError("tau tolerance must be positive")
        if self.grid < 1:
            raise ConfigurationError("grid must be a positive integer")
        if not (math.isfinite(self.horizon) and self.horizon > 0):
            raise ConfigurationError("horizon must be positive and finite")
        for a, b in self.levels:
            if not a < b:
                raise ConfigurationError(f"level pair needs a < b, got ({a}, {b})")
        if any(not e > 0 for e in self.etas) or any(not e > 0 for e in self.eps_grid):
            raise ConfigurationError("eta and eps grids must be positive")
        if not self.T_grid or any(not t > 0 for t in self.T_grid):
            raise ConfigurationError("T grid must be non-empty and positive")
        bad = [f for f in self.formats if f not in FORMATS]
        if bad:
            raise ConfigurationError(f"unknown output format(s) {bad}; choose from {FORMATS}")

    def to_dict(self) -> dict:
        out = asdict(self)
        out["levels"] = [list(p) for p in self.levels]
        for k, v in out.items():
            if isinstance(v, tuple):
                out[k] = list(v)
        return out
