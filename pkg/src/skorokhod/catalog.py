"""Named sequences and integrator catalogs addressable by id.

Path sequences (``PATH_SEQUENCES``) build a :class:`PathSequence` from a
horizon; infinite-horizon and multi-component families have their own
tables.  Integrator catalog ids (``INTEGRATOR_CATALOGS``) build lists of
:class:`IntegratorSequence` for a given path sequence.
"""

from __future__ import annotations

from typing import Callable

from .convergence import (
    DEFAULT_BANDS,
    InfinitePathFamily,
    PathSequence,
    _shrinking_spike,
    default_dual_catalog,
    lemma_witness_sequence,
    ramp_family,
    refuter_sequence,
)
from .core import CadlagStep, IntegratorPath, MultiPath
from .errors import ConfigurationError
from .stieltjes import IntegratorSequence
from .witnesses import figure1_spikes, figure2_jumps, random_step_path, sawtooth

__all__ = [
    "PATH_SEQUENCES",
    "INFINITE_FAMILIES",
    "MULTI_FAMILIES",
    "INTEGRATOR_CATALOGS",
    "path_sequence",
    "infinite_family",
    "multi_family",
    "integrator_catalog",
    "sequence_from_files",
]


def _spikes(horizon: float) -> PathSequence:
    return PathSequence(
        "figure1_spikes", lambda n: figure1_spikes(max(n, 3), horizon),
        CadlagStep.constant(0.0, horizon),
    )


def _jumps(horizon: float) -> PathSequence:
    return PathSequence(
        "figure2_jumps", lambda n: figure2_jumps(n, horizon), CadlagStep.constant(1.0, horizon)
    )


def _blowup(horizon: float) -> PathSequence:
    return PathSequence(
        "constant_blowup", lambda n: CadlagStep.constant(float(n), horizon),
        CadlagStep.constant(0.0, horizon),
    )


def _sawtooth(horizon: float) -> PathSequence:
    return PathSequence(
        "sawtooth", lambda n: sawtooth(n, 0.0, 1.0, horizon), CadlagStep.constant(0.5, horizon)
    )


def _shifted_jump(horizon: float) -> PathSequence:
    return PathSequence(
        "shifted_jump",
        lambda n: CadlagStep.indicator(horizon / 2 + horizon / (2 * (n + 1)), horizon),
        CadlagStep.indicator(horizon / 2, horizon),
    )


def _vanishing_noise(horizon: float) -> PathSequence:
    return PathSequence(
        "vanishing_noise",
        lambda n: random_step_path(n, 8, 1.0 / n, horizon),
        CadlagStep.constant(0.0, horizon),
    )


PATH_SEQUENCES: dict[str, Callable[[float], PathSequence]] = {
    "figure1_spikes": _spikes,
    "figure2_jumps": _jumps,
    "constant_blowup": _blowup,
    "sawtooth": _sawtooth,
    "shifted_jump": _shifted_jump,
    "vanishing_noise": _vanishing_noise,
}


def _marching(n: int, horizon: float) -> CadlagStep:
    # unit bump on [n, n+1), seen through the window [0, horizon]
    if n >= horizon:
        return CadlagStep.constant(0.0, horizon)
    end = n + 1.0
    return CadlagStep.indicator(float(n), horizon, end=end if end < horizon else None)


INFINITE_FAMILIES: dict[str, InfinitePathFamily] = {
    "marching_bumps": InfinitePathFamily(
        "marching_bumps", _marching, lambda T: CadlagStep.constant(0.0, T)
    ),
    "figure1_spikes": InfinitePathFamily(
        "figure1_spikes",
        lambda n, T: CadlagStep.indicator(0.5 - 1.0 / max(n, 3), T, end=0.5),
        lambda T: CadlagStep.constant(0.0, T),
    ),
    "constant_blowup": InfinitePathFamily(
        "constant_blowup",
        lambda n, T: CadlagStep.constant(float(n), T),
        lambda T: CadlagStep.constant(0.0, T),
    ),
}


def _pair(first: Callable[[float], PathSequence], second: Callable[[float], PathSequence]):
    def build(horizon: float):
        a, b = first(horizon), second(horizon)
        return (lambda n: MultiPath((a(n), b(n)))), MultiPath((a.limit, b.limit))

    return build


MULTI_FAMILIES: dict[str, Callable[[float], tuple[Callable[[int], MultiPath], MultiPath]]] = {
    "spikes_and_jumps": _pair(_spikes, _jumps),
    "spikes_and_blowup": _pair(_spikes, _blowup),
}


def _lookup(table: dict, key: str, kind: str):
    if key not in table:
        raise ConfigurationError(f"unknown {kind} {key!r}; known: {', '.join(table)}")
    return table[key]


def path_sequence(name: str, horizon: float = 1.0) -> PathSequence:
    return _lookup(PATH_SEQUENCES, name, "sequence id")(horizon)


def infinite_family(name: str) -> InfinitePathFamily:
    return _lookup(INFINITE_FAMILIES, name, "infinite-horizon family id")


def multi_family(name: str, horizon: float = 1.0):
    return _lookup(MULTI_FAMILIES, name, "multi-component family id")(horizon)


# integrator catalogs ---------------------------------------------------------


def _slope(seq: PathSequence, level: int) -> list[IntegratorSequence]:
    return [IntegratorSequence.fixed("slope", IntegratorPath.identity(seq.horizon))]


def _ramps(seq: PathSequence, level: int) -> list[IntegratorSequence]:
    return [IntegratorSequence.fixed(k, a) for k, a in ramp_family(seq.horizon, level).items()]


def _spike_prims(seq: PathSequence, level: int) -> list[IntegratorSequence]:
    return [_shrinking_spike(seq.horizon * c, seq.horizon) for c in (0.0, 0.25, 0.5, 0.75)]


def _lemma(seq: PathSequence, level: int) -> list[IntegratorSequence]:
    return [lemma_witness_sequence(seq, a, b) for a, b in DEFAULT_BANDS]


INTEGRATOR_CATALOGS: dict[str, Callable[[PathSequence, int], list[IntegratorSequence]]] = {
    "default": lambda seq, level: default_dual_catalog(seq.horizon, level),
    "slope": _slope,
    "ramps": _ramps,
    "shrinking_spike": _spike_prims,
    "lemma_witness": _lemma,
    "refuter": lambda seq, level: [refuter_sequence(seq)],
}


def integrator_catalog(ids, seq: PathSequence, level: int = 6) -> list[IntegratorSequence]:
    """Concatenate the catalogs named in ``ids`` (a list or comma-separated string)."""
    if isinstance(ids, str):
        ids = [s.strip() for s in ids.split(",") if s.strip()]
    out = []
    for key in ids:
        out.extend(_lookup(INTEGRATOR_CATALOGS, key, "integrator catalog id")(seq, level))
    if not out:
        raise ConfigurationError("integrator catalog selection is empty")
    return out


def sequence_from_files(name: str, terms: list[CadlagStep], limit: CadlagStep) -> PathSequence:
    """Finite list ``x_1..x_m`` as a sequence; indices beyond ``m`` are errors."""
    if not terms:
        raise ConfigurationError("sequence needs at least one term")

    def term(n: int) -> CadlagStep:
        if n > len(terms):
            raise ConfigurationError(f"sequence {name} has only {len(terms)} terms")
        return terms[n - 1]

    return PathSequence(name, term, limit)
