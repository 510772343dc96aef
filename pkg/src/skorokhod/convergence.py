"""Convergence oracles and compactness criteria for sequences of step paths.

S-convergence cannot be decided from finitely many terms, so two oracles
are provided with different logical strength:

* :func:`s_witness_check` verifies a supplied family of bounded-variation
  witnesses; PASS is evidence of convergence.
* :func:`s_dual_test` runs a battery of tau-convergent integrator sequences;
  a FAIL exhibits an integrator sequence along which the integrals do not
  converge, which disproves convergence.

Everything else here (seminorms, J1/mJ1 distance convergence, compactness
bounds, infinite horizon, components, subsequence sampling) builds on these
and on the exact functionals in :mod:`skorokhod.functionals`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .core import CadlagStep, IntegratorPath, MultiPath, sup_distance
from .errors import ConfigurationError, DomainError, HorizonMismatchError
from .functionals import oscillations, quantize, upcrossings
from .metrics import DEFAULT_MJ1_EPS, j1_distance_bounds, mj1_distance_bounds
from .reports import (
    CompactnessReport,
    ConvergenceReport,
    first_index_below,
    growth_flag,
    tail_ok,
    tail_start,
)
from .stieltjes import (
    IntegratorBank,
    IntegratorSequence,
    integrate_x_dA,
    primitive_of_density,
    tau_convergence_test,
    weak_star_test,
)
from .witnesses import lemma_upcrossing_witness, unboundedness_refuter

__all__ = [
    "PathSequence",
    "WitnessFamily",
    "InfinitePathFamily",
    "DEFAULT_BANDS",
    "ramp_integrator",
    "default_dual_catalog",
    "ramp_family",
    "lemma_witness_sequence",
    "refuter_sequence",
    "s_witness_check",
    "s_dual_test",
    "sigma_seminorm",
    "endpoint_seminorm",
    "uniform_seminorm_convergence",
    "distance_convergence",
    "relative_s_compactness",
    "infinite_horizon_s_test",
    "multidim_s_test",
    "kvpk_a_posteriori",
    "endpoint_rate_tester",
    "uniform_tester",
]

DEFAULT_BANDS: tuple[tuple[float, float], ...] = ((0.25, 0.75), (-0.75, -0.25), (-0.25, 0.25))


@dataclass
class PathSequence:
    """Indexed family ``n -> x_n`` (``n >= 1``) with a candidate limit ``x_0``."""

    name: str
    term: Callable[[int], CadlagStep]
    limit: CadlagStep
    _cache: dict[int, CadlagStep] = field(default_factory=dict, repr=False)

    @property
    def horizon(self) -> float:
        return self.limit.horizon

    def __call__(self, n: int) -> CadlagStep:
        if n == 0:
            return self.limit
        if n not in self._cache:
            x = self.term(n)
            if x.horizon != self.limit.horizon:
                raise HorizonMismatchError(f"term {n} of {self.name} has horizon {x.horizon!r}")
            self._cache[n] = x
        return self._cache[n]


@dataclass
class WitnessFamily:
    """Bounded-variation witnesses ``v_{n,eps}`` for ``n >= 1`` and ``v_{0,eps}``."""

    eps: float
    witness: Callable[[int], CadlagStep]
    limit_witness: CadlagStep

    @classmethod
    def identity(cls, seq: PathSequence, eps: float = 1e-3) -> "WitnessFamily":
        """Use the paths themselves; valid since step paths have finite variation."""
        return cls(eps, seq, seq.limit)


@dataclass
class InfinitePathFamily:
    """Paths on ``[0, inf)`` accessed through their restrictions to ``[0, T]``."""

    name: str
    term: Callable[[int, float], CadlagStep]
    limit: Callable[[float], CadlagStep]

    def restricted(self, horizon: float) -> PathSequence:
        return PathSequence(
            f"{self.name}|T={horizon:g}", lambda n: self.term(n, horizon), self.limit(horizon)
        )


# integrator catalog ---------------------------------------------------------


def ramp_integrator(center: float, half_width: float, horizon: float) -> IntegratorPath:
    """Primitive of the uniform unit-mass density on ``[center - w, center + w]`` (clipped)."""
    lo = max(0.0, center - half_width)
    hi = min(horizon, center + half_width)
    rate = 1.0 / (2 * half_width)
    if lo == 0.0:
        density = CadlagStep(horizon, [0.0, hi], [rate, 0.0]) if hi < horizon else \
            CadlagStep.constant(rate, horizon)
    elif hi < horizon:
        density = CadlagStep(horizon, [0.0, lo, hi], [0.0, rate, 0.0])
    else:
        density = CadlagStep(horizon, [0.0, lo], [0.0, rate])
    return primitive_of_density(density)


def ramp_family(horizon: float = 1.0, level: int = 6) -> dict[str, IntegratorPath]:
    """Ramps centred at the new dyadic points of each level ``1..level``."""
    family = {}
    for lvl in range(1, level + 1):
        m = 2**lvl
        for k in range(1, m, 2):
            family[f"ramp(L={lvl},k={k})"] = ramp_integrator(horizon * k / m, horizon / m, horizon)
    return family


def _shrinking_spike(center: float, horizon: float) -> IntegratorSequence:
    def term(n: int) -> IntegratorPath:
        # primitive of a box of mass 1/sqrt(n) on [center, center + h]
        h = (horizon - center) / (4 * n)
        mass = 1.0 / math.sqrt(n)
        if center == 0.0:
            return IntegratorPath(horizon, (0.0, h, horizon), (0.0, mass, mass))
        return IntegratorPath(horizon, (0.0, center, center + h, horizon), (0.0, 0.0, mass, mass))

    return IntegratorSequence(
        f"shrinking_spike(t={center:g})", term, IntegratorPath.zero(horizon)
    )


def default_dual_catalog(horizon: float = 1.0, level: int = 6) -> list[IntegratorSequence]:
    """The slope ``A(t) = t``, dyadic ramps, and shrinking-support spike primitives."""
    catalog = [IntegratorSequence.fixed("slope", IntegratorPath.identity(horizon))]
    catalog += [IntegratorSequence.fixed(k, a) for k, a in ramp_family(horizon, level).items()]
    catalog += [_shrinking_spike(horizon * c, horizon) for c in (0.0, 0.25, 0.5, 0.75)]
    return catalog


def lemma_witness_sequence(seq: PathSequence, a: float, b: float) -> IntegratorSequence:
    """Up-crossing witnesses of ``x_n`` (zero when ``N^{a,b}(x_n) < 2``), limit 0."""
    horizon = seq.horizon
    zero = IntegratorPath.zero(horizon)

    def term(n: int) -> IntegratorPath:
        x = seq(n)
        if upcrossings(x, a, b) < 2:
            return zero
        return lemma_upcrossing_witness(x, a, b).integrator

    return IntegratorSequence(f"lemma_witness(a={a:g},b={b:g})", term, zero)


def refuter_sequence(seq: PathSequence) -> IntegratorSequence:
    """Unboundedness refuters of ``x_n`` at their own sup-norm, limit 0."""
    horizon = seq.horizon
    zero = IntegratorPath.zero(horizon)

    def term(n: int) -> IntegratorPath:
        x = seq(n)
        level = x.sup_norm()
        if level <= 0:
            return zero
        try:
            return unboundedness_refuter(x, level)[0]
        except ValueError:
            return zero

    return IntegratorSequence("refuter", term, zero)


def _derived_catalog(seq: PathSequence, bands: Iterable[tuple[float, float]]) -> list[IntegratorSequence]:
    return [lemma_witness_sequence(seq, a, b) for a, b in bands] + [refuter_sequence(seq)]


# oracles ----------------------------------------------------------------------


def _tail_failure(name: str, idx: list[int], margins: list[float], tol: float, **extra):
    bump = tail_ok(margins, tol)
    if margins[-1] < tol and bump is None:
        return None
    k = len(margins) - 1 if margins[-1] >= tol else bump
    return {"condition": name, "index": idx[k], "margin": margins[k], **extra}


def s_witness_check(
    seq: PathSequence,
    fam: WitnessFamily,
    depth: int = 64,
    tol: float = 1e-2,
    test_family=None,
    level: int = 6,
) -> ConvergenceReport:
    """Verify ``||x_n - v_n|| <= eps`` for ``n <= depth`` and ``v_n => v_0``."""
    if not fam.eps > 0:
        raise DomainError("witness eps must be positive")
    failures = []
    closeness = [(0, sup_distance(seq.limit, fam.limit_witness))]
    closeness += [(n, sup_distance(seq(n), fam.witness(n))) for n in range(1, depth + 1)]
    bad = [(n, d) for n, d in closeness if d > fam.eps + 1e-12]
    sup_norms = [seq(n).sup_norm() for n in range(1, depth + 1)]
    if growth_flag(sup_norms):
        n_max = int(np.argmax(sup_norms)) + 1
        failures.append(
            {"condition": "sup_norm_unbounded", "index": n_max, "margin": sup_norms[n_max - 1]}
        )
    if bad:
        n, d = bad[0]
        failures.append({"condition": "eps_close", "index": n, "margin": d - fam.eps})
    weak = weak_star_test(fam.witness, fam.limit_witness, test_family, depth, tol, level)
    for f in weak.failures:
        failures.append({**f, "condition": "weak_star:" + f["condition"]})
    idx = list(range(tail_start(depth), depth + 1))
    margins = {"eps_close": [(n, d) for n, d in closeness if n in set(idx)]}
    margins.update({f"weak_star:{k}": v for k, v in weak.margins.items()})
    return ConvergenceReport.build(
        "S-witness", depth, tol, failures, margins,
        {
            "sequence": seq.name,
            "eps": fam.eps,
            "witness_variation_bound": weak.details["variation_bound"],
            "sup_norm_bound": max(sup_norms),
        },
    )


def s_dual_test(
    seq: PathSequence,
    catalog: Sequence[IntegratorSequence] | None = None,
    depth: int = 64,
    tol: float = 1e-2,
    derived: bool = True,
    bands: Iterable[tuple[float, float]] = DEFAULT_BANDS,
    level: int = 6,
    tau_tol: float | None = None,
) -> ConvergenceReport:
    """Necessary-condition battery: ``x_n(T) -> x_0(T)`` and ``int x_n dA_n -> int x_0 dA_0``.

    Supplied catalog entries must pass the tau-test at ``(depth, tau_tol)``
    (``tau_tol`` defaults to ``tol``), else
    :class:`ConfigurationError`.  Default entries and entries derived from the
    sequence itself (up-crossing witnesses and refuters) are kept only when
    they pass it; the rest are listed under ``details["skipped"]``.
    """
    horizon = seq.horizon
    tau_tol = tol if tau_tol is None else tau_tol
    skipped = []
    entries = []
    optional = []
    if catalog is None:
        optional += default_dual_catalog(horizon, level)
    else:
        for entry in catalog:
            if entry.horizon != horizon:
                raise ConfigurationError(
                    f"catalog entry {entry.name} has horizon {entry.horizon!r}"
                )
            tau = tau_convergence_test(entry, depth, tau_tol)
            if not tau.passed:
                raise ConfigurationError(
                    f"catalog entry {entry.name} is not tau-convergent: {tau.witness}"
                )
            entries.append(entry)
    if derived:
        optional += _derived_catalog(seq, bands)
    for entry in optional:
        if tau_convergence_test(entry, depth, tau_tol).passed:
            entries.append(entry)
        else:
            skipped.append(entry.name)

    idx = list(range(tail_start(depth), depth + 1))
    failures = []
    margins = {}
    x0_end = seq.limit.terminal_value
    end_m = [abs(seq(n).terminal_value - x0_end) for n in idx]
    margins["endpoint"] = list(zip(idx, end_m))
    f = _tail_failure("endpoint", idx, end_m, tol)
    if f:
        failures.append(f)
    fixed = [e for e in entries if e.constant]
    per_entry = {}
    if fixed:
        bank = IntegratorBank([e.limit for e in fixed])
        target = bank.integrate(seq.limit)
        table = np.abs(np.array([bank.integrate(seq(n)) for n in idx]) - target)
        per_entry = {id(e): table[:, j].tolist() for j, e in enumerate(fixed)}
    for entry in entries:
        if id(entry) in per_entry:
            ms = per_entry[id(entry)]
        else:
            target = integrate_x_dA(seq.limit, entry.limit)
            ms = [abs(integrate_x_dA(seq(n), entry(n)) - target) for n in idx]
        margins[entry.name] = list(zip(idx, ms))
        f = _tail_failure("integral", idx, ms, tol, catalog_entry=entry.name)
        if f:
            failures.append(f)
    worst = np.max(np.array([[m for _, m in v] for v in margins.values()]), axis=0).tolist()
    return ConvergenceReport.build(
        "S-dual", depth, tol, failures, margins,
        {
            "sequence": seq.name,
            "catalog_size": len(entries),
            "skipped": skipped,
            "tau_tol": tau_tol,
            "below_tol_from": first_index_below(idx, worst, tol),
        },
    )


def endpoint_seminorm(x: CadlagStep) -> float:
    return abs(x.terminal_value)


def sigma_seminorm(x: CadlagStep, family: Sequence[IntegratorPath] | Mapping[str, IntegratorPath]) -> float:
    """``max_A |int x dA|`` over a finite family of integrators."""
    items = list(family.values()) if isinstance(family, Mapping) else list(family)
    if not items:
        raise ConfigurationError("seminorm family must be non-empty")
    return max(abs(integrate_x_dA(x, a)) for a in items)


def uniform_seminorm_convergence(
    seq: PathSequence,
    family: Sequence[IntegratorPath] | Mapping[str, IntegratorPath] | None = None,
    depth: int = 64,
    tol: float = 1e-2,
    level: int = 6,
) -> ConvergenceReport:
    """``sigma_seminorm(x_n - x_0, family) -> 0`` checked on the tail."""
    fam = family if family is not None else ramp_family(seq.horizon, level)
    idx = list(range(tail_start(depth), depth + 1))
    ms = [sigma_seminorm(seq(n) - seq.limit, fam) for n in idx]
    f = _tail_failure("seminorm", idx, ms, tol)
    return ConvergenceReport.build(
        "S-seminorm", depth, tol, [f] if f else [], {"seminorm": list(zip(idx, ms))},
        {"sequence": seq.name, "below_tol_from": first_index_below(idx, ms, tol)},
    )


def distance_convergence(
    seq: PathSequence,
    mode: str,
    depth: int = 64,
    tol: float = 1e-2,
    eps: float = DEFAULT_MJ1_EPS,
    grid: int = 16,
) -> ConvergenceReport:
    """Convergence in sup-norm, J1 or mJ1 judged from distance brackets on the tail.

    FAIL when the lower bound at ``depth`` is at least ``tol`` (the distance is
    certainly not small) or the upper bound fails to settle below ``tol``.
    """
    idx = list(range(tail_start(depth), depth + 1))
    lowers, uppers = [], []
    for n in idx:
        x = seq(n)
        if mode == "uniform":
            d = sup_distance(x, seq.limit)
            lo, hi = d, d
        elif mode == "J1":
            lo, hi = j1_distance_bounds(x, seq.limit, grid)
        elif mode == "mJ1":
            lo, hi = mj1_distance_bounds(x, seq.limit, eps, grid)
        else:
            raise DomainError(f"unknown distance mode {mode!r}")
        lowers.append(lo)
        uppers.append(hi)
    failures = []
    if lowers[-1] >= tol:
        failures.append({"condition": "lower_bound", "index": depth, "margin": lowers[-1]})
    f = _tail_failure("upper_bound", idx, uppers, tol)
    if f:
        failures.append(f)
    details = {"sequence": seq.name, "below_tol_from": first_index_below(idx, uppers, tol)}
    if mode == "mJ1":
        details["mj1_eps"] = eps
    return ConvergenceReport.build(
        mode, depth, tol, failures,
        {"lower": list(zip(idx, lowers)), "upper": list(zip(idx, uppers))}, details,
    )


def relative_s_compactness(
    paths: Sequence[CadlagStep],
    level_grid: Sequence[tuple[float, float]],
    eta_grid: Sequence[float],
    eps_grid: Sequence[float],
) -> CompactnessReport:
    """Bounds behind criteria (i)-(iii) plus growth flags along the list order.

    A bound is flagged as growing when its value over the whole list exceeds
    1.5 times its value over the first half.
    """
    paths = list(paths)
    if not (paths and level_grid and eta_grid and eps_grid):
        raise ConfigurationError("paths and all grids must be non-empty")
    sups = [x.sup_norm() for x in paths]
    up_b, up_g = {}, {}
    for a, b in level_grid:
        counts = [upcrossings(x, a, b) for x in paths]
        up_b[(a, b)] = max(counts)
        up_g[(a, b)] = growth_flag(counts)
    osc_b, osc_g = {}, {}
    for eta in eta_grid:
        counts = [oscillations(x, eta) for x in paths]
        osc_b[eta] = max(counts)
        osc_g[eta] = growth_flag(counts)
    q_b, q_g = {}, {}
    for eps in eps_grid:
        qs = [quantize(x, eps) for x in paths]
        var = [q.skeleton.total_variation() for q in qs]
        q_b[eps] = {
            "variation_bound": max(var),
            "approximation_error": max(q.approximation_error(x) for q, x in zip(qs, paths)),
            "max_jump_count": max(q.jump_count for q in qs),
        }
        q_g[eps] = growth_flag(var)
    return CompactnessReport(
        size=len(paths),
        sup_norm_bound=max(sups),
        sup_norm_growth=growth_flag(sups),
        upcrossing_bounds=up_b,
        upcrossing_growth=up_g,
        oscillation_bounds=osc_b,
        oscillation_growth=osc_g,
        quantization_bounds=q_b,
        quantization_growth=q_g,
    )


def infinite_horizon_s_test(
    family: InfinitePathFamily,
    T_grid: Sequence[float],
    catalog: Callable[[float], Sequence[IntegratorSequence]] | None = None,
    depth: int = 64,
    tol: float = 1e-2,
    **kwargs,
) -> ConvergenceReport:
    """Run :func:`s_dual_test` on the restrictions to each ``T`` in ``T_grid``."""
    if not T_grid:
        raise ConfigurationError("T_grid must be non-empty")
    failures = []
    per_t = {}
    margins = {}
    for horizon in T_grid:
        rep = s_dual_test(
            family.restricted(horizon),
            catalog(horizon) if catalog is not None else None,
            depth, tol, **kwargs,
        )
        per_t[f"{horizon:g}"] = rep.verdict
        margins[f"T={horizon:g}"] = [(n, max(m for m in ms)) for n, ms in _stack(rep.margins)]
        failures.extend({**f, "T": horizon} for f in rep.failures)
    return ConvergenceReport.build(
        "infinite-horizon", depth, tol, failures, margins,
        {"sequence": family.name, "T_grid": list(T_grid), "per_T": per_t},
    )


def _stack(margins: dict[str, list[tuple[int, float]]]):
    series = list(margins.values())
    idx = [n for n, _ in series[0]]
    for k, n in enumerate(idx):
        yield n, [s[k][1] for s in series]


def multidim_s_test(
    terms: Callable[[int], MultiPath],
    limit: MultiPath,
    catalog: Sequence[IntegratorSequence] | None = None,
    depth: int = 64,
    tol: float = 1e-2,
    name: str = "multi",
    **kwargs,
) -> ConvergenceReport:
    """Componentwise :func:`s_dual_test`; a FAIL names the (1-based) component."""
    dim = limit.dimension
    if terms(1).dimension != dim:
        raise DomainError(f"terms have dimension {terms(1).dimension}, limit has {dim}")
    failures = []
    margins = {}
    per_comp = {}
    for i in range(dim):
        def comp(n: int, i=i) -> CadlagStep:
            x = terms(n)
            if x.dimension != dim:
                raise DomainError(f"term {n} has dimension {x.dimension}, expected {dim}")
            return x.components[i]

        seq = PathSequence(f"{name}[{i + 1}]", comp, limit.components[i])
        rep = s_dual_test(seq, catalog, depth, tol, **kwargs)
        per_comp[i + 1] = rep.verdict
        margins[f"component {i + 1}"] = [(n, max(ms)) for n, ms in _stack(rep.margins)]
        failures.extend({**f, "component": i + 1} for f in rep.failures)
    return ConvergenceReport.build(
        "componentwise", depth, tol, failures, margins,
        {"sequence": name, "dimension": dim, "per_component": per_comp},
    )


# a-posteriori convergence by subsequence sampling -------------------------------

Tester = Callable[[Sequence[int], Sequence[CadlagStep], CadlagStep], bool]


def endpoint_rate_tester(rate: Callable[[int], float]) -> Tester:
    """A-priori convergence at a given rate: ``|x_{n_k}(T) - x_0(T)| < rate(k)`` for all ``k``."""

    def tester(indices, terms, limit):
        target = limit.terminal_value
        return all(abs(x.terminal_value - target) < rate(k) for k, x in enumerate(terms, start=1))

    return tester


def uniform_tester(bound: float) -> Tester:
    """Every term lies within ``bound`` of the limit in sup-norm."""

    def tester(indices, terms, limit):
        return all(sup_distance(x, limit) < bound for x in terms)

    return tester


def _stride_samples(length: int) -> list[tuple[str, list[int]]]:
    out = []
    for s in range(1, 6):
        pos = list(range(0, length, s))
        if len(pos) >= 2:
            out.append((f"stride{s}", pos))
    return out


def _random_samples(length: int, count: int, rng: np.random.Generator) -> list[tuple[str, list[int]]]:
    out = []
    for r in range(count):
        pos = []
        p = int(rng.integers(0, 3))
        while p < length:
            pos.append(p)
            p += int(rng.integers(1, 4))
        if len(pos) >= 2:
            out.append((f"random{r}", pos))
    return out


def kvpk_a_posteriori(
    tester: Tester,
    seq: PathSequence,
    subsequence_samples: int = 32,
    depth: int = 64,
    seed: int = 0,
) -> ConvergenceReport:
    """Falsification run of "every subsequence has a further subsequence passing ``tester``".

    Subsequences are strides 1..5 and ``subsequence_samples`` seeded random
    index sets of ``1..depth``; refinements are drawn the same way inside
    each subsequence, one level deep.
    """
    rng = np.random.default_rng(seed)
    indices = list(range(1, depth + 1))
    terms = [seq(n) for n in indices]
    samples = _stride_samples(depth) + _random_samples(depth, subsequence_samples, rng)
    failures = []
    found = {}
    for name, pos in samples:
        sub_idx = [indices[p] for p in pos]
        sub_terms = [terms[p] for p in pos]
        inner_rng = np.random.default_rng([seed, len(found)])
        refinements = _stride_samples(len(pos)) + _random_samples(len(pos), subsequence_samples, inner_rng)
        hit = None
        for rname, rpos in refinements:
            if tester([sub_idx[q] for q in rpos], [sub_terms[q] for q in rpos], seq.limit):
                hit = rname
                break
        found[name] = hit
        if hit is None:
            failures.append(
                {"condition": "no_refinement", "subsequence": name, "indices_head": sub_idx[:8]}
            )
    return ConvergenceReport.build(
        "KVPK", depth, 0.0, failures, {},
        {
            "sequence": seq.name,
            "a_priori_full": bool(tester(indices, terms, seq.limit)),
            "refinement_found": found,
            "seed": seed,
        },
    )
