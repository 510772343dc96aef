from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import integrators, step_paths
from skorokhod import (
    CadlagStep,
    HorizonMismatchError,
    IntegratorPath,
    IntegratorSequence,
    PiecewiseLinear,
    StieltjesMeasure,
    integrate_f_dv,
    integrate_x_dA,
    integration_by_parts_residual,
    primitive_of_density,
    tau_convergence_test,
    weak_star_test,
)
from skorokhod.stieltjes import IntegratorBank, default_test_family, hat_function, ibp_tolerance

TOL = 1e-9
ONE = PiecewiseLinear.constant(1.0)


def refinement_x_dA(x: CadlagStep, a: PiecewiseLinear, k: int = 10) -> float:
    """Left-point Riemann-Stieltjes sum on a dyadic grid refined by all breakpoints."""
    ts = np.union1d(np.linspace(0, x.horizon, 2**k + 1), np.union1d(x.breakpoints, a.nodes))
    return float(np.sum(x.evaluate(ts[:-1]) * np.diff(a.evaluate(ts))))


def refinement_f_dv(f: PiecewiseLinear, v: CadlagStep, k: int = 10) -> float:
    """Right-point sum plus the atom ``f(0) v(0)``; exact once the grid holds every jump."""
    ts = np.union1d(np.linspace(0, v.horizon, 2**k + 1), v.breakpoints)
    return float(f(0.0) * v(0.0) + np.sum(f.evaluate(ts[1:]) * np.diff(v.evaluate(ts))))


def zigzag_sequence(teeth_of, height_of, name="zigzag") -> IntegratorSequence:
    def term(n: int) -> IntegratorPath:
        m = teeth_of(n)
        h = height_of(n)
        nodes = np.linspace(0, 1, 2 * m + 1).tolist()
        vals = [0.0 if i % 2 == 0 else h for i in range(2 * m + 1)]
        return IntegratorPath(1.0, nodes, vals)

    return IntegratorSequence(name, term, IntegratorPath.zero())


class TestMeasure:
    def test_atoms(self):
        mu = StieltjesMeasure.from_path(CadlagStep(1.0, [0, 0.5], [2, -1]))
        assert mu.atoms == [(0.0, 2.0), (0.5, -3.0)]
        assert mu.total_abs_mass() == 5.0 and mu.total_mass() == -1.0

    @given(step_paths())
    def test_mass_identities(self, v):
        mu = StieltjesMeasure.from_path(v)
        assert mu.total_abs_mass() == pytest.approx(v.total_variation(), abs=1e-12)
        assert integrate_f_dv(ONE, v) == pytest.approx(v.terminal_value, abs=1e-12)


class TestIntegrals:
    def test_f_dv_examples(self):
        v = CadlagStep.indicator(0.5)
        assert integrate_f_dv(PiecewiseLinear(1.0, [0, 1], [0, 1]), v) == 0.5

    def test_x_dA_examples(self):
        a = IntegratorPath(1.0, [0, 0.3, 1], [0, 2, -1])
        assert integrate_x_dA(CadlagStep.constant(2.5), a) == pytest.approx(-2.5)
        assert integrate_x_dA(CadlagStep.indicator(0.25), IntegratorPath.identity()) == 0.75

    def test_horizon_mismatch(self):
        with pytest.raises(HorizonMismatchError):
            integrate_x_dA(CadlagStep.constant(1.0, 2.0), IntegratorPath.identity())

    @given(step_paths(), integrators())
    def test_x_dA_refinement_oracle(self, x, a):
        assert integrate_x_dA(x, a) == pytest.approx(refinement_x_dA(x, a), abs=TOL)

    @given(step_paths(), integrators())
    def test_f_dv_refinement_oracle(self, v, a):
        assert integrate_f_dv(a, v) == pytest.approx(refinement_f_dv(a, v), abs=TOL)

    @given(step_paths(), step_paths(), integrators(), integrators(), st.floats(-2, 2))
    def test_linearity(self, x, y, a, b, c):
        lhs = integrate_x_dA(x + y.scale(c), a)
        rhs = integrate_x_dA(x, a) + c * integrate_x_dA(y, a)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)
        merged = PiecewiseLinear(1.0, *_sum_nodes(a, b))
        lhs = integrate_f_dv(merged, x)
        rhs = integrate_f_dv(a, x) + integrate_f_dv(b, x)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)

    def test_ibp_examples(self):
        assert integration_by_parts_residual(CadlagStep.constant(3.0), IntegratorPath.identity()) == 0
        r = integration_by_parts_residual(CadlagStep.indicator(0.3), IntegratorPath.identity())
        assert abs(r) <= 1e-15

    @given(step_paths(), integrators())
    def test_ibp_random(self, v, a):
        assert abs(integration_by_parts_residual(v, a)) <= ibp_tolerance(v, a)


def _sum_nodes(a, b):
    ts = np.union1d(a.nodes, b.nodes)
    return ts.tolist(), (a.evaluate(ts) + b.evaluate(ts)).tolist()


class TestBank:
    @given(step_paths(), st.lists(integrators(), min_size=1, max_size=5))
    def test_matches_single_integrals(self, x, family):
        bank = IntegratorBank(family)
        expected = [integrate_x_dA(x, a) for a in family]
        assert bank.integrate(x) == pytest.approx(expected, abs=1e-9)

    def test_horizon_checks(self):
        with pytest.raises(HorizonMismatchError):
            IntegratorBank([IntegratorPath.zero(1.0), IntegratorPath.zero(2.0)])
        with pytest.raises(HorizonMismatchError):
            IntegratorBank([IntegratorPath.zero(1.0)]).integrate(CadlagStep.constant(1.0, 2.0))


class TestPrimitive:
    def test_zero_density(self):
        a = primitive_of_density(CadlagStep.constant(0.0))
        assert a.sup_norm() == 0.0

    def test_box_density(self):
        a = primitive_of_density(CadlagStep.indicator(0.25, end=0.5, height=4.0))
        assert a(0.25) == 0.0 and a(0.5) == 1.0 and a(1.0) == 1.0
        assert a.total_variation() == 1.0

    @given(step_paths(terminal_jump=False))
    def test_variation_is_l1_of_density(self, f):
        a = primitive_of_density(f)
        ends = list(f.breakpoints) + [f.horizon]
        l1 = sum(abs(c) * (e - s) for c, s, e in zip(f.values, ends, ends[1:]))
        assert a.total_variation() == pytest.approx(l1, abs=1e-12)

    def test_terminal_breakpoint_ignored(self):
        f = CadlagStep(1.0, [0, 1.0], [2.0, 5.0])
        assert primitive_of_density(f).values == (0.0, 2.0)


class TestTau:
    def test_shrinking_slope_passes(self):
        seq = IntegratorSequence("t/n", lambda n: IntegratorPath.identity().scale(1 / n),
                                 IntegratorPath.zero())
        rep = tau_convergence_test(seq, 64, 0.05)
        assert rep.passed
        assert rep.details["below_tol_from"] == 49
        assert rep.details["variation_bound"] == 1.0

    def test_fixed_height_zigzag_fails_uniform(self):
        rep = tau_convergence_test(zigzag_sequence(lambda n: 1, lambda n: 1.0), 32, 0.05)
        assert not rep.passed
        assert rep.witness["condition"] == "uniform" and rep.witness["margin"] == 1.0

    def test_fine_sawtooth_fails_variation(self):
        seq = zigzag_sequence(lambda n: n * n, lambda n: 1.0 / n)
        rep = tau_convergence_test(seq, 16, 0.1)
        assert [f["condition"] for f in rep.failures] == ["variation"]
        assert rep.failures[0]["index"] == 16

    def test_constant_sequence_short_circuits(self):
        rep = tau_convergence_test(IntegratorSequence.fixed("id", IntegratorPath.identity()), 8, 1e-9)
        assert rep.passed

    def test_depth_validation(self):
        with pytest.raises(ValueError):
            tau_convergence_test(IntegratorSequence.fixed("id", IntegratorPath.identity()), 1, 0.1)


class TestWeakStar:
    def test_constant_sequence(self):
        v = CadlagStep.indicator(0.3)
        assert weak_star_test(lambda n: v, v, depth=16, tol=1e-12).passed

    def test_drifting_jump_passes(self):
        v0 = CadlagStep.indicator(0.5)
        rep = weak_star_test(lambda n: CadlagStep.indicator(0.5 + 1 / (2 * n)), v0,
                             depth=512, tol=0.05, level=3)
        assert rep.passed

    def test_mass_blowup_fails_variation(self):
        v0 = CadlagStep.constant(0.0)
        rep = weak_star_test(lambda n: CadlagStep.indicator(0.5, end=0.5 + 1 / (2 * n), height=n), v0,
                             depth=32, tol=0.05, level=2)
        assert "variation" in [f["condition"] for f in rep.failures]

    def test_failure_names_test_function(self):
        rep = weak_star_test(lambda n: CadlagStep.constant(1.0), CadlagStep.constant(0.0),
                             test_family={"one": ONE}, depth=8, tol=0.1)
        assert rep.witness["test_function"] == "one" and rep.witness["margin"] == 1.0

    @given(st.integers(1, 5), st.floats(0.05, 0.45))
    def test_full_family_pass_implies_singleton_pass(self, level, shift):
        v0 = CadlagStep.indicator(0.5)
        seq = lambda n: CadlagStep.indicator(0.5 + shift / n)  # noqa: E731
        full = weak_star_test(seq, v0, depth=64, tol=0.2, level=level)
        single = weak_star_test(seq, v0, test_family=[ONE], depth=64, tol=0.2)
        assert single.passed or not full.passed

    def test_default_family_shape(self):
        fam = default_test_family(2.0, 3)
        assert len(fam) == 10 and "one" in fam
        hat = fam["hat(L=3,k=4)"]
        assert hat(1.0) == 1.0 and hat(0.75) == 0.0 and hat(0.875) == pytest.approx(0.5)

    def test_hat_clipped(self):
        h = hat_function(0.0, 0.25, 1.0)
        assert h(0.0) == 1.0 and h(0.25) == 0.0
        assert math.isclose(h(0.125), 0.5)
