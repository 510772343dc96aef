from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import step_paths
from skorokhod import (
    CadlagStep,
    DomainError,
    linear_combine,
    oscillations,
    quantization_bound_check,
    quantize,
    upcrossings,
)
from skorokhod.brute import brute_oscillations, brute_upcrossings
from skorokhod.witnesses import random_step_path, sawtooth

TOL = 1e-12


class TestUpcrossings:
    def test_examples(self):
        assert upcrossings(CadlagStep.constant(0.3), 0.0, 1.0) == 0
        assert upcrossings(CadlagStep.from_segments([-1, 2, -1, 2, -1, 2]), 0, 1) == 3
        assert upcrossings(CadlagStep.indicator(0.5), 0.25, 0.75) == 1

    def test_strict_levels(self):
        # touching a or b does not count
        assert upcrossings(CadlagStep.from_segments([0, 1, 0, 1]), 0, 1) == 0

    def test_domain(self):
        with pytest.raises(DomainError):
            upcrossings(CadlagStep.constant(0.0), 1.0, 1.0)

    def test_exhaustive_small_alphabet(self):
        # every 6-segment path over {0, 1, 2}, levels from the value set +- 0.1
        levels = [v + d for v in (0, 1, 2) for d in (-0.1, 0.1)]
        bands = [(a, b) for a in levels for b in levels if a < b]
        for vals in itertools.product((0.0, 1.0, 2.0), repeat=6):
            x = CadlagStep.from_segments(vals)
            for a, b in bands:
                assert upcrossings(x, a, b) == brute_upcrossings(x.values, a, b)

    @given(step_paths(), st.floats(-3, 3), st.floats(0.01, 3))
    def test_brute_oracle(self, x, a, width):
        assert upcrossings(x, a, a + width) == brute_upcrossings(x.values, a, a + width)

    @given(step_paths(), st.floats(-2, 2), st.floats(0.1, 2), st.floats(0, 1), st.floats(0, 1))
    def test_widening_band_cannot_increase(self, x, a, w, da, db):
        assert upcrossings(x, a - da, a + w + db) <= upcrossings(x, a, a + w)


class TestOscillations:
    def test_examples(self):
        assert oscillations(CadlagStep.constant(2.0), 0.1) == 0
        assert oscillations(CadlagStep.from_segments([0, 1, 0, 1]), 0.5) == 3
        assert oscillations(CadlagStep.from_segments([0, 0.4, 0.8]), 0.5) == 1

    def test_domain(self):
        with pytest.raises(DomainError):
            oscillations(CadlagStep.constant(0.0), 0.0)

    def test_exhaustive_small_alphabet(self):
        for vals in itertools.product((0.0, 1.0, 2.0), repeat=6):
            x = CadlagStep.from_segments(vals)
            for eta in (0.5, 0.9, 1.0, 1.1, 1.5):
                assert oscillations(x, eta) == brute_oscillations(x.values, eta)

    @given(step_paths(), st.floats(0.01, 3))
    def test_brute_oracle(self, x, eta):
        assert oscillations(x, eta) == brute_oscillations(x.values, eta)

    @given(step_paths(), st.floats(0.05, 2), st.floats(0, 2))
    def test_monotone_in_eta(self, x, eta, extra):
        assert oscillations(x, eta + extra) <= oscillations(x, eta)


class TestQuantization:
    def test_below_threshold(self):
        x = CadlagStep.from_segments([0, 0.4, 0.1, 0.3])
        q = quantize(x, 0.5)
        assert q.jump_count == 0 and q.skeleton == CadlagStep.constant(0.0)

    def test_single_jump(self):
        x = CadlagStep.indicator(0.5)
        q = quantize(x, 0.5)
        assert q.stopping_times == (0.0, 0.5)
        assert q.skeleton == x and q.jump_count == 1
        m, n = quantization_bound_check(x, 0.5)
        assert m == 1 <= n

    def test_bound_check_constant(self):
        assert quantization_bound_check(CadlagStep.constant(1.0), 0.3) == (0, 0)

    def test_stopping_time_at_breakpoint(self):
        # a move of exactly eps does not trigger; the next breakpoint does
        x = CadlagStep(1.0, [0, 0.25, 0.5], [0.0, 0.5, 0.6])
        assert quantize(x, 0.5).stopping_times == (0.0, 0.5)

    def test_decomposition_starts_at_x0(self):
        x = CadlagStep.from_segments([2.0, 3.0, 1.0])
        q = quantize(x, 0.5)
        assert q.jump_decomposition[0] == (2.0, 0.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            quantize(CadlagStep.constant(0.0), -1)

    @given(step_paths(), st.floats(0.01, 3))
    def test_invariants(self, x, eps):
        q = quantize(x, eps)
        assert q.approximation_error(x) <= eps
        rebuilt = q.reconstruct()
        assert rebuilt.breakpoints == q.skeleton.breakpoints
        assert rebuilt.allclose(q.skeleton, TOL)
        for k, tau in enumerate(q.stopping_times):
            assert q.skeleton(tau) == x(tau)
        m, n = quantization_bound_check(x, eps)
        assert m == q.jump_count and m <= n

    def test_random_bound_200(self):
        for seed in range(200):
            x = random_step_path(seed, 20, 2.0)
            m, n = quantization_bound_check(x, 0.3 + (seed % 7) / 10)
            assert m <= n

    def test_sawtooth_counts(self):
        x = sawtooth(4, 0.0, 1.0)
        assert upcrossings(x, 0.25, 0.75) == 4
        assert oscillations(x, 0.5) == 7
        assert quantize(x, 0.5).jump_count == 7
        assert linear_combine(x, x, 1, -1) == CadlagStep.constant(0.0)
