import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from conftest import random_state
from logicbell.pcm import (ParityOutcome, ProbeParams, pcm_branches, pcm_error_probability,
                           pcm_sample, pcm_sample_physical)
from logicbell.state_core import apply_hadamard, basis_state, fidelity, from_terms, inner, tensor
from logicbell.states import bell

# Gaussian tail beyond half the separation, from 40-digit mpmath quadrature.
P_ERR_SEP_12 = 9.8658764503769814e-10    # alpha * (1 - cos 2theta) = 6
P_ERR_ALPHA4_THETA01 = 0.46822453254235818
ALPHA_FOR_P01 = 1.2815515655446005       # theta = pi/4 gives P_err = 0.1


def overlap_error(alpha, theta):
    """Midpoint-threshold error by direct integration of the two Gaussians."""
    even_mean = 2 * alpha
    odd_mean = 2 * alpha * math.cos(2 * theta)
    cut = (even_mean + odd_mean) / 2
    pdf = stats.norm.pdf
    miss_even, _ = integrate.quad(lambda x: pdf(x, even_mean), -np.inf, cut,
                                  epsabs=1e-14, epsrel=1e-12)
    miss_odd, _ = integrate.quad(lambda x: pdf(x, odd_mean), cut, np.inf,
                                 epsabs=1e-14, epsrel=1e-12)
    return 0.5 * (miss_even + miss_odd)


class TestBranches:
    def test_phi_plus_even(self):
        (branch,) = pcm_branches(bell("phi", "+"), 0, 1)
        outcome, p, s = branch
        assert outcome is ParityOutcome.EVEN and p == pytest.approx(1)
        assert fidelity(s, bell("phi", "+")) == pytest.approx(1)

    def test_psi_plus_odd(self):
        (branch,) = pcm_branches(from_terms(2, {"HV": 1, "VH": 1}), 0, 1)
        outcome, p, s = branch
        assert outcome is ParityOutcome.ODD and p == pytest.approx(1)
        assert fidelity(s, bell("psi", "+")) == pytest.approx(1)

    def test_product_splits(self):
        plus = apply_hadamard(basis_state("H"), 0)
        (even, pe, se), (odd, po, so) = pcm_branches(tensor(basis_state("H"), plus), 0, 1)
        assert even is ParityOutcome.EVEN and odd is ParityOutcome.ODD
        assert pe == pytest.approx(0.5) and po == pytest.approx(0.5)
        assert fidelity(se, basis_state("HH")) == pytest.approx(1)
        assert fidelity(so, basis_state("HV")) == pytest.approx(1)

    def test_nondemolition(self, rng):
        s = random_state(4, rng)
        for _, _, c in pcm_branches(s, 1, 3):
            assert c.n_photons == 4

    def test_bad_pairs(self):
        with pytest.raises(ValueError):
            pcm_branches(bell("phi", "+"), 1, 1)
        with pytest.raises(IndexError):
            pcm_branches(bell("phi", "+"), 0, 2)

    @pytest.mark.parametrize("n", [2, 3, 4, 6])
    def test_random_states(self, n, rng):
        for _ in range(1000 if n < 6 else 250):
            s = random_state(n, rng)
            i, j = rng.choice(n, size=2, replace=False)
            branches = pcm_branches(s, int(i), int(j), tol=0)
            assert sum(p for _, p, _ in branches) == pytest.approx(1, abs=1e-12)
            for _, _, c in branches:
                assert c.norm() == pytest.approx(1, abs=1e-12)
            if len(branches) == 2:
                assert abs(inner(branches[0][2], branches[1][2])) < 1e-12

    @given(st.integers(2, 6), st.data())
    @settings(max_examples=80)
    def test_parity_support(self, n, data):
        rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
        i, j = data.draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
        for outcome, _, c in pcm_branches(random_state(n, rng), i, j):
            for bits in c.support(tol=0):
                assert (bits[i] ^ bits[j]) == outcome.value


class TestSample:
    # Hadamarded Phi+ state; photons a1 a2 b1 b2, pair a1b1 = (0, 2).
    kets = ["HHHH", "HHVV", "VVHH", "VVVV", "HVHV", "HVVH", "VHHV", "VHVH"]

    def test_even_collapse(self):
        rec, s = pcm_sample(from_terms(4, {k: 1 for k in self.kets}), 0, 2, 0.2)
        assert rec.outcome is ParityOutcome.EVEN and rec.probability == pytest.approx(0.5)
        expected = from_terms(4, {"HHHH": 1, "VVVV": 1, "HVHV": 1, "VHVH": 1})
        assert fidelity(s, expected) == pytest.approx(1, abs=1e-12)

    def test_odd_collapse(self):
        rec, s = pcm_sample(from_terms(4, {k: 1 for k in self.kets}), 0, 2, 0.9)
        assert rec.outcome is ParityOutcome.ODD
        expected = from_terms(4, {"HHVV": 1, "VVHH": 1, "HVVH": 1, "VHHV": 1})
        assert fidelity(s, expected) == pytest.approx(1, abs=1e-12)

    def test_repeat_is_idempotent(self, rng):
        s = random_state(3, rng)
        rec, c = pcm_sample(s, 0, 2, 0.6)
        (only,) = pcm_branches(c, 0, 2)
        assert only[0] is rec.outcome and only[1] == pytest.approx(1)
        assert not rec.misreported


class TestErrorProbability:
    def test_small_theta_limit(self):
        assert pcm_error_probability(ProbeParams(1.0, 1e-8)) == pytest.approx(0.5, abs=1e-12)

    def test_separation_six(self):
        theta = 0.5
        alpha = 6 / (1 - math.cos(2 * theta))
        assert pcm_error_probability(ProbeParams(alpha, theta)) == pytest.approx(
            P_ERR_SEP_12, rel=1e-9)

    def test_alpha4_theta01(self):
        assert pcm_error_probability(ProbeParams(4, 0.1)) == pytest.approx(
            P_ERR_ALPHA4_THETA01, abs=1e-14)

    @pytest.mark.parametrize("alpha,theta", [(0.3, 0.05), (2.0, 0.3), (5.0, math.pi / 4)])
    def test_against_quadrature(self, alpha, theta):
        assert pcm_error_probability(ProbeParams(alpha, theta)) == pytest.approx(
            overlap_error(alpha, theta), abs=1e-10)

    def test_monotone(self):
        alphas = np.linspace(0.1, 10, 25)
        thetas = np.linspace(0.01, math.pi / 4, 25)
        grid = np.array([[pcm_error_probability(ProbeParams(a, t)) for t in thetas]
                         for a in alphas])
        assert np.all(np.diff(grid, axis=0) <= 0)
        assert np.all(np.diff(grid, axis=1) <= 0)

    @pytest.mark.parametrize("alpha,theta", [(0, 0.1), (-1, 0.1), (1, 0), (1, 1.0)])
    def test_invalid_probe(self, alpha, theta):
        with pytest.raises(ValueError):
            ProbeParams(alpha, theta)


class TestPhysical:
    def test_zero_error_limit(self, rng):
        probe = ProbeParams(100.0, math.pi / 4)
        assert pcm_error_probability(probe) == 0.0
        s = random_state(3, rng)
        for _ in range(50):
            draws = rng.random(2)
            a = pcm_sample_physical(s, 0, 1, probe, draws)
            b = pcm_sample(s, 0, 1, draws[0])
            assert a[0] == b[0]
            np.testing.assert_array_equal(a[1].amplitudes, b[1].amplitudes)

    def test_disabled_flip_matches_ideal(self, rng):
        s = random_state(4, rng)
        draws = rng.random((200, 2))
        ideal = [pcm_sample(s, 1, 2, d[0])[0] for d in draws]
        phys = [pcm_sample_physical(s, 1, 2, None, d)[0] for d in draws]
        assert ideal == phys

    def test_collapse_follows_true_parity(self):
        probe = ProbeParams(ALPHA_FOR_P01, math.pi / 4)
        phi = bell("phi", "+")
        rec, s = pcm_sample_physical(phi, 0, 1, probe, (0.5, 0.05))
        assert rec.misreported and rec.outcome is ParityOutcome.ODD
        assert rec.true_outcome is ParityOutcome.EVEN
        assert fidelity(s, phi) == pytest.approx(1)
        rec, _ = pcm_sample_physical(phi, 0, 1, probe, (0.5, 0.15))
        assert not rec.misreported and rec.outcome is ParityOutcome.EVEN

    def test_misreport_rate(self):
        probe = ProbeParams(ALPHA_FOR_P01, math.pi / 4)
        p = pcm_error_probability(probe)
        assert p == pytest.approx(0.1, abs=1e-12)
        n = 100_000
        draws = np.random.default_rng(3).random((n, 2))
        phi = bell("phi", "+")
        flips = sum(pcm_sample_physical(phi, 0, 1, probe, d)[0].misreported for d in draws)
        sigma = math.sqrt(n * p * (1 - p))
        assert abs(flips - n * p) < 3 * sigma
