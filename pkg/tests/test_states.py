"""Tests for canonical states, classification, and noisy mixtures."""

import math

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from hardy3q import linalg
from hardy3q.errors import NormalizationError
from hardy3q.states import (
    CLASS_ORDER,
    CanonicalState,
    NoisyState,
    StateClass,
    classify,
    classify_batch,
    classify_lambdas,
    matching_rows,
    mix_with_white_noise,
    normalized_canonical,
    random_canonical,
    sample_class,
    to_ket,
)

INV_SQRT2 = 2**-0.5


def canonical(lams, phi=0.0):
    arr = np.asarray(lams, float)
    return CanonicalState(tuple(arr / np.linalg.norm(arr)), phi)


class TestCanonicalState:
    def test_rejects_negative_amplitude(self):
        with pytest.raises(ValueError):
            CanonicalState((-INV_SQRT2, 0, 0, 0, INV_SQRT2), 0.0)

    def test_rejects_unnormalized(self):
        with pytest.raises(NormalizationError):
            CanonicalState((1.0, 1.0, 0, 0, 0), 0.0)

    def test_rejects_phase_outside_range(self):
        with pytest.raises(ValueError):
            CanonicalState((1.0, 0, 0, 0, 0), -0.1)

    def test_normalized_canonical_reports_factor(self):
        state, factor = normalized_canonical([3.0, 0, 0, 0, 4.0], 0.5)
        assert factor == pytest.approx(5.0)
        assert state.lams == pytest.approx((0.6, 0, 0, 0, 0.8))


class TestToKet:
    def test_ghz(self):
        psi = to_ket(CanonicalState((INV_SQRT2, 0, 0, 0, INV_SQRT2), 0.0))
        expected = np.zeros(8, complex)
        expected[0] = expected[7] = INV_SQRT2
        assert np.allclose(psi, expected)

    def test_000(self):
        psi = to_ket(CanonicalState((1, 0, 0, 0, 0), 0.0))
        assert np.allclose(psi, linalg.basis_ket(8, 0))

    def test_w_up_to_local_bit_flip(self):
        s = 3**-0.5
        psi = to_ket(CanonicalState((s, 0, s, s, 0), 0.0))
        flip = linalg.tensor(np.array([[0, 1], [1, 0]], complex), np.eye(2), np.eye(2))
        w = np.zeros(8, complex)
        w[1] = w[2] = w[4] = s
        assert np.allclose(flip @ psi, w, atol=1e-12)

    def test_phase_lands_on_index_4(self):
        state = canonical([0.5, 0.5, 0.5, 0.4, 0.3], 1.0)
        psi = to_ket(state)
        assert psi[4] == pytest.approx(state.lams[1] * np.exp(1j), abs=1e-12)

    @hyp_settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_norm_one(self, seed):
        state = random_canonical(np.random.default_rng(seed))
        assert np.linalg.norm(to_ket(state)) == pytest.approx(1.0, abs=1e-12)


class TestClassifyExamples:
    def test_ghz_is_d14(self):
        assert classify(canonical([1, 0, 0, 0, 1])) is StateClass.D14

    def test_c1_point(self):
        assert classify(canonical([1, 0, 1, 0, 0])) is StateClass.C1

    def test_a3_equality_surface(self):
        state = CanonicalState((0.0, 0.5, 0.5, 0.5, 0.5), 0.0)
        assert classify(state) is StateClass.A3

    def test_b3_below_half(self):
        assert classify(CanonicalState((0.6, 0, 0.8, 0, 0), 0.0)) is StateClass.B3

    def test_w_is_d12(self):
        s = 3**-0.5
        assert classify(CanonicalState((s, 0, s, s, 0), 0.0)) is StateClass.D12

    def test_product_000_is_a2(self):
        assert classify(CanonicalState((1, 0, 0, 0, 0), 0.0)) is StateClass.A2

    def test_phi_ignored_when_l1_vanishes(self):
        s = 3**-0.5
        a = classify(CanonicalState((s, 0, s, s, 0), 0.0))
        b = classify(CanonicalState((s, 0, s, s, 0), 2.0))
        assert a is b is StateClass.D12


class TestClassifyTargeted:
    @pytest.mark.parametrize("cls", CLASS_ORDER, ids=[c.value for c in CLASS_ORDER])
    def test_sampler_lands_in_class(self, cls, rng):
        for _ in range(200):
            state = sample_class(cls, rng)
            assert classify(state, audit=True) is cls

    def test_perturbation_stability_away_from_boundaries(self, rng):
        eps = 1e-9
        stable_classes = [c for c in CLASS_ORDER if c is not StateClass.A2]
        for _ in range(300):
            cls = stable_classes[int(rng.integers(len(stable_classes)))]
            state = sample_class(cls, rng)
            base = classify(state)
            lams = np.array(state.lams)
            jitter = rng.uniform(-eps / 10, eps / 10, 5)
            jittered = np.clip(lams + jitter, 0.0, None)
            # renormalization keeps the perturbation at the eps/10 scale
            jittered /= np.linalg.norm(jittered)
            assert classify_lambdas(jittered, state.phi, eps=eps) is base


class TestClassifyProperties:
    @hyp_settings(max_examples=300, deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_uniform_draws_match_exactly_one_row(self, seed):
        state = random_canonical(np.random.default_rng(seed))
        rows = matching_rows(state.lams, state.phi)
        assert len(rows) == 1
        assert classify(state, audit=True) is rows[0]

    def test_batch_agrees_with_scalar(self, rng):
        states = [random_canonical(rng) for _ in range(500)]
        states += [sample_class(c, rng) for c in CLASS_ORDER for _ in range(8)]
        lams = np.array([s.lams for s in states])
        phis = np.array([s.phi for s in states])
        codes = classify_batch(lams, phis)
        for state, code in zip(states, codes):
            assert CLASS_ORDER[code] is classify(state)


class TestWhiteNoise:
    def test_v_one_is_pure_projector(self):
        state = canonical([1, 0, 0, 0, 1])
        rho = mix_with_white_noise(state, 1.0)
        assert np.allclose(rho, np.outer(state.to_ket(), state.to_ket().conj()))

    def test_v_zero_is_maximally_mixed(self):
        state = canonical([1, 0, 0, 0, 1])
        assert np.allclose(mix_with_white_noise(state, 0.0), np.eye(8) / 8)

    def test_half_ghz_spectrum(self):
        rho = mix_with_white_noise(canonical([1, 0, 0, 0, 1]), 0.5)
        eigs = np.sort(np.linalg.eigvalsh(rho))
        assert eigs[-1] == pytest.approx(0.5625, abs=1e-12)
        assert np.allclose(eigs[:-1], 0.0625, atol=1e-12)

    def test_rejects_bad_visibility(self):
        with pytest.raises(ValueError):
            mix_with_white_noise(canonical([1, 0, 0, 0, 1]), 1.5)

    def test_noisy_state_density_is_valid(self, rng):
        state = random_canonical(rng)
        rho = NoisyState(state, 0.37).density()
        assert linalg.is_density(rho)

    def test_accepts_raw_ket(self):
        w = np.zeros(8, complex)
        w[1] = w[2] = w[4] = 3**-0.5
        rho = mix_with_white_noise(w, 0.25)
        assert linalg.is_density(rho)
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
