"""Tests for witness constructions, verification, and the fallback search."""

import numpy as np
import pytest

from hardy3q.bell import bell_value
from hardy3q.errors import (
    ConstructionFailureError,
    NoWitnessError,
    WindowViolationError,
)
from hardy3q.hardy import (
    build_witness,
    construct_bipartite,
    construct_genuine,
    construct_maximal,
    extract_pair_factorization,
    genuine_candidates,
    pair_hardy_probability,
    search_hardy_observables,
    two_qubit_hardy_coefficients,
    verify_hardy,
)
from hardy3q.linalg import schmidt_decompose
from hardy3q.observables import observable_pair, settings_from_coefficient_rows
from hardy3q.states import CanonicalState, StateClass, classify, sample_class

from conftest import oracle_hardy_probabilities

INV_SQRT2 = 2**-0.5

D_CLASSES = [c for c in StateClass if c.major == "D"]
B_CLASSES = [c for c in StateClass if c.major == "B"]
C_CLASSES = [c for c in StateClass if c.major == "C"]

GHZ = CanonicalState((INV_SQRT2, 0, 0, 0, INV_SQRT2), 0.0)
W = CanonicalState((3**-0.5, 0, 3**-0.5, 3**-0.5, 0), 0.0)


class TestObservablePair:
    def test_z_and_hadamard_overlap(self):
        pair = observable_pair(1, 0, 1, 1)
        assert pair.overlap == pytest.approx(INV_SQRT2, abs=1e-12)

    def test_commuting_pair_rejected(self):
        with pytest.raises(WindowViolationError):
            observable_pair(1, 0, 0, 1)

    def test_identical_pair_rejected(self):
        with pytest.raises(WindowViolationError):
            observable_pair(1, 1, 1, 1)

    def test_ghz_recipe_first_pair(self):
        # class D.14 coefficients at the GHZ point; the direct inner product
        # of the normalized kets is (i - 1)/2, magnitude 1/sqrt(2)
        pair = observable_pair(1, 1, 1j * INV_SQRT2, -INV_SQRT2)
        assert pair.overlap == pytest.approx(INV_SQRT2, abs=1e-12)
        assert 0.0 < pair.overlap < 1.0


class TestVerifyHardy:
    def test_ghz_witness_satisfied(self):
        built = build_witness(GHZ)
        cert = verify_hardy(GHZ.to_ket(), built.settings, zero_tol=1e-10)
        assert cert.satisfied
        assert max(cert.probabilities[:4]) <= 1e-10
        assert cert.success_probability == pytest.approx(0.125, abs=1e-12)

    def test_maximally_mixed_not_satisfied(self):
        built = build_witness(GHZ)
        cert = verify_hardy(np.eye(8, dtype=complex) / 8, built.settings)
        assert not cert.satisfied
        assert cert.probabilities == pytest.approx((0.125,) * 5, abs=1e-12)


class TestGenuineConstructions:
    @pytest.mark.parametrize("cls", D_CLASSES, ids=[c.value for c in D_CLASSES])
    def test_recipe_certificates(self, cls, rng):
        fallbacks = 0
        for _ in range(60):
            state = sample_class(cls, rng)
            built = construct_genuine(state, cls, zero_tol=1e-9)
            assert built.certificate.satisfied
            probs = oracle_hardy_probabilities(state.to_ket(), built.settings)
            assert max(probs[:4]) <= 1e-9
            assert probs[4] > 1e-9
            fallbacks += built.used_fallback
        if cls is StateClass.D3:
            # the printed D.3 recipe violates the second Hardy condition for
            # every valid parameter choice, so the search must step in
            assert fallbacks > 0
        else:
            assert fallbacks == 0

    def test_ghz_d14(self):
        built = construct_genuine(GHZ, StateClass.D14)
        assert not built.used_fallback
        assert built.certificate.success_probability == pytest.approx(1 / 8, abs=1e-12)

    def test_w_d12_quadratic(self):
        built = construct_genuine(W, StateClass.D12)
        assert not built.used_fallback
        assert built.certificate.satisfied

    def test_d12_quadratic_roots_are_real_here(self):
        # for the W point the defining quadratic z^2 l2^4 + z l2 l3 + l3^4
        # reduces to z^2 + 3z + 1 = 0; the second-qubit D coefficient is -l2*z
        cands = genuine_candidates(StateClass.D12, W)
        deltas = sorted(c[1][3].real / -W.lams[2] for c in cands)
        roots = sorted(np.roots([1.0, 3.0, 1.0]))
        assert deltas == pytest.approx(roots, abs=1e-9)

    def test_wrong_class_rejected(self):
        with pytest.raises(ConstructionFailureError):
            construct_genuine(CanonicalState((0.6, 0, 0.8, 0, 0), 0.0), StateClass.B3)

    def test_deterministic_for_fixed_seed(self, rng):
        state = sample_class(StateClass.D3, np.random.default_rng(5))
        a = construct_genuine(state, StateClass.D3, seed=9)
        b = construct_genuine(state, StateClass.D3, seed=9)
        assert a.certificate.probabilities == b.certificate.probabilities
        for pa, pb in zip(a.settings.pairs, b.settings.pairs):
            assert np.array_equal(pa.u.plus_ket, pb.u.plus_ket)
            assert np.array_equal(pa.d.plus_ket, pb.d.plus_ket)


class TestBipartiteConstructions:
    def test_b3_closed_form_example(self):
        state = CanonicalState((np.sqrt(0.8), 0, np.sqrt(0.2), 0, 0), 0.0)
        built = construct_bipartite(state, StateClass.B3)
        assert built.certificate.satisfied
        _, eta = extract_pair_factorization(state.to_ket(), 1)
        a, b = schmidt_decompose(eta).coefficients
        pair_value = pair_hardy_probability(a, b)
        assert pair_value == pytest.approx(0.0888888888888889, abs=1e-12)
        # the product-qubit U+ = (chi + chi_perp)/sqrt(2) halves the success term
        assert built.certificate.success_probability == pytest.approx(
            pair_value / 2, abs=1e-12
        )

    @pytest.mark.parametrize("cls", B_CLASSES, ids=[c.value for c in B_CLASSES])
    def test_pair_lift_certificates(self, cls, rng):
        for _ in range(60):
            state = sample_class(cls, rng)
            built = construct_bipartite(state, cls)
            assert built.certificate.satisfied
            assert not built.used_fallback
            probs = oracle_hardy_probabilities(state.to_ket(), built.settings)
            assert max(probs[:4]) <= 1e-10
            psi = state.to_ket()
            from hardy3q.hardy import PRODUCT_QUBIT

            _, eta = extract_pair_factorization(psi, PRODUCT_QUBIT[cls])
            a, b = schmidt_decompose(eta).coefficients
            assert built.certificate.success_probability == pytest.approx(
                pair_hardy_probability(a, b) / 2, abs=1e-9
            )

    def test_two_qubit_coefficients_zero_conditions(self, rng):
        """Re-derivation check: the pair recipe kills the three zero terms."""
        for _ in range(200):
            t = rng.uniform(0.1, np.pi / 4 - 0.05)
            a, b = np.cos(t), np.sin(t)
            eta = np.array([a, 0, 0, b], complex)
            (u1, d1), (u2, d2) = two_qubit_hardy_coefficients(a, b)

            def amp(x, y):
                k = np.kron(
                    np.array(x, complex) / np.linalg.norm(x),
                    np.array(y, complex) / np.linalg.norm(y),
                )
                return np.vdot(k, eta)

            assert abs(amp(d1, u2)) <= 1e-12
            assert abs(amp(u1, d2)) <= 1e-12
            d1m = (-np.conj(d1[1]), np.conj(d1[0]))
            d2m = (-np.conj(d2[1]), np.conj(d2[0]))
            assert abs(amp(d1m, d2m)) <= 1e-12
            assert abs(amp(u1, u2)) ** 2 == pytest.approx(
                pair_hardy_probability(a, b), abs=1e-12
            )

    def test_maximal_pair_rejected(self):
        state = CanonicalState((INV_SQRT2, 0, INV_SQRT2, 0, 0), 0.0)
        with pytest.raises(ConstructionFailureError):
            construct_bipartite(state, StateClass.B3)


class TestMaximalConstructions:
    @pytest.mark.parametrize("cls", C_CLASSES, ids=[c.value for c in C_CLASSES])
    def test_violation_without_hardy(self, cls, rng):
        for _ in range(60):
            state = sample_class(cls, rng)
            built = construct_maximal(state, cls)
            assert not built.certificate.satisfied
            report = bell_value(state.to_ket(), built.settings)
            assert report.bell_value == pytest.approx(-0.0184, abs=1e-12)

    def test_c2_is_quoted_canonical_case(self):
        state = CanonicalState((INV_SQRT2, 0, 0, INV_SQRT2, 0), 0.0)
        built = construct_maximal(state, StateClass.C2)
        assert built.certificate.probabilities == pytest.approx(
            (0.0, 0.01, 0.01, 0.0, 0.0384), abs=1e-12
        )


class TestBuildWitness:
    def test_product_state_has_no_witness(self):
        with pytest.raises(NoWitnessError):
            build_witness(CanonicalState((1, 0, 0, 0, 0), 0.0))

    def test_dispatch_covers_entangled_majors(self, rng):
        for cls in (StateClass.B1, StateClass.C3, StateClass.D5):
            state = sample_class(cls, rng)
            built = build_witness(state)
            assert built.state_class is cls

    def test_every_entangled_witness_violates(self, rng):
        for cls in StateClass:
            if cls.major == "A":
                continue
            state = sample_class(cls, rng)
            built = build_witness(state)
            assert bell_value(state.to_ket(), built.settings).bell_value < 0

    def test_b_and_d_witnesses_give_minus_p5(self, rng):
        # the four zero terms vanish, so B collapses to -P5
        for cls in StateClass:
            if cls.major not in ("B", "D"):
                continue
            for _ in range(10):
                state = sample_class(cls, rng)
                built = build_witness(state)
                value = bell_value(state.to_ket(), built.settings).bell_value
                assert value == pytest.approx(
                    -built.certificate.success_probability, abs=1e-9
                )


class TestSearch:
    def test_finds_ghz_settings(self):
        found = search_hardy_observables(GHZ.to_ket(), attempts=10, seed=0)
        assert found is not None
        assert verify_hardy(GHZ.to_ket(), found, zero_tol=1e-8).satisfied

    def test_not_found_for_product_state(self):
        psi = np.zeros(8, complex)
        psi[0] = 1.0
        assert search_hardy_observables(psi, attempts=25, seed=0) is None

    def test_not_found_for_maximal_pair(self):
        psi = CanonicalState((INV_SQRT2, 0, 0, INV_SQRT2, 0), 0.0).to_ket()
        assert search_hardy_observables(psi, attempts=25, seed=0) is None

    def test_deterministic(self, rng):
        state = sample_class(StateClass.D1, rng)
        a = search_hardy_observables(state.to_ket(), attempts=10, seed=4)
        b = search_hardy_observables(state.to_ket(), attempts=10, seed=4)
        assert a is not None and b is not None
        for pa, pb in zip(a.pairs, b.pairs):
            assert np.array_equal(pa.u.plus_ket, pb.u.plus_ket)
            assert np.array_equal(pa.d.plus_ket, pb.d.plus_ket)


class TestWindowInvariant:
    def test_all_constructions_stay_in_window(self, rng):
        for cls in StateClass:
            if cls.major == "A":
                continue
            for _ in range(20):
                state = sample_class(cls, rng)
                built = build_witness(state)
                for pair in built.settings.pairs:
                    assert 1e-9 < pair.overlap < 1 - 1e-9
