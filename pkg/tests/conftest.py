"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from hardy3q.observables import random_angles, settings_from_angles
from hardy3q.errors import WindowViolationError


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)


def random_ket(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_settings(rng):
    """Random windowed settings (redraws on window violations)."""
    while True:
        try:
            return settings_from_angles(random_angles(rng))
        except WindowViolationError:
            continue


def oracle_joint_probability(state, kets):
    """Independent path: build the full product vector and contract.

    ``kets`` are the three chosen eigenkets.  Works for kets and densities.
    """
    v = np.kron(np.kron(kets[0], kets[1]), kets[2])
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        return float(abs(np.vdot(v, arr)) ** 2)
    return float(np.vdot(v, arr @ v).real)


def oracle_hardy_probabilities(state, settings):
    """The five canonical-order probabilities via the kron oracle."""
    pairs = settings.pairs
    picks = [
        (pairs[0].d.minus_ket, pairs[1].d.minus_ket, pairs[2].d.minus_ket),
        (pairs[0].d.plus_ket, pairs[1].u.plus_ket, pairs[2].u.plus_ket),
        (pairs[0].u.plus_ket, pairs[1].d.plus_ket, pairs[2].u.plus_ket),
        (pairs[0].u.plus_ket, pairs[1].u.plus_ket, pairs[2].d.plus_ket),
        (pairs[0].u.plus_ket, pairs[1].u.plus_ket, pairs[2].u.plus_ket),
    ]
    return np.array([oracle_joint_probability(state, kets) for kets in picks])
