"""Joint probabilities, the five-term Bell expression, and its LHV bound.

The five joint probabilities are always reported in one canonical order:

    p1 = P(D1=-1, D2=-1, D3=-1)
    p2 = P(D1=+1, U2=+1, U3=+1)
    p3 = P(U1=+1, D2=+1, U3=+1)
    p4 = P(U1=+1, U2=+1, D3=+1)
    p5 = P(U1=+1, U2=+1, U3=+1)

and the Bell expression is B = p1 + p2 + p3 + p4 - p5.  Every local
realistic model obeys B >= 0; this module also contains the exhaustive
64-assignment enumeration that certifies that bound.  The Hardy pattern
(p1 = p2 = p3 = p4 = 0 with p5 > 0) is therefore impossible classically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import NamedTuple

import numpy as np

from .errors import DimensionError
from .observables import DichotomicObservable, MeasurementSettings

#: the five joint-probability terms, as ((kind, sign), ...) per qubit
BELL_TERMS: tuple[tuple[tuple[str, int], ...], ...] = (
    (("D", -1), ("D", -1), ("D", -1)),
    (("D", +1), ("U", +1), ("U", +1)),
    (("U", +1), ("D", +1), ("U", +1)),
    (("U", +1), ("U", +1), ("D", +1)),
    (("U", +1), ("U", +1), ("U", +1)),
)

#: Bell value of the maximally mixed state I/8 (four terms of 1/8 minus 1/8)
WHITE_NOISE_BELL_VALUE = 3.0 / 8.0


def _amp(psi3: np.ndarray, k1: np.ndarray, k2: np.ndarray, k3: np.ndarray) -> complex:
    # <k1 k2 k3 | psi> via two tiny contractions
    return k1.conj() @ ((psi3 @ k3.conj()) @ k2.conj())


def joint_probability(state, picks) -> float:
    """Probability of one outcome triple: Tr[rho (P1 x P2 x P3)].

    ``picks`` is a sequence of three (DichotomicObservable, sign) choices.
    For pure-state input the value is |<k1 k2 k3|psi>|^2.  The raw float is
    returned unclamped; report-level containers clamp to [0, 1].
    """
    kets = []
    for obs, sign in picks:
        if not isinstance(obs, DichotomicObservable):
            raise TypeError("picks must contain DichotomicObservable instances")
        kets.append(obs.eigenket(sign))
    if len(kets) != 3:
        raise ValueError("exactly three outcome picks are required")
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        if arr.shape[0] != 8:
            raise DimensionError("pure state must be an 8-dimensional ket")
        return float(abs(_amp(arr.reshape(2, 2, 2), *kets)) ** 2)
    if arr.ndim == 2:
        if arr.shape != (8, 8):
            raise DimensionError("density operator must be 8x8")
        v = np.kron(np.kron(kets[0], kets[1]), kets[2])
        return float(np.vdot(v, arr @ v).real)
    raise DimensionError("state must be a ket or a density operator")


def hardy_probabilities(state, settings: MeasurementSettings) -> np.ndarray:
    """The five canonical-order joint probabilities, unclamped."""
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1 and arr.shape[0] == 8:
        psi3 = arr.reshape(2, 2, 2)
        (u1, d1), (u2, d2), (u3, d3) = (
            (p.u.plus_ket, p.d.plus_ket) for p in settings.pairs
        )
        d1m = settings.pairs[0].d.minus_ket
        d2m = settings.pairs[1].d.minus_ket
        d3m = settings.pairs[2].d.minus_ket
        a_u3 = psi3 @ u3.conj()
        a_d3 = psi3 @ d3.conj()
        out = np.empty(5, dtype=float)
        out[0] = abs(d1m.conj() @ ((psi3 @ d3m.conj()) @ d2m.conj())) ** 2
        out[1] = abs(d1.conj() @ (a_u3 @ u2.conj())) ** 2
        out[2] = abs(u1.conj() @ (a_u3 @ d2.conj())) ** 2
        out[3] = abs(u1.conj() @ (a_d3 @ u2.conj())) ** 2
        out[4] = abs(u1.conj() @ (a_u3 @ u2.conj())) ** 2
        return out
    return np.array(
        [
            joint_probability(
                arr,
                [
                    (settings.observable(q, kind), sign)
                    for q, (kind, sign) in enumerate(term)
                ],
            )
            for term in BELL_TERMS
        ]
    )


def _clamp01(p: float) -> float:
    return min(max(float(p), 0.0), 1.0)


@dataclass(frozen=True)
class BellReport:
    """Five probabilities (clamped for reporting), B, and the LHV verdict."""

    probabilities: tuple[float, float, float, float, float]
    bell_value: float
    lhv_bound_satisfied: bool
    settings: MeasurementSettings
    state_label: str | None = None


def bell_value(state, settings: MeasurementSettings, state_label: str | None = None) -> BellReport:
    """Evaluate B = p1 + p2 + p3 + p4 - p5 for a state and settings."""
    probs = hardy_probabilities(state, settings)
    value = float(probs[0] + probs[1] + probs[2] + probs[3] - probs[4])
    return BellReport(
        probabilities=tuple(_clamp01(p) for p in probs),
        bell_value=value,
        lhv_bound_satisfied=bool(value >= -1e-12),
        settings=settings,
        state_label=state_label,
    )


def outcome_distribution(state, settings: MeasurementSettings, kinds) -> np.ndarray:
    """All eight outcome probabilities for one measurement context.

    ``kinds`` picks 'U' or 'D' per qubit; entry index encodes the outcome
    signs via bit b=0 -> +1, b=1 -> -1 in qubit order.
    """
    probs = np.empty(8, dtype=float)
    for idx, signs in enumerate(product((+1, -1), repeat=3)):
        picks = [
            (settings.observable(q, kinds[q]), signs[q]) for q in range(3)
        ]
        probs[idx] = joint_probability(state, picks)
    return probs


# ---------------------------------------------------------------------------
# deterministic local-hidden-variable oracle
# ---------------------------------------------------------------------------

class LhvAssignment(NamedTuple):
    """One deterministic +-1 assignment to all six observables."""

    u1: int
    d1: int
    u2: int
    d2: int
    u3: int
    d3: int


def lhv_term_indicators(a: LhvAssignment) -> tuple[int, int, int, int, int]:
    """The five term indicator products (0 or 1 each) under an assignment."""
    values = {"U": (a.u1, a.u2, a.u3), "D": (a.d1, a.d2, a.d3)}
    out = []
    for term in BELL_TERMS:
        ind = 1
        for qubit, (kind, sign) in enumerate(term):
            ind *= 1 if values[kind][qubit] == sign else 0
        out.append(ind)
    return tuple(out)


def lhv_bell_value(a: LhvAssignment) -> int:
    t = lhv_term_indicators(a)
    return t[0] + t[1] + t[2] + t[3] - t[4]


def lhv_assignments() -> tuple[LhvAssignment, ...]:
    return tuple(LhvAssignment(*signs) for signs in product((+1, -1), repeat=6))


def lhv_minimum() -> tuple[int, tuple[LhvAssignment, ...]]:
    """Exhaustive minimum of B over all 64 deterministic assignments.

    This is the brute-force certificate of the local bound B >= 0.
    """
    best = None
    argmins: list[LhvAssignment] = []
    for a in lhv_assignments():
        value = lhv_bell_value(a)
        if best is None or value < best:
            best = value
            argmins = [a]
        elif value == best:
            argmins.append(a)
    return int(best), tuple(argmins)


def lhv_hardy_pattern_assignments() -> tuple[LhvAssignment, ...]:
    """Assignments realizing four zero terms with the fifth positive (none exist)."""
    hits = []
    for a in lhv_assignments():
        t = lhv_term_indicators(a)
        if t[0] == t[1] == t[2] == t[3] == 0 and t[4] == 1:
            hits.append(a)
    return tuple(hits)


# ---------------------------------------------------------------------------
# finite-shot sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SampleStatistics:
    """Empirical five-term frequencies with binomial standard errors."""

    frequencies: tuple[float, float, float, float, float]
    standard_errors: tuple[float, float, float, float, float]
    shots: int
    seed: int


def sample_statistics(state, settings: MeasurementSettings, shots: int, seed: int) -> SampleStatistics:
    """Simulate ``shots`` runs of each measurement context.

    One multinomial draw is made per distinct observable-kind triple (a
    physical measurement context); all terms sharing a context reuse the
    same draw.  Deterministic for a fixed seed.
    """
    if shots < 1:
        raise ValueError("shots must be at least 1")
    rng = np.random.default_rng(seed)
    counts_by_context: dict[tuple[str, str, str], np.ndarray] = {}
    freqs = []
    errs = []
    for term in BELL_TERMS:
        kinds = tuple(kind for kind, _ in term)
        if kinds not in counts_by_context:
            probs = np.clip(outcome_distribution(state, settings, kinds), 0.0, None)
            probs = probs / probs.sum()
            counts_by_context[kinds] = rng.multinomial(shots, probs)
        counts = counts_by_context[kinds]
        target = 0
        for _, sign in term:
            target = (target << 1) | (0 if sign == +1 else 1)
        p_hat = counts[target] / shots
        freqs.append(float(p_hat))
        errs.append(float(math.sqrt(p_hat * (1.0 - p_hat) / shots)))
    return SampleStatistics(
        frequencies=tuple(freqs),
        standard_errors=tuple(errs),
        shots=int(shots),
        seed=int(seed),
    )


def noisy_bell_value(psi, visibility: float, settings: MeasurementSettings) -> float:
    """B for the white-noise mixture of a pure state at the given visibility."""
    from .states import mix_with_white_noise

    rho = mix_with_white_noise(psi, visibility)
    return bell_value(rho, settings).bell_value
