"""Minimizing the Bell expression over settings and threshold visibility.

The Bell value of the white-noise mixture v|psi><psi| + (1-v)/8 I is affine
in v with noise endpoint 3/8, so once the most negative value B_min of a
state is known, the smallest visibility at which the inequality is still
violated is

    v_thr = (3/8) / (3/8 - B_min).

The minimization itself is a seeded multistart simplex descent over the
twelve Bloch angles of the six plus-kets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterator

import numpy as np
from scipy.optimize import minimize

from . import linalg
from .bell import WHITE_NOISE_BELL_VALUE, bell_value, noisy_bell_value
from .errors import Hardy3QError, VisibilityUndefinedError
from .hardy import build_witness
from .observables import (
    MeasurementSettings,
    kets_from_angles,
    random_angles,
    settings_from_angles,
)
from .states import CanonicalState, classify

#: objective penalty added per observable pair outside the window
WINDOW_PENALTY = 10.0


@dataclass(frozen=True)
class OptimizationResult:
    """Best Bell value found, the settings achieving it, and the threshold."""

    best_value: float
    best_settings: MeasurementSettings
    threshold_visibility: float | None
    starts: int
    converged: bool
    seed: int
    best_angles: tuple[float, ...]

    @property
    def violation_found(self) -> bool:
        return self.best_value < -1e-12


def _bell_objective(x: np.ndarray, psi3: np.ndarray, window_tol: float = 1e-9) -> float:
    kets = kets_from_angles(x)
    penalty = 0.0
    for j in range(3):
        overlap = abs(np.vdot(kets[2 * j], kets[2 * j + 1]))
        if not window_tol < overlap < 1.0 - window_tol:
            penalty += WINDOW_PENALTY
    u1, d1, u2, d2, u3, d3 = kets
    d1m = np.array([-np.conj(d1[1]), np.conj(d1[0])])
    d2m = np.array([-np.conj(d2[1]), np.conj(d2[0])])
    d3m = np.array([-np.conj(d3[1]), np.conj(d3[0])])
    a_u3 = psi3 @ u3.conj()
    a_d3 = psi3 @ d3.conj()
    value = (
        abs(d1m.conj() @ ((psi3 @ d3m.conj()) @ d2m.conj())) ** 2
        + abs(d1.conj() @ (a_u3 @ u2.conj())) ** 2
        + abs(u1.conj() @ (a_u3 @ d2.conj())) ** 2
        + abs(u1.conj() @ (a_d3 @ u2.conj())) ** 2
        - abs(u1.conj() @ (a_u3 @ u2.conj())) ** 2
    )
    return float(value + penalty)


def minimize_bell(
    psi,
    starts: int = 64,
    seed: int = 0,
    tol: float = 1e-10,
    maxiter: int = 4000,
) -> OptimizationResult:
    """Multistart derivative-free minimization of B over all settings.

    Each seeded start runs an adaptive Nelder-Mead descent followed by
    restarts at the incumbent until the improvement drops below ``tol``.
    Results reduce in start order (strict improvement wins), so the outcome
    is deterministic for fixed (starts, seed).  Candidate settings outside
    the non-commutation window are penalized, not rejected, which keeps the
    search space connected; the optimum is interior so the returned
    settings always validate.
    """
    if starts < 1:
        raise ValueError("starts must be at least 1")
    vec = linalg.ket(psi)
    if vec.shape[0] != 8:
        raise Hardy3QError("optimization expects a three-qubit ket")
    linalg.require_normalized(vec, atol=1e-9)
    psi3 = vec.reshape(2, 2, 2)

    best_value = math.inf
    best_x: np.ndarray | None = None
    best_success = False
    options = {"maxiter": maxiter, "fatol": tol, "xatol": 1e-9, "adaptive": True}
    for child in np.random.SeedSequence(seed).spawn(int(starts)):
        rng = np.random.default_rng(child)
        res = minimize(
            _bell_objective,
            random_angles(rng),
            args=(psi3,),
            method="Nelder-Mead",
            options=options,
        )
        for _ in range(3):  # restart the simplex at the incumbent
            res2 = minimize(
                _bell_objective,
                res.x,
                args=(psi3,),
                method="Nelder-Mead",
                options=options,
            )
            improved = res.fun - res2.fun
            res = res2 if res2.fun < res.fun else res
            if improved <= tol:
                break
        if res.fun < best_value:
            best_value = float(res.fun)
            best_x = res.x
            best_success = bool(res.success)

    assert best_x is not None
    settings = settings_from_angles(best_x)
    threshold = (
        threshold_visibility(best_value) if best_value < -1e-12 else None
    )
    return OptimizationResult(
        best_value=best_value,
        best_settings=settings,
        threshold_visibility=threshold,
        starts=int(starts),
        converged=best_success,
        seed=int(seed),
        best_angles=tuple(float(v) for v in best_x),
    )


def threshold_visibility(best_value: float) -> float:
    """Smallest visibility v at which the noisy state still violates.

    Solves v*B + (1-v)*(3/8) = 0 for a violating B < 0; the affinity of B
    in v is a property of the white-noise mixture and is covered by tests.
    """
    if best_value >= 0.0:
        raise VisibilityUndefinedError(
            f"threshold visibility needs a violation (B < 0), got B = {best_value!r}"
        )
    return WHITE_NOISE_BELL_VALUE / (WHITE_NOISE_BELL_VALUE - best_value)


def threshold_visibility_bisection(
    psi,
    settings: MeasurementSettings,
    tol: float = 1e-12,
    max_steps: int = 200,
) -> float:
    """Cross-check: bisect the sign change of B(v) at fixed settings."""
    pure = bell_value(np.asarray(psi, dtype=complex), settings).bell_value
    if pure >= 0.0:
        raise VisibilityUndefinedError(
            f"settings do not violate at v = 1 (B = {pure!r})"
        )
    lo, hi = 0.0, 1.0  # B(lo) = 3/8 > 0 > B(hi)
    for _ in range(max_steps):
        mid = 0.5 * (lo + hi)
        if noisy_bell_value(psi, mid, settings) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# parameterized family scans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridAxis:
    """Inclusive linear grid over one family parameter."""

    name: str
    start: float
    stop: float
    steps: int

    def values(self) -> np.ndarray:
        if self.steps < 1:
            raise ValueError("steps must be at least 1")
        if self.steps == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.steps)


def grid_points(axes: list[GridAxis]) -> Iterator[dict[str, float]]:
    if not axes:
        raise ValueError("at least one grid axis is required")
    for combo in product(*(axis.values() for axis in axes)):
        yield {axis.name: float(v) for axis, v in zip(axes, combo)}


def _ghz_family(t: float) -> CanonicalState:
    return CanonicalState((math.cos(t), 0.0, 0.0, 0.0, math.sin(t)), 0.0)


def _w_family(t: float) -> CanonicalState:
    s = math.sin(t) / math.sqrt(2.0)
    return CanonicalState((math.cos(t), 0.0, s, s, 0.0), 0.0)


def _pair13_family(t: float) -> CanonicalState:
    return CanonicalState((math.cos(t), 0.0, math.sin(t), 0.0, 0.0), 0.0)


def _pair12_family(t: float) -> CanonicalState:
    return CanonicalState((math.cos(t), 0.0, 0.0, math.sin(t), 0.0), 0.0)


#: named one-parameter state families usable from the command line
FAMILIES: dict[str, Callable[..., CanonicalState]] = {
    "ghz": _ghz_family,
    "w": _w_family,
    "pair13": _pair13_family,
    "pair12": _pair12_family,
}


def scan_family(
    family: Callable[..., CanonicalState],
    axes: list[GridAxis],
    *,
    optimize: bool = False,
    starts: int = 16,
    seed: int = 0,
    zero_tol: float = 1e-9,
) -> Iterator[dict]:
    """Classify and witness each grid point; optionally optimize B as well.

    Yields one plain-dict record per point.  Construction failures are
    reported in the record's ``error`` field without aborting the scan.
    """
    for point in grid_points(axes):
        record: dict = {"parameters": point}
        try:
            state = family(**point)
            cls = classify(state)
            record["class"] = cls.value
            if cls.major == "A":
                record["witness"] = None
                record["note"] = "fully product state; no witness"
            else:
                built = build_witness(state, cls, zero_tol=zero_tol, seed=seed)
                report = bell_value(state.to_ket(), built.settings)
                record["witness"] = {
                    "satisfied": built.certificate.satisfied,
                    "success_probability": built.certificate.success_probability,
                    "bell_value": report.bell_value,
                    "used_fallback": built.used_fallback,
                }
            if optimize:
                res = minimize_bell(state.to_ket(), starts=starts, seed=seed)
                record["optimized"] = {
                    "best_value": res.best_value,
                    "threshold_visibility": res.threshold_visibility,
                }
        except (Hardy3QError, ValueError) as exc:
            record["error"] = str(exc)
        yield record
