"""Dense complex linear algebra for one, two and three qubits.

Kets are plain 1-d complex numpy arrays of length 2, 4 or 8; operators are
square complex matrices of the same sizes.  Basis ordering for multi-qubit
kets is |abc> <-> index 4a + 2b + c.  All functions are pure and never
mutate their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NormalizationError, SpanError

#: default absolute tolerance for numerical comparisons
ATOL = 1e-10
#: absolute tolerance for norm checks on state-role kets
NORM_ATOL = 1e-12

_ALLOWED_DIMS = (2, 4, 8)
_ZERO = 1e-150


def ket(values) -> np.ndarray:
    """Coerce to a finite complex ket of dimension 2, 4 or 8."""
    arr = np.array(values, dtype=complex)
    if arr.ndim != 1 or arr.shape[0] not in _ALLOWED_DIMS:
        raise DimensionError(
            f"ket must be 1-d of length 2, 4 or 8, got shape {arr.shape}"
        )
    if not (np.isfinite(arr.real).all() and np.isfinite(arr.imag).all()):
        raise ValueError("ket contains non-finite entries")
    return arr


def operator(values) -> np.ndarray:
    """Coerce to a finite square complex matrix of dimension 2, 4 or 8."""
    arr = np.array(values, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] not in _ALLOWED_DIMS:
        raise DimensionError(
            f"operator must be square of size 2, 4 or 8, got shape {arr.shape}"
        )
    if not (np.isfinite(arr.real).all() and np.isfinite(arr.imag).all()):
        raise ValueError("operator contains non-finite entries")
    return arr


def norm(k) -> float:
    return float(np.linalg.norm(k))


def normalize(k) -> np.ndarray:
    """Return k / ||k||; rejects (near-)zero vectors."""
    arr = np.asarray(k, dtype=complex)
    n = np.linalg.norm(arr)
    if n < _ZERO:
        raise NormalizationError("cannot normalize a zero vector")
    return arr / n


def is_normalized(k, atol: float = NORM_ATOL) -> bool:
    return abs(np.linalg.norm(k) - 1.0) <= atol


def require_normalized(k, atol: float = 1e-9) -> np.ndarray:
    arr = np.asarray(k, dtype=complex)
    dev = abs(np.linalg.norm(arr) - 1.0)
    if dev > atol:
        raise NormalizationError(f"ket norm deviates from 1 by {dev:.3e}")
    return arr


def fix_global_phase(k, tiny: float = 1e-12) -> np.ndarray:
    """Rotate the global phase so the first non-negligible amplitude is real >= 0."""
    arr = np.asarray(k, dtype=complex)
    for amp in arr:
        if abs(amp) > tiny:
            return arr * np.conj(amp / abs(amp))
    return arr.copy()


def inner(a, b) -> complex:
    """Hermitian inner product <a|b> (conjugate-linear in the first slot)."""
    return complex(np.vdot(a, b))


def tensor(*factors) -> np.ndarray:
    """Kronecker product of kets (or of operators), qubit 1 leftmost.

    The result dimension is capped at 8 (8x8 for operators): this package
    never needs anything larger.
    """
    if not factors:
        raise DimensionError("tensor requires at least one factor")
    arrays = [np.asarray(f, dtype=complex) for f in factors]
    ndim = arrays[0].ndim
    if ndim not in (1, 2) or any(a.ndim != ndim for a in arrays):
        raise DimensionError("tensor factors must be all kets or all operators")
    out = arrays[0]
    for a in arrays[1:]:
        out = np.kron(out, a)
        if out.shape[0] > 8:
            raise DimensionError("tensor result exceeds dimension 8")
    return out


def projector(k) -> np.ndarray:
    """Rank-one projector |k><k| for a normalized ket."""
    arr = ket(k)
    require_normalized(arr, atol=1e-9)
    return np.outer(arr, arr.conj())


def basis_ket(dim: int, index: int) -> np.ndarray:
    if dim not in _ALLOWED_DIMS:
        raise DimensionError(f"dimension must be 2, 4 or 8, got {dim}")
    if not 0 <= index < dim:
        raise DimensionError(f"basis index {index} out of range for dim {dim}")
    out = np.zeros(dim, dtype=complex)
    out[index] = 1.0
    return out


def qubit_ket(c0, c1) -> np.ndarray:
    """Normalized single-qubit ket c0|0> + c1|1>."""
    return normalize(np.array([c0, c1], dtype=complex))


def perp_qubit(k) -> np.ndarray:
    """The unique (up to phase) single-qubit ket orthogonal to k."""
    arr = np.asarray(k, dtype=complex)
    if arr.shape != (2,):
        raise DimensionError("perp_qubit expects a single-qubit ket")
    return np.array([-np.conj(arr[1]), np.conj(arr[0])], dtype=complex)


KET0 = basis_ket(2, 0)
KET1 = basis_ket(2, 1)
KET0.setflags(write=False)
KET1.setflags(write=False)


def is_hermitian(m, atol: float = ATOL) -> bool:
    arr = np.asarray(m, dtype=complex)
    return bool(np.max(np.abs(arr - arr.conj().T)) <= atol)


def is_projector(m, atol: float = ATOL) -> bool:
    arr = np.asarray(m, dtype=complex)
    return is_hermitian(arr, atol) and bool(np.max(np.abs(arr @ arr - arr)) <= atol)


def is_density(m, atol: float = ATOL) -> bool:
    arr = np.asarray(m, dtype=complex)
    if not is_hermitian(arr, atol):
        return False
    if abs(np.trace(arr).real - 1.0) > atol:
        return False
    return bool(np.linalg.eigvalsh(arr).min() >= -1e-10)


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Biorthogonal form a|u0>|v0> + b|u1>|v1> of a two-qubit pure state.

    ``coefficients`` is (a, b) with a >= b >= 0 and a^2 + b^2 = 1 for a
    normalized input; ``basis_a``/``basis_b`` are orthonormal local bases.
    """

    coefficients: tuple[float, float]
    basis_a: tuple[np.ndarray, np.ndarray]
    basis_b: tuple[np.ndarray, np.ndarray]

    def __post_init__(self):
        for pair in (self.basis_a, self.basis_b):
            for v in pair:
                v.setflags(write=False)

    def reconstruct(self) -> np.ndarray:
        a, b = self.coefficients
        return a * np.kron(self.basis_a[0], self.basis_b[0]) + b * np.kron(
            self.basis_a[1], self.basis_b[1]
        )


def schmidt_decompose(state) -> SchmidtDecomposition:
    """Schmidt decomposition of a normalized two-qubit ket.

    Uses the closed-form 2x2 singular value decomposition: eigenvectors of
    M^dag M for the coefficient matrix M[a][b] = amplitude of |ab>, with the
    smaller singular value recovered from |det M| to avoid cancellation, and
    left vectors phase-locked to the data so the reconstruction is exact to
    machine precision even for degenerate or product inputs.
    """
    arr = ket(state)
    if arr.shape[0] != 4:
        raise DimensionError("schmidt_decompose expects a two-qubit ket")
    require_normalized(arr, atol=1e-9)

    m = arr.reshape(2, 2)
    h = m.conj().T @ m
    trace = h[0, 0].real + h[1, 1].real
    off = h[0, 1]
    diff = h[0, 0].real - h[1, 1].real
    disc = np.sqrt(max(diff * diff + 4.0 * abs(off) ** 2, 0.0))
    mu0 = 0.5 * (trace + disc)
    s0 = float(np.sqrt(mu0))
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    s1 = float(abs(det) / s0) if s0 > _ZERO else 0.0

    # dominant right singular vector: pick the better-conditioned of the two
    # proportional eigenvector formulas for the 2x2 Hermitian h
    cand1 = np.array([off, mu0 - h[0, 0].real], dtype=complex)
    cand2 = np.array([mu0 - h[1, 1].real, np.conj(off)], dtype=complex)
    n1, n2 = np.linalg.norm(cand1), np.linalg.norm(cand2)
    if max(n1, n2) < 1e-14 * max(trace, 1.0):
        v0 = np.array([1.0, 0.0], dtype=complex)  # h is (close to) a scalar matrix
    else:
        v0 = cand1 / n1 if n1 >= n2 else cand2 / n2
    lead = 0 if abs(v0[0]) >= abs(v0[1]) else 1
    v0 = v0 * np.conj(v0[lead] / abs(v0[lead]))
    v1 = perp_qubit(v0)

    mv0 = m @ v0
    n0 = np.linalg.norm(mv0)
    u0 = mv0 / n0 if n0 > _ZERO else np.array([1.0, 0.0], dtype=complex)
    u1 = perp_qubit(u0)
    phase = np.vdot(u1, m @ v1)  # second left vector's phase, read off the data
    if abs(phase) > _ZERO:
        u1 = u1 * (phase / abs(phase))

    return SchmidtDecomposition(
        coefficients=(s0, s1),
        basis_a=(u0, u1),
        basis_b=(np.conj(v0), np.conj(v1)),
    )


def orthogonal_complement_pick(zeros, target, atol: float = ATOL) -> np.ndarray:
    """Normalized ket orthogonal to every member of ``zeros``, overlapping ``target``.

    Deterministic tie-break: project ``target`` onto the orthogonal
    complement of span(zeros) and normalize, then fix the global phase.
    Rank of the zero set is checked through the Gram matrix.
    """
    stack = np.vstack([ket(z) for z in zeros])
    tgt = ket(target)
    if stack.shape[1] != tgt.shape[0]:
        raise DimensionError("zeros and target must share a dimension")
    if stack.shape[0] >= tgt.shape[0]:
        raise SpanError("too many zero conditions for the space dimension")

    gram = stack @ stack.conj().T
    eigs = np.linalg.eigvalsh(gram)
    if eigs[0] < 1e-10 * max(eigs[-1], 1.0):
        raise SpanError("zero-condition vectors are linearly dependent")

    q, _ = np.linalg.qr(stack.T.copy())  # columns span the zero set
    residual = tgt - q @ (q.conj().T @ tgt)
    res_norm = np.linalg.norm(residual)
    if res_norm < atol:
        raise SpanError("target lies in the span of the zero conditions")
    return fix_global_phase(residual / res_norm)
