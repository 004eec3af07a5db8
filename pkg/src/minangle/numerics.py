"""Complex-matrix foundation: tolerance policy, SVD, orthonormalization, null spaces.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Every function here
is pure; tolerances are read from a context-local :class:`Tolerance` which can be
overridden with :func:`using_tolerance`.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, replace

import numpy as np

from .errors import FactorizationError, InvalidObjectError, RankDeficiencyError


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds.

    ``eps_rank`` is relative: a singular value counts as zero when it is at most
    ``eps_rank`` times the largest singular value of the same matrix.
    """

    eps_rank: float = 1e-8
    eps_angle: float = 1e-7
    eps_entry: float = 1e-10

    def __post_init__(self):
        for name in ("eps_rank", "eps_angle", "eps_entry"):
            value = getattr(self, name)
            if not (0.0 < value < 1e-3):
                raise ValueError(f"{name} must lie in (0, 1e-3), got {value!r}")


DEFAULT_TOLERANCE = Tolerance()
_current = contextvars.ContextVar("minangle_tolerance", default=DEFAULT_TOLERANCE)


def get_tolerance() -> Tolerance:
    return _current.get()


@contextlib.contextmanager
def using_tolerance(tol: Tolerance | None = None, **overrides):
    """Temporarily replace the active tolerance.

    >>> with using_tolerance(eps_angle=1e-6):
    ...     get_tolerance().eps_angle
    1e-06
    """
    base = tol if tol is not None else get_tolerance()
    token = _current.set(replace(base, **overrides) if overrides else base)
    try:
        yield _current.get()
    finally:
        _current.reset(token)


def as_cmatrix(M) -> np.ndarray:
    """Coerce to a finite 2-D complex128 array (1-D input becomes a column)."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    if A.ndim != 2:
        raise InvalidObjectError(f"expected a matrix, got array of shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidObjectError("matrix has non-finite entries")
    return A


def svd(M, full_matrices: bool = False):
    """Singular value decomposition ``M = U @ diag(S) @ V^H``.

    Returns ``(U, S, V)`` with ``V`` (not ``V^H``), ``S`` real, non-negative and
    sorted in descending order.
    """
    A = as_cmatrix(M)
    if A.size == 0:
        m, n = A.shape
        k = min(m, n)
        return (np.eye(m, m if full_matrices else k, dtype=complex), np.zeros(k),
                np.eye(n, n if full_matrices else k, dtype=complex))
    try:
        U, S, Vh = np.linalg.svd(A, full_matrices=full_matrices)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(f"SVD did not converge: {exc}") from exc
    return U, np.clip(S, 0.0, None), Vh.conj().T


def singular_values(M) -> np.ndarray:
    A = as_cmatrix(M)
    if A.size == 0:
        return np.zeros(0)
    try:
        return np.clip(np.linalg.svd(A, compute_uv=False), 0.0, None)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(f"SVD did not converge: {exc}") from exc


def spectral_norm(M) -> float:
    s = singular_values(M)
    return float(s[0]) if s.size else 0.0


def orthonormalize(M) -> np.ndarray:
    """Orthonormal basis of the column space of a full-column-rank matrix."""
    A = as_cmatrix(M)
    s = singular_values(A)
    if s.size < A.shape[1] or s.size == 0:
        raise RankDeficiencyError(
            f"{A.shape[0]}x{A.shape[1]} matrix cannot have full column rank", 0.0)
    if s[-1] <= get_tolerance().eps_rank * s[0]:
        raise RankDeficiencyError(
            f"matrix is rank deficient: smallest singular value {s[-1]:.3e} "
            f"(largest {s[0]:.3e})", float(s[-1]))
    Q, _ = np.linalg.qr(A)
    return Q


def nullspace(M) -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical null space of ``M``."""
    A = as_cmatrix(M)
    ncols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(ncols, dtype=complex)
    _, S, V = svd(A, full_matrices=True)
    if S.size == 0 or S[0] == 0.0:
        return np.eye(ncols, dtype=complex)
    rank = int(np.count_nonzero(S > get_tolerance().eps_rank * S[0]))
    return V[:, rank:]


def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    return v / np.linalg.norm(v)


def fix_phase(v) -> np.ndarray:
    """Rotate ``v`` so that its first entry of non-negligible modulus is real positive."""
    v = np.asarray(v, dtype=np.complex128)
    flat = v.reshape(-1, order="F")
    mags = np.abs(flat)
    if mags.max() == 0.0:
        return v
    k = int(np.argmax(mags > 1e-6 * mags.max()))
    return v * (np.conj(flat[k]) / mags[k])


def matrix_to_dict(M) -> dict:
    A = as_cmatrix(M)
    return {"rows": A.shape[0], "cols": A.shape[1],
            "re": A.real.tolist(), "im": A.imag.tolist()}


def matrix_from_dict(data: dict) -> np.ndarray:
    rows, cols = int(data["rows"]), int(data["cols"])
    re = np.asarray(data["re"], dtype=float).reshape(rows, cols)
    im = np.asarray(data.get("im", np.zeros((rows, cols))), dtype=float).reshape(rows, cols)
    return as_cmatrix(re + 1j * im)
