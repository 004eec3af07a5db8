"""Subspaces, orthogonal projections and the angles between them.

A :class:`Subspace` (orthonormal basis) is the canonical representation; a
:class:`Projection` is derived from it. Functions that only need a range accept
either type.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    IllConditionedProjectionError,
    InvalidObjectError,
    NormalizationError,
    ToleranceConflictError,
    UndefinedRelationError,
    ZeroProjectionError,
)
from .numerics import (
    as_cmatrix,
    get_tolerance,
    matrix_from_dict,
    matrix_to_dict,
    nullspace,
    orthonormalize,
    singular_values,
    spectral_norm,
    svd,
)

HALF_PI = math.pi / 2


@dataclass(frozen=True, eq=False)
class Subspace:
    """An ``n``-dimensional subspace of ``C^d`` held by a ``d x n`` orthonormal basis."""

    basis: np.ndarray

    def __post_init__(self):
        B = as_cmatrix(self.basis).copy()
        d, n = B.shape
        if not 1 <= n <= d:
            raise InvalidObjectError(f"need 1 <= n <= d, got n={n}, d={d}")
        if np.abs(B.conj().T @ B - np.eye(n)).max() > get_tolerance().eps_entry:
            raise InvalidObjectError("basis columns are not orthonormal")
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)

    @classmethod
    def span(cls, *vectors) -> "Subspace":
        """Subspace spanned by the given (linearly independent) vectors."""
        return cls(orthonormalize(np.column_stack([np.asarray(v, dtype=complex) for v in vectors])))

    @classmethod
    def from_matrix(cls, M) -> "Subspace":
        return cls(orthonormalize(M))

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projection(self) -> "Projection":
        return subspace_to_projection(self)

    def to_dict(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "basis": matrix_to_dict(self.basis)}

    @classmethod
    def from_dict(cls, data: dict) -> "Subspace":
        basis = matrix_from_dict(data["basis"])
        if basis.shape[0] != int(data["ambient_dim"]):
            raise DimensionMismatchError(
                f"ambient_dim {data['ambient_dim']} does not match basis rows {basis.shape[0]}")
        return cls(basis)

    def __repr__(self):
        return f"Subspace(d={self.ambient_dim}, n={self.dim})"


@dataclass(frozen=True, eq=False)
class Projection:
    """A Hermitian idempotent ``d x d`` matrix together with its rank."""

    matrix: np.ndarray
    rank: int

    def __post_init__(self):
        M = as_cmatrix(self.matrix).copy()
        if M.shape[0] != M.shape[1]:
            raise InvalidObjectError(f"projection must be square, got {M.shape}")
        eps = get_tolerance().eps_entry
        if np.abs(M - M.conj().T).max() > eps:
            raise InvalidObjectError("projection is not Hermitian")
        if np.abs(M @ M - M).max() > eps:
            raise InvalidObjectError("projection is not idempotent")
        tr = np.trace(M)
        if abs(tr.imag) > eps or abs(tr.real - self.rank) > max(eps, 1e-9 * M.shape[0]):
            raise InvalidObjectError(f"trace {tr:.6g} does not match rank {self.rank}")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "rank", int(self.rank))

    @property
    def ambient_dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self):
        return f"Projection(d={self.ambient_dim}, rank={self.rank})"


@dataclass(frozen=True, eq=False)
class PrincipalAngles:
    """Ascending principal angles with matching principal-vector frames."""

    angles: np.ndarray
    left_frame: np.ndarray
    right_frame: np.ndarray

    @property
    def min(self) -> float:
        return float(self.angles[0])

    @property
    def max(self) -> float:
        return float(self.angles[-1])

    def __len__(self):
        return len(self.angles)

    def __iter__(self):
        return iter(self.angles)


def subspace_to_projection(S: Subspace) -> Projection:
    B = S.basis
    M = B @ B.conj().T
    return Projection(0.5 * (M + M.conj().T), S.dim)


def projection_to_subspace(P: Projection) -> Subspace:
    U, s, _ = svd(P.matrix)
    eps = get_tolerance().eps_rank
    ambiguous = (s > eps) & (s < 1.0 - eps)
    if np.any(ambiguous):
        raise IllConditionedProjectionError(
            f"singular value {s[ambiguous][0]:.3e} is neither 0 nor 1")
    rank = int(np.count_nonzero(s >= 1.0 - eps))
    if rank != P.rank:
        raise IllConditionedProjectionError(f"numerical rank {rank} differs from declared {P.rank}")
    if rank == 0:
        raise ZeroProjectionError("zero projection has no subspace")
    return Subspace(orthonormalize(U[:, :rank]))


def _basis(X) -> np.ndarray:
    if isinstance(X, Subspace):
        return X.basis
    if isinstance(X, Projection):
        if X.rank == 0:
            raise ZeroProjectionError("zero projection")
        return projection_to_subspace(X).basis
    raise TypeError(f"expected Subspace or Projection, got {type(X).__name__}")


def _matrix(X) -> np.ndarray:
    if isinstance(X, Projection):
        return X.matrix
    if isinstance(X, Subspace):
        return subspace_to_projection(X).matrix
    raise TypeError(f"expected Subspace or Projection, got {type(X).__name__}")


def _same_ambient(A: np.ndarray, B: np.ndarray):
    if A.shape[0] != B.shape[0]:
        raise DimensionMismatchError(f"ambient dimensions differ: {A.shape[0]} vs {B.shape[0]}")


def angle_between_lines(x, y) -> float:
    """Angle ``arccos |<x, y>|`` between two unit vectors, in ``[0, pi/2]``."""
    x = np.asarray(x, dtype=complex).reshape(-1)
    y = np.asarray(y, dtype=complex).reshape(-1)
    if x.shape != y.shape:
        raise DimensionMismatchError(f"vector lengths differ: {x.size} vs {y.size}")
    eps = get_tolerance().eps_entry
    for name, v in (("x", x), ("y", y)):
        if abs(np.linalg.norm(v) - 1.0) > eps:
            raise NormalizationError(f"{name} is not a unit vector (norm {np.linalg.norm(v):.12g})")
    c = abs(np.vdot(x, y))
    if c > math.sqrt(0.5):
        # arcsin of the residual is accurate for nearly parallel vectors
        return float(math.asin(min(1.0, np.linalg.norm(y - np.vdot(x, y) * x))))
    return float(math.acos(min(1.0, c)))


def _angles(A: np.ndarray, B: np.ndarray):
    """Principal angles between ranges of orthonormal ``A`` (d x p) and ``B`` (d x q).

    Returns ``min(p, q)`` ascending angles and the principal frames. Cosines come
    from the SVD of ``A^H B``; angles below pi/4 are taken from the sines, the
    singular values of the smaller basis projected off the larger one.
    """
    M = A.conj().T @ B
    Ua, cos, Vb = svd(M)
    k = cos.size
    X = A @ Ua[:, :k]
    Y = B @ Vb[:, :k]
    cos = np.clip(cos, 0.0, 1.0)
    small, big = (A, B) if A.shape[1] <= B.shape[1] else (B, A)
    residual = small - big @ (big.conj().T @ small)
    sin = np.clip(np.sort(singular_values(residual))[:k], 0.0, 1.0)
    theta = np.where(cos ** 2 >= 0.5, np.arcsin(sin), np.arccos(cos))
    return np.maximum.accumulate(theta), X, Y


def principal_angles(S, T) -> PrincipalAngles:
    """Principal angles between two subspaces of equal dimension."""
    A, B = _basis(S), _basis(T)
    _same_ambient(A, B)
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatchError(f"subspace dimensions differ: {A.shape[1]} vs {B.shape[1]}")
    theta, X, Y = _angles(A, B)
    return PrincipalAngles(theta, X, Y)


def principal_angles_oracle(S, T) -> PrincipalAngles:
    """Principal angles by the recursive definition.

    At each step the best-aligned pair of unit vectors is found from the top
    eigenvector of ``M^H M`` (``M`` the current cross-Gram matrix), its angle is
    measured as ``2 arcsin(|x - y| / 2)``, and both subspaces are shrunk to the
    orthogonal complements of the chosen vectors. Shares no code with
    :func:`principal_angles` beyond the null-space helper.
    """
    A, B = _basis(S), _basis(T)
    _same_ambient(A, B)
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatchError(f"subspace dimensions differ: {A.shape[1]} vs {B.shape[1]}")
    n = A.shape[1]
    angles, xs, ys = [], [], []
    for _ in range(n):
        M = A.conj().T @ B
        _, vecs = np.linalg.eigh(M.conj().T @ M)
        b = vecs[:, -1]
        Mb = M @ b
        norm = np.linalg.norm(Mb)
        if norm > 1e-300:
            a = Mb / norm
        else:
            a = np.zeros(A.shape[1], dtype=complex)
            a[0] = 1.0
        x, y = A @ a, B @ b
        # a^H M b = |M b| >= 0, so x and y are already phase-aligned
        angles.append(2.0 * math.asin(min(1.0, np.linalg.norm(x - y) / 2.0)))
        xs.append(x)
        ys.append(y)
        if A.shape[1] == 1:
            break
        A = A @ nullspace(a.conj()[None, :])
        B = B @ nullspace(b.conj()[None, :])
    theta = np.minimum(np.maximum.accumulate(np.array(angles)), HALF_PI)
    return PrincipalAngles(theta, np.column_stack(xs), np.column_stack(ys))


def min_angle(P, Q) -> float:
    """Minimal angle between the ranges of two nonzero projections (ranks may differ)."""
    A, B = _basis(P), _basis(Q)
    _same_ambient(A, B)
    theta, _, _ = _angles(A, B)
    return float(theta[0])


def gap_distance(P, Q) -> float:
    """Operator-norm distance between the two projections."""
    MP, MQ = _matrix(P), _matrix(Q)
    _same_ambient(MP, MQ)
    return spectral_norm(MP - MQ)


def trace_product(P, Q) -> float:
    MP, MQ = _matrix(P), _matrix(Q)
    _same_ambient(MP, MQ)
    t = np.trace(MP @ MQ)
    if abs(t.imag) > max(get_tolerance().eps_entry, 1e-12 * MP.shape[0]):
        raise ToleranceConflictError(f"tr(PQ) has imaginary part {t.imag:.3e}")
    return float(t.real)


def intersection(S, T) -> Subspace | None:
    """Numerical intersection of two subspaces, or ``None`` when it is trivial.

    Its dimension is the number of principal angles below ``eps_angle``.
    """
    A, B = _basis(S), _basis(T)
    _same_ambient(A, B)
    theta, X, Y = _angles(A, B)
    k = int(np.count_nonzero(theta < get_tolerance().eps_angle))
    if k == 0:
        return None
    return Subspace(orthonormalize(0.5 * (X[:, :k] + Y[:, :k])))


def intersection_dim(S, T) -> int:
    meet = intersection(S, T)
    return 0 if meet is None else meet.dim


def is_ill_conditioned(S, T) -> bool:
    """True if some principal angle sits within a factor 10 of ``eps_angle``."""
    theta, _, _ = _angles(_basis(S), _basis(T))
    eps = get_tolerance().eps_angle
    return bool(np.any((theta > eps / 10) & (theta < 10 * eps)))


def is_orthogonal(P, Q) -> bool:
    """Orthogonality of ranges, decided by the angle and by ``|PQ|``; the two must agree."""
    tol = get_tolerance()
    by_angle = abs(min_angle(P, Q) - HALF_PI) < tol.eps_angle
    by_norm = spectral_norm(_basis(P).conj().T @ _basis(Q)) <= tol.eps_entry
    if by_angle != by_norm:
        raise ToleranceConflictError(
            f"angle test says {by_angle}, norm test says {by_norm}")
    return by_angle


def is_trivial_intersection(P, Q) -> bool:
    return min_angle(P, Q) > get_tolerance().eps_angle


def is_adjacent(S, T) -> bool:
    A, B = _basis(S), _basis(T)
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatchError("adjacency needs subspaces of equal dimension")
    return intersection_dim(S, T) == A.shape[1] - 1


def relative_complement(S, line) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of ``line`` inside ``S``."""
    A = _basis(S)
    v = _basis(line)
    return A @ nullspace(v.conj().T @ A)


def is_one_orthogonal(S, T) -> bool:
    """1-orthogonality: a common line, and the rest of ``S`` orthogonal to the rest of ``T``."""
    A, B = _basis(S), _basis(T)
    _same_ambient(A, B)
    n = A.shape[1]
    if B.shape[1] != n:
        raise DimensionMismatchError("1-orthogonality needs subspaces of equal dimension")
    if n < 2:
        raise UndefinedRelationError("1-orthogonality is defined for n >= 2 only")
    if A.shape[0] < 2 * n - 1:
        return False
    meet = intersection(S, T)
    if meet is None or meet.dim != 1:
        return False
    A1 = relative_complement(S, meet)
    B1 = relative_complement(T, meet)
    if A1.shape[1] != n - 1 or B1.shape[1] != n - 1:
        return False
    return spectral_norm(A1.conj().T @ B1) <= get_tolerance().eps_angle


def direct_sum(P: Projection, Q: Projection) -> Projection:
    """Block-diagonal projection ``P (+) Q`` on ``C^(d1 + d2)``."""
    MP, MQ = P.matrix, Q.matrix
    d1, d2 = MP.shape[0], MQ.shape[0]
    M = np.zeros((d1 + d2, d1 + d2), dtype=complex)
    M[:d1, :d1] = MP
    M[d1:, d1:] = MQ
    return Projection(M, P.rank + Q.rank)


def contains(S, T) -> bool:
    """True if the range of ``T`` lies inside the range of ``S``."""
    A, B = _basis(S), _basis(T)
    _same_ambient(A, B)
    return spectral_norm(B - A @ (A.conj().T @ B)) <= get_tolerance().eps_angle
