"""Standard maps, complementation and explicit maps on Grassmannians.

A (conjugate-)linear isometry is stored as a matrix with orthonormal columns
plus a flag; the conjugate-linear version acts as ``x -> U conj(x)`` with
conjugation taken in the standard basis.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg

from .errors import DimensionMismatchError, DomainError, InvalidObjectError, SelectorContractError
from .grassmann import Projection, Subspace, _angles, _basis, direct_sum, min_angle
from .numerics import as_cmatrix, get_tolerance, matrix_from_dict, matrix_to_dict, nullspace, orthonormalize

KINDS = ("standard", "complement_standard", "table", "nonstandard_demo")


@dataclass(frozen=True, eq=False)
class IsometryMap:
    matrix: np.ndarray
    conjugate: bool = False

    def __post_init__(self):
        U = as_cmatrix(self.matrix).copy()
        d_out, d = U.shape
        if d > d_out:
            raise InvalidObjectError(f"isometry cannot map C^{d} into C^{d_out}")
        if np.abs(U.conj().T @ U - np.eye(d)).max() > get_tolerance().eps_entry:
            raise InvalidObjectError("isometry columns are not orthonormal")
        U.setflags(write=False)
        object.__setattr__(self, "matrix", U)
        object.__setattr__(self, "conjugate", bool(self.conjugate))

    @classmethod
    def identity(cls, d: int, conjugate: bool = False) -> "IsometryMap":
        return cls(np.eye(d, dtype=complex), conjugate)

    @property
    def domain_dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def codomain_dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_unitary(self) -> bool:
        return self.domain_dim == self.codomain_dim

    def apply_vectors(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=complex)
        return self.matrix @ (X.conj() if self.conjugate else X)

    def conjugate_projection(self, P) -> np.ndarray:
        """``U P U*`` as a matrix, for either flag."""
        M = P.matrix if isinstance(P, Projection) else np.asarray(P, dtype=complex)
        if self.conjugate:
            M = M.conj()
        return self.matrix @ M @ self.matrix.conj().T

    def to_dict(self) -> dict:
        return {"matrix": matrix_to_dict(self.matrix), "conjugate": self.conjugate}

    @classmethod
    def from_dict(cls, data: dict) -> "IsometryMap":
        return cls(matrix_from_dict(data["matrix"]), bool(data.get("conjugate", False)))


def apply_isometry(U: IsometryMap, S: Subspace) -> Subspace:
    if S.ambient_dim != U.domain_dim:
        raise DimensionMismatchError(
            f"isometry acts on C^{U.domain_dim}, subspace lives in C^{S.ambient_dim}")
    return Subspace(orthonormalize(U.apply_vectors(S.basis)))


def complement(S: Subspace) -> Subspace | None:
    """Orthogonal complement; ``None`` when ``S`` is the whole space."""
    N = nullspace(S.basis.conj().T)
    return Subspace(N) if N.shape[1] else None


def pivot_selector(S: Subspace, r: int = 1) -> Subspace:
    """Rank-``r`` subspace of ``S`` picked by column-pivoted QR of its projection.

    Basis independent, deterministic, and not monotone under inclusion.
    """
    P = S.basis @ S.basis.conj().T
    Q, _, _ = scipy.linalg.qr(P, pivoting=True, mode="economic")
    return Subspace(orthonormalize(Q[:, :r]))


@dataclass(frozen=True, eq=False)
class GrassmannMap:
    """A map from ``n``-dimensional subspaces of ``C^d`` to subspaces.

    ``kind`` selects how :func:`apply_map` evaluates it. Table maps store
    explicit ``(input, output)`` pairs; the non-standard demo stores a selector
    ``rho`` of subspaces of rank ``r``.
    """

    kind: str
    n: int
    d: int
    isometry: IsometryMap | None = None
    pairs: tuple = ()
    selector: Callable[[Subspace], Subspace] | None = None
    r: int | None = None
    degenerate: bool = False
    selector_name: str = field(default="custom")

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown map kind {self.kind!r}")
        if self.kind in ("standard", "complement_standard"):
            if self.isometry is None:
                raise ValueError(f"{self.kind} map needs an isometry")
            if self.isometry.domain_dim != self.d:
                raise DimensionMismatchError("isometry domain does not match d")
        if self.kind == "complement_standard":
            if self.d != 2 * self.n:
                raise ValueError("complement_standard maps need d = 2n")
            if not self.isometry.is_unitary:
                raise ValueError("complement_standard maps need a square isometry")
        object.__setattr__(self, "pairs", tuple(self.pairs))

    @classmethod
    def standard(cls, U: IsometryMap, n: int) -> "GrassmannMap":
        return cls("standard", n, U.domain_dim, isometry=U)

    @classmethod
    def complement_standard(cls, U: IsometryMap, n: int) -> "GrassmannMap":
        return cls("complement_standard", n, U.domain_dim, isometry=U)

    @classmethod
    def table(cls, pairs, n: int, d: int) -> "GrassmannMap":
        return cls("table", n, d, pairs=tuple(pairs))

    @property
    def codomain_dim(self) -> int:
        if self.kind == "nonstandard_demo":
            return 2 * self.d
        if self.kind == "table":
            return self.pairs[0][1].ambient_dim if self.pairs else self.d
        return self.isometry.codomain_dim

    def __call__(self, S: Subspace) -> Subspace:
        return apply_map(self, S)

    def to_dict(self) -> dict:
        data = {"kind": self.kind, "n": self.n, "d": self.d,
                "isometry": self.isometry.to_dict() if self.isometry else None,
                "pairs": [[a.to_dict(), b.to_dict()] for a, b in self.pairs]}
        if self.kind == "nonstandard_demo":
            data["r"] = self.r
            data["selector"] = self.selector_name
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "GrassmannMap":
        kind, n, d = data["kind"], int(data["n"]), int(data["d"])
        if kind == "nonstandard_demo":
            if data.get("selector", "pivot") != "pivot":
                raise ValueError("only the pivot selector can be restored from JSON")
            return construct_nonstandard_demo(n, d, r=int(data.get("r") or 1))
        iso = IsometryMap.from_dict(data["isometry"]) if data.get("isometry") else None
        pairs = tuple((Subspace.from_dict(a), Subspace.from_dict(b)) for a, b in data.get("pairs", []))
        return cls(kind, n, d, isometry=iso, pairs=pairs)


def _table_lookup(phi: GrassmannMap, S: Subspace) -> Subspace:
    eps = get_tolerance().eps_angle
    for key, value in phi.pairs:
        if key.ambient_dim == S.ambient_dim and key.dim == S.dim:
            theta, _, _ = _angles(key.basis, S.basis)
            if theta[-1] < eps:
                return value
    raise DomainError(f"{S!r} is not in the table")


def apply_map(phi: GrassmannMap, S: Subspace) -> Subspace:
    if phi.kind != "table" and (S.ambient_dim != phi.d or S.dim != phi.n):
        raise DimensionMismatchError(
            f"map is defined on {phi.n}-dimensional subspaces of C^{phi.d}, got {S!r}")
    if phi.kind == "standard":
        return apply_isometry(phi.isometry, S)
    if phi.kind == "complement_standard":
        return apply_isometry(phi.isometry, complement(S))
    if phi.kind == "table":
        return _table_lookup(phi, S)
    return _nonstandard_image(phi, S)


def check_selector(rho: Callable, S: Subspace, r: int) -> Subspace:
    """Evaluate ``rho(S)`` and enforce ``0 != rho(S) <= S`` with rank ``r``."""
    R = rho(S)
    if not isinstance(R, Subspace):
        raise SelectorContractError(f"selector returned {type(R).__name__}, not a Subspace")
    if R.ambient_dim != S.ambient_dim or R.dim != r:
        raise SelectorContractError(f"selector returned {R!r}, expected rank {r}")
    leak = np.linalg.norm(R.basis - S.basis @ (S.basis.conj().T @ R.basis), 2)
    if leak > get_tolerance().eps_angle:
        raise SelectorContractError(f"selected subspace leaves S (residual {leak:.3e})")
    return R


def _nonstandard_image(phi: GrassmannMap, S: Subspace) -> Subspace:
    R = check_selector(phi.selector, S, phi.r)
    return Subspace(_basis(direct_sum(S.projection(), R.projection())))


def construct_nonstandard_demo(n: int, d: int, r: int = 1, selector=None) -> GrassmannMap:
    """Map ``S -> S (+) rho(S)`` from ``n``-subspaces of ``C^d`` into ``C^(2d)``.

    Preserves the minimal angle whenever ``rho`` picks a nonzero subspace of its
    argument; with the default pivot selector it is not induced by any isometry.
    ``r == n`` makes ``rho`` the identity and the result is flagged ``degenerate``.
    """
    if not 1 <= r <= n:
        raise SelectorContractError(f"selector rank must satisfy 1 <= r <= n, got r={r}, n={n}")
    degenerate = r == n
    if degenerate:
        warnings.warn("selector rank equals n: rho is the identity, not a valid demo",
                      stacklevel=2)
    if selector is None:
        name = "pivot"
        selector = (lambda S: S) if degenerate else (lambda S: pivot_selector(S, r))
    else:
        name = getattr(selector, "__name__", "custom")
    return GrassmannMap("nonstandard_demo", n, d, selector=selector, r=r,
                        degenerate=degenerate, selector_name=name)


def minimal_angle_defect(phi: GrassmannMap, S: Subspace, T: Subspace) -> float:
    """``|ma(phi(S), phi(T)) - ma(S, T)|``."""
    return abs(min_angle(apply_map(phi, S), apply_map(phi, T)) - min_angle(S, T))
