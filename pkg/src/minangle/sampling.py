"""Seeded random subspaces, unitaries, isometries and converging sequences.

All randomness goes through ``numpy.random.Generator`` with the PCG64 bit
generator. A trial's stream is ``trial_rng(seed, i)``, built from the seed
sequence ``[seed, i]``, so trials can run in any order or in parallel and still
draw the same numbers.
"""

from __future__ import annotations

import os

import numpy as np

from .grassmann import Projection, Subspace, _basis
from .maps import IsometryMap
from .numerics import orthonormalize, spectral_norm

SEED_ENV_VAR = "MINANGLE_SEED"
DEFAULT_SEED = 0


def default_seed() -> int:
    value = os.environ.get(SEED_ENV_VAR)
    return int(value) if value else DEFAULT_SEED


def make_rng(seed=None) -> np.random.Generator:
    """Accepts an int seed, an existing Generator (returned as is) or None."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        seed = default_seed()
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def trial_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(index)])))


def complex_gaussian(rng, shape) -> np.ndarray:
    rng = make_rng(rng)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_subspace(rng, d: int, n: int) -> Subspace:
    """Haar-distributed ``n``-dimensional subspace of ``C^d``."""
    if not 1 <= n <= d:
        raise ValueError(f"need 1 <= n <= d, got n={n}, d={d}")
    return Subspace(orthonormalize(complex_gaussian(rng, (d, n))))


def random_unit_vector(rng, d: int) -> np.ndarray:
    v = complex_gaussian(rng, d)
    return v / np.linalg.norm(v)


def haar_unitary(rng, d: int) -> np.ndarray:
    Z = complex_gaussian(rng, (d, d))
    Q, R = np.linalg.qr(Z)
    diag = np.diagonal(R)
    return Q * (diag / np.abs(diag))


def _coin(rng, conjugate):
    if conjugate is None:
        return bool(make_rng(rng).integers(2))
    return bool(conjugate)


def random_unitary(rng, d: int, conjugate: bool | None = False) -> IsometryMap:
    """Haar unitary on ``C^d``; ``conjugate=None`` flips a seeded coin for the flag."""
    rng = make_rng(rng)
    return IsometryMap(haar_unitary(rng, d), _coin(rng, conjugate))


def random_isometry(rng, d: int, d_out: int, conjugate: bool | None = False) -> IsometryMap:
    """Random isometry ``C^d -> C^d_out`` (first ``d`` columns of a Haar unitary)."""
    if d > d_out:
        raise ValueError(f"isometry needs d <= d_out, got {d} > {d_out}")
    rng = make_rng(rng)
    return IsometryMap(haar_unitary(rng, d_out)[:, :d], _coin(rng, conjugate))


def converging_sequence(rng, P, k_max: int) -> list[Projection]:
    """Rank-``n`` projections ``R_1, ..., R_k_max`` converging to ``P``.

    ``R_k`` is the range of ``B + 2^-k G_k`` where ``B`` is an orthonormal basis of
    ``P`` and ``G_k`` a Gaussian matrix projected onto the complement of ``P`` and
    scaled to unit spectral norm. Then ``gap(R_k, P) = t / sqrt(1 + t^2)`` with
    ``t = 2^-k``, which decreases strictly and stays below ``2^(1-k)``.
    """
    rng = make_rng(rng)
    B = _basis(P)
    d, n = B.shape
    out = []
    for k in range(1, k_max + 1):
        G = complex_gaussian(rng, (d, n))
        G = G - B @ (B.conj().T @ G)
        norm = spectral_norm(G)
        if norm > 0:
            G = G / norm
        out.append(Subspace(orthonormalize(B + 2.0 ** -k * G)).projection())
    return out
