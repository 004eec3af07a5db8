import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import e, span
from minangle.errors import (
    DimensionMismatchError,
    IllConditionedProjectionError,
    NormalizationError,
    ToleranceConflictError,
    UndefinedRelationError,
    ZeroProjectionError,
)
from minangle.grassmann import (
    Projection,
    Subspace,
    angle_between_lines,
    contains,
    direct_sum,
    gap_distance,
    intersection,
    intersection_dim,
    is_adjacent,
    is_ill_conditioned,
    is_one_orthogonal,
    is_orthogonal,
    is_trivial_intersection,
    min_angle,
    principal_angles,
    principal_angles_oracle,
    projection_to_subspace,
    subspace_to_projection,
    trace_product,
)
from minangle.maps import complement
from minangle.sampling import haar_unitary, random_subspace, trial_rng
from minangle.suites import overlapping_pair

S2 = 1 / math.sqrt(2)
seeds = st.integers(0, 2**32 - 1)


def max_angle(S, T):
    return principal_angles(S, T).max


class TestProjections:
    def test_subspace_to_projection_examples(self):
        np.testing.assert_allclose(subspace_to_projection(span(e(2, 1))).matrix, np.diag([1, 0]))
        P = subspace_to_projection(span(e(2, 1, 2)))
        np.testing.assert_allclose(P.matrix, [[0.5, 0.5], [0.5, 0.5]], atol=1e-15)
        assert P.rank == 1

    def test_random_projection_residuals(self):
        P = subspace_to_projection(random_subspace(3, 6, 3)).matrix
        assert np.abs(P - P.conj().T).max() <= 1e-12
        assert np.abs(P @ P - P).max() <= 1e-12

    def test_projection_to_subspace(self):
        S = projection_to_subspace(Projection(np.diag([1.0, 0, 0]), 1))
        assert S.dim == 1 and abs(abs(S.basis[0, 0]) - 1) < 1e-15

    def test_roundtrip(self):
        S = random_subspace(4, 5, 2)
        assert max_angle(S, projection_to_subspace(subspace_to_projection(S))) < 1e-10

    def test_perturbed_projection(self, rng):
        S = random_subspace(5, 6, 3)
        E = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        E = E + E.conj().T
        E *= 1e-12 / np.linalg.norm(E, 2)
        P = Projection(subspace_to_projection(S).matrix + E, 3)
        assert max_angle(S, projection_to_subspace(P)) < 1e-10

    def test_ill_conditioned(self):
        M = np.diag([1.0, 0.5])
        with pytest.raises(Exception):
            Projection(M, 1)
        # bypass validation to reach the rank decision
        P = object.__new__(Projection)
        object.__setattr__(P, "matrix", M)
        object.__setattr__(P, "rank", 1)
        with pytest.raises(IllConditionedProjectionError):
            projection_to_subspace(P)

    def test_zero_projection(self):
        with pytest.raises(ZeroProjectionError):
            min_angle(Projection(np.zeros((2, 2)), 0), span(e(2, 1)))


class TestAngles:
    def test_angle_between_lines(self):
        assert angle_between_lines(e(2, 1), e(2, 1)) == 0
        assert angle_between_lines(e(2, 1), e(2, 2)) == pytest.approx(math.pi / 2, abs=1e-15)
        assert angle_between_lines(e(2, 1), e(2, 1, 2) * S2) == pytest.approx(math.pi / 4, abs=1e-15)
        with pytest.raises(NormalizationError):
            angle_between_lines(e(2, 1, 2), e(2, 1))

    @pytest.mark.parametrize("func", [principal_angles, principal_angles_oracle])
    def test_examples(self, func):
        A = span(e(4, 1), e(4, 2))
        np.testing.assert_allclose(func(A, A).angles, [0, 0], atol=1e-15)
        np.testing.assert_allclose(func(A, span(e(4, 3), e(4, 4))).angles, [math.pi / 2] * 2, atol=1e-15)
        B = span(e(3, 1), e(3, 2))
        C = span(e(3, 1), e(3, 2, 3) * S2)
        np.testing.assert_allclose(func(B, C).angles, [0, math.pi / 4], atol=1e-15)

    def test_frames(self):
        S, T = random_subspace(1, 6, 3), random_subspace(2, 6, 3)
        pa = principal_angles(S, T)
        assert np.all(np.diff(pa.angles) >= 0)
        assert pa.min >= 0 and pa.max <= math.pi / 2
        for X in (pa.left_frame, pa.right_frame):
            np.testing.assert_allclose(X.conj().T @ X, np.eye(3), atol=1e-12)
        overlaps = np.abs(np.sum(pa.left_frame.conj() * pa.right_frame, axis=0))
        np.testing.assert_allclose(overlaps, np.cos(pa.angles), atol=1e-7)

    def test_cross_validation_random(self):
        S, T = random_subspace(11, 6, 3), random_subspace(12, 6, 3)
        err = np.abs(principal_angles(S, T).angles - principal_angles_oracle(S, T).angles).max()
        assert err <= 1e-8

    def test_self_angles_zero(self):
        S = random_subspace(5, 4, 2)
        np.testing.assert_allclose(principal_angles_oracle(S, S).angles, 0, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            principal_angles(span(e(3, 1)), span(e(3, 1), e(3, 2)))
        with pytest.raises(DimensionMismatchError):
            principal_angles(span(e(3, 1)), span(e(2, 1)))

    @settings(max_examples=60, deadline=None)
    @given(seed=seeds, d=st.integers(1, 8), n=st.integers(1, 3))
    def test_svd_and_oracle_agree(self, seed, d, n):
        n = min(n, d)
        rng = trial_rng(seed, 0)
        if seed % 2:
            S, T = random_subspace(rng, d, n), random_subspace(rng, d, n)
        else:
            S, T = overlapping_pair(rng, d, n)
        np.testing.assert_allclose(principal_angles(S, T).angles,
                                   principal_angles_oracle(S, T).angles, atol=1e-8)

    @settings(max_examples=40, deadline=None)
    @given(seed=seeds)
    def test_basis_invariance(self, seed):
        rng = trial_rng(seed, 1)
        S, T = random_subspace(rng, 7, 3), random_subspace(rng, 7, 3)
        S2_ = Subspace(S.basis @ haar_unitary(rng, 3))
        np.testing.assert_allclose(principal_angles(S, T).angles,
                                   principal_angles(S2_, T).angles, atol=1e-10)

    @settings(max_examples=40, deadline=None)
    @given(seed=seeds)
    def test_unitary_invariance(self, seed):
        rng = trial_rng(seed, 2)
        S, T = random_subspace(rng, 6, 2), random_subspace(rng, 6, 2)
        U = haar_unitary(rng, 6)
        np.testing.assert_allclose(principal_angles(S, T).angles,
                                   principal_angles(Subspace(U @ S.basis), Subspace(U @ T.basis)).angles,
                                   atol=1e-8)


def grid_min_angle(x, q1, q2, steps=1571):
    """Brute-force min over unit y = cos(a) q1 + e^{i phi} sin(a) q2 of arccos|<x, y>|."""
    a = np.linspace(0, math.pi / 2, steps)[:, None]
    phi = np.linspace(0, 2 * math.pi, 64)[None, :]
    inner = np.cos(a) * np.vdot(x, q1) + np.exp(1j * phi) * np.sin(a) * np.vdot(x, q2)
    return float(np.arccos(np.clip(np.abs(inner).max(), 0, 1)))


class TestMinAngle:
    def test_examples(self):
        A = span(e(4, 1), e(4, 2))
        assert min_angle(A.projection(), A.projection()) == pytest.approx(0, abs=1e-15)
        assert min_angle(A, span(e(4, 3), e(4, 4))) == pytest.approx(math.pi / 2, abs=1e-15)

    def test_unequal_ranks_against_grid(self):
        x, q1, q2 = e(3, 1), e(3, 1, 2) * S2, e(3, 3)
        expected = grid_min_angle(x, q1, q2)
        assert expected == pytest.approx(math.pi / 4, abs=1e-3)
        assert min_angle(span(x), span(q1, q2)) == pytest.approx(expected, abs=1e-3)
        assert min_angle(span(x), span(q1, q2)) == pytest.approx(math.pi / 4, abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(seed=seeds)
    def test_monotone_under_inclusion(self, seed):
        rng = trial_rng(seed, 3)
        S1, S2_ = random_subspace(rng, 6, 3), random_subspace(rng, 6, 2)
        R1 = Subspace(S1.basis @ haar_unitary(rng, 3)[:, :2])
        R2 = Subspace(S2_.basis @ haar_unitary(rng, 2)[:, :1])
        assert min_angle(R1, R2) >= min_angle(S1, S2_) - 1e-7

    @settings(max_examples=40, deadline=None)
    @given(seed=seeds, n=st.integers(1, 3))
    def test_complement_symmetry(self, seed, n):
        rng = trial_rng(seed, 4)
        S, T = random_subspace(rng, 2 * n, n), random_subspace(rng, 2 * n, n)
        assert min_angle(complement(S), complement(T)) == pytest.approx(min_angle(S, T), abs=1e-7)


class TestDistances:
    def test_gap_examples(self):
        A = span(e(2, 1))
        assert gap_distance(A, A) == pytest.approx(0, abs=1e-15)
        assert gap_distance(span(e(4, 1), e(4, 2)), span(e(4, 3), e(4, 4))) == pytest.approx(1)
        B = span(e(2, 1, 2) * S2)
        g = gap_distance(A, B)
        assert g == pytest.approx(S2, abs=1e-14)
        assert g == pytest.approx(math.sqrt(1 - trace_product(A, B)), abs=1e-14)

    def test_trace_examples(self):
        A = span(e(3, 1), e(3, 2))
        assert trace_product(A, A) == pytest.approx(2)
        assert trace_product(A, span(e(3, 3))) == pytest.approx(0, abs=1e-15)
        assert trace_product(span(e(2, 1)), span(e(2, 1, 2) * S2)) == pytest.approx(0.5)

    @settings(max_examples=40, deadline=None)
    @given(seed=seeds, n=st.integers(1, 3))
    def test_gap_and_trace_laws(self, seed, n):
        rng = trial_rng(seed, 5)
        S, T = random_subspace(rng, 7, n), random_subspace(rng, 7, n)
        theta = principal_angles(S, T).angles
        assert gap_distance(S, T) == pytest.approx(math.sin(theta[-1]), abs=1e-8)
        assert trace_product(S, T) == pytest.approx(np.sum(np.cos(theta) ** 2), abs=1e-8)


class TestRelations:
    def test_intersection(self):
        meet = intersection(span(e(3, 1), e(3, 2)), span(e(3, 2), e(3, 3)))
        assert meet.dim == 1 and abs(abs(meet.basis[1, 0]) - 1) < 1e-12
        assert intersection(span(e(2, 1)), span(e(2, 2))) is None

    @pytest.mark.parametrize("seed", range(10))
    def test_planes_in_c3_always_meet(self, seed):
        rng = trial_rng(seed, 6)
        S, T = random_subspace(rng, 3, 2), random_subspace(rng, 3, 2)
        meet = intersection(S, T)
        assert meet is not None and meet.dim >= 1
        assert contains(S, meet) and contains(T, meet)

    def test_orthogonality(self):
        assert is_orthogonal(Projection(np.diag([1.0, 0]), 1), Projection(np.diag([0.0, 1]), 1))
        A = span(e(2, 1))
        assert not is_orthogonal(A, A) and not is_trivial_intersection(A, A)
        B = span(e(2, 1, 2) * S2)
        assert not is_orthogonal(A, B) and is_trivial_intersection(A, B)

    def test_orthogonality_routes_conflict(self):
        # |PQ| = 1e-9: within eps_angle of pi/2 but above eps_entry
        A, B = span(e(2, 1)), span(e(2, 2) + 1e-9 * e(2, 1))
        with pytest.raises(ToleranceConflictError):
            is_orthogonal(A, B)

    def test_adjacency(self):
        assert is_adjacent(span(e(3, 1), e(3, 2)), span(e(3, 1), e(3, 3)))
        A = span(e(4, 1), e(4, 2))
        assert not is_adjacent(A, A)
        assert not is_adjacent(A, span(e(4, 3), e(4, 4)))

    def test_one_orthogonality(self):
        for n in (2, 3, 4):
            d = 2 * n - 1
            U = span(*[e(d, k) for k in range(1, n + 1)])
            V = span(*[e(d, k) for k in range(n, 2 * n)])
            assert is_one_orthogonal(U, V)
            assert not is_one_orthogonal(U, U)
        assert not is_one_orthogonal(span(e(3, 1), e(3, 2)), span(e(3, 1), e(3, 2, 3) * S2))
        with pytest.raises(UndefinedRelationError):
            is_one_orthogonal(span(e(2, 1)), span(e(2, 2)))

    def test_ill_conditioned_flag(self):
        A, B = span(e(2, 1)), span(e(2, 1) + 5e-7 * e(2, 2))
        assert is_ill_conditioned(A, B)
        assert not is_ill_conditioned(A, span(e(2, 2)))


class TestDirectSum:
    def test_examples(self):
        P = direct_sum(Projection(np.eye(1), 1), Projection(np.diag([0.0, 1.0]), 1))
        np.testing.assert_allclose(P.matrix, np.diag([1, 0, 1]))
        assert direct_sum(span(e(2, 1)).projection(),
                          span(e(3, 1), e(3, 2)).projection()).rank == 3

    @settings(max_examples=60, deadline=None)
    @given(seed=seeds)
    def test_block_law(self, seed):
        rng = trial_rng(seed, 7)
        p1, q1, p2, q2 = (int(k) for k in rng.integers(1, 4, size=4))
        P1, Q1 = random_subspace(rng, 3, p1), random_subspace(rng, 3, q1)
        P2, Q2 = random_subspace(rng, 3, p2), random_subspace(rng, 3, q2)
        lhs = min_angle(direct_sum(P1.projection(), P2.projection()),
                        direct_sum(Q1.projection(), Q2.projection()))
        assert lhs == pytest.approx(min(min_angle(P1, Q1), min_angle(P2, Q2)), abs=1e-7)


def test_subspace_json_roundtrip():
    S = random_subspace(9, 4, 2)
    data = S.to_dict()
    assert data["ambient_dim"] == 4
    T = Subspace.from_dict(data)
    np.testing.assert_array_equal(T.basis, S.basis)
