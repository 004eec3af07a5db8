"""Named property suites. Each returns a :class:`~minangle.preserver_lab.Report`.

Suites are deterministic in ``seed``: trial ``i`` draws from ``trial_rng(seed, i)``.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import MinAngleError
from .grassmann import (
    Subspace,
    direct_sum,
    gap_distance,
    min_angle,
    principal_angles,
    principal_angles_oracle,
    subspace_to_projection,
    trace_product,
)
from .maps import (
    GrassmannMap,
    apply_isometry,
    apply_map,
    complement,
    construct_nonstandard_demo,
)
from .numerics import get_tolerance, orthonormalize, singular_values
from .preserver_lab import (
    BRANCH_THRESHOLD,
    Report,
    certificate_degenerate_regime,
    check_lemma_2_2,
    find_nonmonotone_witness,
    verify_preserver,
)
from .sampling import (
    complex_gaussian,
    converging_sequence,
    haar_unitary,
    random_isometry,
    random_subspace,
    random_unitary,
    trial_rng,
)

ANGLE_TOL = 1e-8
MA_TOL = 1e-7


def _finish(name, seed, trials, residuals, violations, ref, tol, **details):
    worst = max(residuals, default=0.0)
    return Report(name, seed, trials, worst, violations, ref,
                  passed=not violations and worst <= tol, details=details)


def overlapping_pair(rng, d: int, n: int):
    """Random ``n``-subspaces of ``C^d`` which share a random number of directions."""
    S = random_subspace(rng, d, n)
    shared = int(rng.integers(0, n + 1))
    if shared == 0 or shared == n:
        return S, (S if shared == n and rng.integers(2) else random_subspace(rng, d, n))
    keep = S.basis @ haar_unitary(rng, n)[:, :shared]
    G = complex_gaussian(rng, (d, n - shared))
    extra = orthonormalize(G - keep @ (keep.conj().T @ G))
    return S, Subspace(np.column_stack([keep, extra]))


def oracle(trials=1000, seed=0, d_max=8, n_max=3, tol=ANGLE_TOL) -> Report:
    """SVD principal angles against the recursive-definition oracle."""
    residuals, violations = [], []
    for i in range(trials):
        rng = trial_rng(seed, i)
        d = int(rng.integers(1, d_max + 1))
        n = int(rng.integers(1, min(n_max, d) + 1))
        S, T = overlapping_pair(rng, d, n) if i % 4 == 3 else (
            random_subspace(rng, d, n), random_subspace(rng, d, n))
        err = float(np.abs(principal_angles(S, T).angles - principal_angles_oracle(S, T).angles).max())
        residuals.append(err)
        if err > tol:
            violations.append({"trial": i, "d": d, "n": n, "error": err})
    return _finish("oracle", seed, trials, residuals, violations,
                   "principal angles agree with the recursive definition", tol)


def svlaw(trials=1000, seed=0, d_max=8, n_max=3, tol=ANGLE_TOL) -> Report:
    """Nonzero singular values of ``P - Q`` are the sines of nonzero angles, each twice."""
    eps = get_tolerance()
    residuals, violations = [], []
    for i in range(trials):
        rng = trial_rng(seed, i)
        d = int(rng.integers(2, d_max + 1))
        n = int(rng.integers(1, min(n_max, d) + 1))
        S, T = overlapping_pair(rng, d, n) if i % 4 == 3 else (
            random_subspace(rng, d, n), random_subspace(rng, d, n))
        s = singular_values(subspace_to_projection(S).matrix - subspace_to_projection(T).matrix)
        s = np.sort(s[s > eps.eps_rank * max(1.0, s[0])])
        theta = principal_angles(S, T).angles
        sines = np.sort(np.repeat(np.sin(theta[theta > eps.eps_angle]), 2))
        if s.size != sines.size:
            violations.append({"trial": i, "reason": "count mismatch",
                               "singular": s.tolist(), "sines": sines.tolist()})
            residuals.append(math.inf)
            continue
        err = float(np.abs(s - sines).max()) if s.size else 0.0
        residuals.append(err)
        if err > tol:
            violations.append({"trial": i, "error": err})
    return _finish("svlaw", seed, trials, residuals, violations,
                   "singular values of P - Q are the sines of the principal angles, counted twice",
                   tol)


def formulas(trials=1000, seed=0, d_max=8, n_max=3, tol=ANGLE_TOL) -> Report:
    """``gap = sin(theta_n)``, ``tr(PQ) = sum cos^2``, and ``gap = sqrt(1 - tr)`` at rank one."""
    residuals, violations = [], []
    worst = {"gap": 0.0, "trace": 0.0, "rank_one": 0.0}
    for i in range(trials):
        rng = trial_rng(seed, i)
        d = int(rng.integers(2, d_max + 1))
        n = int(rng.integers(1, min(n_max, d) + 1))
        S, T = random_subspace(rng, d, n), random_subspace(rng, d, n)
        theta = principal_angles(S, T).angles
        P, Q = subspace_to_projection(S), subspace_to_projection(T)
        x, y = random_subspace(rng, d, 1), random_subspace(rng, d, 1)
        errs = {
            "gap": abs(gap_distance(P, Q) - math.sin(theta[-1])),
            "trace": abs(trace_product(P, Q) - float(np.sum(np.cos(theta) ** 2))),
            "rank_one": abs(gap_distance(x, y) - math.sqrt(max(0.0, 1 - trace_product(x, y)))),
        }
        for key, err in errs.items():
            worst[key] = max(worst[key], err)
            if err > tol:
                violations.append({"trial": i, "formula": key, "error": err})
        residuals.append(max(errs.values()))
    return _finish("formulas", seed, trials, residuals, violations,
                   "gap metric and trace formulas in terms of principal angles", tol, worst=worst)


def lemma21(trials=1000, seed=0, d=3, n_blocks=2, tol=MA_TOL) -> Report:
    """``ma`` of block-diagonal projections is the minimum over blocks; ranks may differ."""
    if trials < 1:
        raise ValueError("trials must be positive")
    residuals, violations = [], []
    for i in range(trials):
        rng = trial_rng(seed, i)
        Ps, Qs, mins = [], [], []
        for _ in range(n_blocks):
            p, q = (int(k) for k in rng.integers(1, d + 1, size=2))
            S = random_subspace(rng, d, p)
            if rng.integers(3) == 0 and min(p, q) < d:
                # force a shared direction in this block
                x = S.basis[:, :1]
                T = Subspace(np.linalg.qr(np.column_stack(
                    [x, random_subspace(rng, d, d).basis[:, : q - 1]]))[0]) if q > 1 else Subspace(x)
            else:
                T = random_subspace(rng, d, q)
            Ps.append(subspace_to_projection(S))
            Qs.append(subspace_to_projection(T))
            mins.append(min_angle(S, T))
        P, Q = Ps[0], Qs[0]
        for Pk, Qk in zip(Ps[1:], Qs[1:]):
            P, Q = direct_sum(P, Pk), direct_sum(Q, Qk)
        err = abs(min_angle(P, Q) - min(mins))
        residuals.append(err)
        if err > tol:
            violations.append({"trial": i, "error": err})
    return _finish("lemma21", seed, trials, residuals, violations,
                   "minimal angle of block-diagonal projections is the minimum over blocks", tol)


def standard_maps(trials=500, seed=0, d=6, n=3, tol=ANGLE_TOL, ma_tol=MA_TOL) -> Report:
    """Standard maps keep every principal angle; complementation at ``d = 2n`` keeps ``ma``."""
    residuals, violations = [], []
    complement_worst = 0.0
    for i in range(trials):
        rng = trial_rng(seed, i)
        U = random_isometry(rng, d, d + int(rng.integers(0, 3)), conjugate=None)
        S, T = random_subspace(rng, d, n), random_subspace(rng, d, n)
        before = principal_angles(S, T).angles
        after = principal_angles(apply_isometry(U, S), apply_isometry(U, T)).angles
        err = float(np.abs(before - after).max())
        residuals.append(err)
        if err > tol:
            violations.append({"trial": i, "error": err, "conjugate": U.conjugate})
        m = int(rng.integers(1, 4))
        phi = GrassmannMap.complement_standard(random_unitary(rng, 2 * m, conjugate=None), m)
        A, B = random_subspace(rng, 2 * m, m), random_subspace(rng, 2 * m, m)
        cerr = abs(min_angle(phi(A), phi(B)) - min_angle(A, B))
        complement_worst = max(complement_worst, cerr)
        if cerr > ma_tol:
            violations.append({"trial": i, "complement_error": cerr})
    return _finish("standard", seed, trials, residuals, violations,
                   "standard maps preserve principal angles", tol,
                   complement_max_residual=complement_worst)


def recover(seed=0, d=6, n=2, trials=20, tol=MA_TOL) -> Report:
    """Round-trip: build standard (and, at ``d = 2n``, complement) maps and recover them."""
    rng = trial_rng(seed, 0)
    cases = []
    for conjugate in (False, True):
        U = random_isometry(rng, d, d + int(rng.integers(0, 3)), conjugate=conjugate)
        cases.append(("standard", U, GrassmannMap.standard(U, n)))
        if d == 2 * n:
            V = random_unitary(rng, d, conjugate=conjugate)
            cases.append(("complement", V, GrassmannMap.complement_standard(V, n)))
    residuals, violations, runs = [], [], []
    for k, (expected, U0, phi) in enumerate(cases):
        try:
            result = verify_preserver(phi, trials=trials, seed=seed + k)
        except MinAngleError as exc:
            violations.append({"case": k, "reason": str(exc)})
            residuals.append(math.inf)
            continue
        W = result.isometry.matrix
        if W.shape == U0.matrix.shape:
            overlap = np.vdot(W[:, 0], U0.matrix[:, 0])
            phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
            col_err = float(np.abs(W * phase - U0.matrix).max())
        else:
            col_err = math.inf
        run = {"case": k, "expected_branch": expected, "branch": result.branch,
               "conjugate": U0.conjugate, "recovered_conjugate": result.isometry.conjugate,
               "max_residual": result.max_residual, "column_error": col_err}
        runs.append(run)
        err = max(result.max_residual, col_err)
        residuals.append(err)
        if result.branch != expected:
            violations.append({"case": k, "reason": f"branch {result.branch}, expected {expected}"})
        elif result.isometry.conjugate != U0.conjugate:
            violations.append({"case": k, "reason": "conjugate flag not recovered"})
        if err > tol:
            violations.append({"case": k, "reason": "residual", "error": err})
    return _finish("recover", seed, len(cases), residuals, violations,
                   "constructive recovery of the isometry behind a minimal-angle preserver",
                   tol, runs=runs, branch_threshold=BRANCH_THRESHOLD)


def lemma22(trials=200, seed=0, n=2, d=20, tol=MA_TOL) -> Report:
    U = random_unitary(trial_rng(seed, 10**7), d, conjugate=None)
    report = check_lemma_2_2(GrassmannMap.standard(U, n), trials=trials, seed=seed)
    report.passed = report.passed and report.max_residual <= tol
    return report


def nonstandard(trials=500, seed=0, n=2, d=4, tol=MA_TOL) -> Report:
    """``S -> S (+) rho(S)`` preserves ``ma``; ``rho`` is not monotone."""
    phi = construct_nonstandard_demo(n, d, r=1)
    residuals, violations = [], []
    for i in range(trials):
        rng = trial_rng(seed, i)
        S, T = random_subspace(rng, d, n), random_subspace(rng, d, n)
        err = abs(min_angle(apply_map(phi, S), apply_map(phi, T)) - min_angle(S, T))
        residuals.append(err)
        if err > tol:
            violations.append({"trial": i, "error": err})
    witness = find_nonmonotone_witness(seed=seed, n=n, d=d)
    details = {"witness": {"attempt": witness["attempt"], "leak": witness["leak"],
                           "P": witness["P"].to_dict(), "Q": witness["Q"].to_dict()}}
    if witness["leak"] <= get_tolerance().eps_angle:
        violations.append({"reason": "witness is not a witness"})
    return _finish("nonstandard", seed, trials, residuals, violations,
                   "block map with a non-monotone selector preserves the minimal angle", tol,
                   **details)


def continuity(trials=50, seed=0, d=6, n=3, k_max=20, constant=2.0) -> Report:
    """Along ``R_k -> P``: ``pi/2 - ma(R_k, P^perp) <= constant * gap(R_k, P)`` once gap <= 0.1."""
    residuals, violations, ratios = [], [], []
    for i in range(trials):
        rng = trial_rng(seed, i)
        S = random_subspace(rng, d, n)
        C = complement(S)
        P = subspace_to_projection(S)
        seq = converging_sequence(rng, P, k_max)
        gaps = [gap_distance(R, P) for R in seq]
        if any(b > a for a, b in zip(gaps, gaps[1:])):
            violations.append({"trial": i, "reason": "gap not monotone"})
        for k, (R, g) in enumerate(zip(seq, gaps), start=1):
            if g > 2.0 ** (1 - k):
                violations.append({"trial": i, "k": k, "reason": "gap above 2^(1-k)"})
            if C is None or g > 0.1:
                continue
            deficit = math.pi / 2 - min_angle(R, C)
            excess = deficit - constant * g
            residuals.append(max(0.0, excess))
            if g > 0:
                ratios.append(deficit / g)
            if excess > 0:
                violations.append({"trial": i, "k": k, "deficit": deficit, "gap": g})
    return _finish("continuity", seed, trials, residuals, violations,
                   "minimal angle to the complement tends to pi/2 along converging sequences",
                   0.0, observed_constant=max(ratios, default=0.0))


def degenerate(trials=1000, seed=0, n=2, d=3) -> Report:
    cert = certificate_degenerate_regime(n, d, trials=trials, seed=seed)
    ev = cert.evidence
    return Report("degenerate", seed, trials, ev["max_ma"], [] if cert.passed else [ev],
                  "every pair of n-subspaces intersects when n + 1 <= d < 2n",
                  passed=cert.passed and ev["max_ma"] <= 1e-6,
                  details={"min_intersection_dim": ev["min_intersection_dim"],
                           "required_dim": ev["required_dim"]})


SUITES = {
    "oracle": oracle,
    "svlaw": svlaw,
    "formulas": formulas,
    "lemma21": lemma21,
    "standard": standard_maps,
    "recover": recover,
    "lemma22": lemma22,
    "nonstandard": nonstandard,
    "continuity": continuity,
    "degenerate": degenerate,
}
