"""Constructive checks for maps that preserve the minimal principal angle.

The pipeline for a rank-``n`` map ``phi``:

1. check ``ma(phi(S), phi(T)) == ma(S, T)`` on sampled pairs;
2. induce a map on lines, ``psi([x]) = phi(U) & phi(V)`` for a 1-orthogonal
   pair ``U, V`` meeting in ``[x]``;
3. read off an isometry from ``psi`` on a handful of probe lines;
4. validate ``phi(P) = U P U*`` (or ``U (I - P) U*`` when ``d = 2n``) on fresh samples.

Certificates are small self-checking witnesses for the explicit matrix
identities behind the complementation map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    CertificateFailure,
    DimensionMismatchError,
    DomainError,
    HypothesisInfeasibleError,
    MinAngleError,
    NotAWignerMapError,
    PreserverViolationError,
    RegimeError,
)
from .grassmann import (
    HALF_PI,
    Subspace,
    _angles,
    contains,
    gap_distance,
    intersection,
    intersection_dim,
    is_one_orthogonal,
    min_angle,
    relative_complement,
    subspace_to_projection,
)
from .maps import GrassmannMap, IsometryMap, apply_map, complement, pivot_selector
from .numerics import fix_phase, get_tolerance, nullspace, singular_values, spectral_norm
from .sampling import haar_unitary, make_rng, random_subspace, random_unit_vector, trial_rng

# residual separating a matching branch from a failed one
BRANCH_THRESHOLD = 1e-3


@dataclass
class Report:
    """Outcome of a sampled check; serialises to the shared report schema."""

    check: str
    seed: int
    trials: int
    max_residual: float
    violations: list = field(default_factory=list)
    paper_ref: str = ""
    passed: bool = True
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"check": self.check, "seed": self.seed, "trials": self.trials,
                "max_residual": float(self.max_residual), "violations": self.violations,
                "paper_ref": self.paper_ref, "pass": bool(self.passed),
                "details": self.details}


def _line(x) -> np.ndarray:
    if isinstance(x, Subspace):
        if x.dim != 1:
            raise DimensionMismatchError(f"expected a line, got {x!r}")
        return x.basis[:, 0]
    v = np.asarray(x, dtype=complex).reshape(-1)
    return v / np.linalg.norm(v)


def line_angle(x, y) -> float:
    theta, _, _ = _angles(_line(x)[:, None], _line(y)[:, None])
    return float(theta[0])


def find_sharp_pair(x, n: int, d: int, rng=None) -> tuple[Subspace, Subspace]:
    """Two 1-orthogonal ``n``-subspaces of ``C^d`` meeting exactly in ``[x]``.

    ``x`` is completed to an orthonormal ``2n - 1`` frame; with ``rng`` the
    completion is randomised inside the complement of ``x``.
    """
    if n < 2:
        raise RegimeError("1-orthogonal pairs need n >= 2")
    if d < 2 * n - 1:
        raise RegimeError(f"need d >= 2n - 1 = {2 * n - 1}, got d={d}")
    x = _line(x)
    if x.size != d:
        raise DimensionMismatchError(f"x lives in C^{x.size}, expected C^{d}")
    N = nullspace(x.conj()[None, :])
    if rng is not None:
        N = N @ haar_unitary(make_rng(rng), N.shape[1])
    F = N[:, : 2 * n - 2]
    U = Subspace(np.column_stack([x, F[:, : n - 1]]))
    V = Subspace(np.column_stack([x, F[:, n - 1:]]))
    return U, V


@dataclass
class LineMap:
    """Induced map on sampled lines, with its well-definedness residuals."""

    lines: list
    images: list
    residuals: list
    provenance: object = None
    violations: list = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)

    def __call__(self, x) -> np.ndarray:
        v = _line(x)
        eps = get_tolerance().eps_angle
        for line, image in zip(self.lines, self.images):
            if line.size == v.size and line_angle(line, v) < eps:
                return image
        raise DomainError("line was not sampled")

    def __len__(self):
        return len(self.lines)


def _meet_line(phi, U, V, x):
    A, B = phi(U), phi(V)
    meet = intersection(A, B)
    if meet is None or meet.dim != 1:
        theta, _, _ = _angles(A.basis, B.basis)
        raise PreserverViolationError(
            "images of a 1-orthogonal pair do not meet in a line",
            {"line": x.tolist(), "angles": theta.tolist()})
    return meet.basis[:, 0], A, B


def build_line_map(phi: Callable, lines, n: int | None = None, d: int | None = None,
                   rng=None, pairs_per_line: int = 2) -> LineMap:
    """Evaluate ``psi([x]) = phi(U) & phi(V)`` on each line.

    Every line is evaluated through ``pairs_per_line`` independent 1-orthogonal
    pairs; the largest angle between the resulting candidate lines is the
    well-definedness residual. For ``n == 1`` ``psi`` is ``phi`` itself.
    """
    n = phi.n if n is None else n
    d = phi.d if d is None else d
    rng = make_rng(rng if rng is not None else 0)
    out_lines, images, residuals, violations = [], [], [], []
    for x in lines:
        x = _line(x)
        if n == 1:
            image = phi(Subspace(x[:, None])).basis[:, 0]
            out_lines.append(x)
            images.append(image)
            residuals.append(0.0)
            continue
        candidates = []
        for _ in range(max(1, pairs_per_line)):
            U, V = find_sharp_pair(x, n, d, rng)
            line, A, B = _meet_line(phi, U, V, x)
            if not is_one_orthogonal(A, B):
                violations.append({"line": x.tolist(), "reason": "images not 1-orthogonal"})
            candidates.append(line)
        out_lines.append(x)
        images.append(candidates[0])
        residuals.append(max((line_angle(candidates[0], c) for c in candidates[1:]), default=0.0))
    return LineMap(out_lines, images, residuals, provenance=phi, violations=violations)


def probe_lines(d: int) -> list[np.ndarray]:
    """Lines that :func:`recover_isometry` needs: ``e_j``, ``(e_1 + e_j)/sqrt2``, ``(e_1 + i e_2)/sqrt2``."""
    eye = np.eye(d, dtype=complex)
    lines = [eye[:, j] for j in range(d)]
    lines += [(eye[:, 0] + eye[:, j]) / math.sqrt(2) for j in range(1, d)]
    if d >= 2:
        lines.append((eye[:, 0] + 1j * eye[:, 1]) / math.sqrt(2))
    return lines


@dataclass
class RecoveryResult:
    isometry: IsometryMap
    global_phase_fixed: bool
    max_residual: float
    branch: str = "standard"
    line_residual: float = 0.0
    ma_defect: float = 0.0
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"isometry": self.isometry.to_dict(), "global_phase_fixed": self.global_phase_fixed,
                "max_residual": float(self.max_residual), "branch": self.branch,
                "line_residual": float(self.line_residual), "ma_defect": float(self.ma_defect)}


def recover_isometry(psi: Callable, d: int) -> RecoveryResult:
    """Read off a (conjugate-)linear isometry from a map on lines of ``C^d``.

    Column ``j`` is a representative of ``psi([e_j])`` whose phase is fixed by
    ``psi([(e_1 + e_j)/sqrt2])``; the flag comes from ``psi([(e_1 + i e_2)/sqrt2])``.
    ``max_residual`` of the result is the worst probe-line mismatch.
    """
    eps = get_tolerance().eps_angle
    eye = np.eye(d, dtype=complex)
    u1 = _line(psi(eye[:, 0]))
    cols = [u1]
    worst = 0.0
    for j in range(1, d):
        w = _line(psi(eye[:, j]))
        probe = (eye[:, 0] + eye[:, j]) / math.sqrt(2)
        s = _line(psi(probe))
        a, b = np.vdot(u1, s), np.vdot(w, s)
        if abs(a) < 1e-3 or abs(b) < 1e-3:
            raise NotAWignerMapError(f"cannot align phase of column {j}", line=probe)
        alpha = (b / a) / abs(b / a)
        uj = alpha * w
        err = line_angle((u1 + uj) / math.sqrt(2), s)
        if err > eps:
            raise NotAWignerMapError(
                f"column {j}: probe line misses by {err:.3e} rad", line=probe)
        worst = max(worst, err)
        cols.append(uj)
    U = np.column_stack(cols)
    conjugate = False
    if d >= 2:
        probe = (eye[:, 0] + 1j * eye[:, 1]) / math.sqrt(2)
        t = _line(psi(probe))
        plus = line_angle((U[:, 0] + 1j * U[:, 1]) / math.sqrt(2), t)
        minus = line_angle((U[:, 0] - 1j * U[:, 1]) / math.sqrt(2), t)
        if min(plus, minus) > eps:
            raise NotAWignerMapError(
                f"complex probe matches neither orientation ({plus:.3e}, {minus:.3e})", line=probe)
        conjugate = minus < plus
        worst = max(worst, min(plus, minus))
    # column-major flattening makes this fix the phase of u1's first nonzero entry
    U = fix_phase(U)
    gram = np.abs(U.conj().T @ U - np.eye(d)).max()
    if gram > math.sqrt(eps):
        raise NotAWignerMapError(f"recovered columns are not orthonormal (error {gram:.3e})")
    # polish to exact orthonormality; the correction is of the size of ``gram``
    W, _, Vh = np.linalg.svd(U, full_matrices=False)
    U = W @ Vh
    return RecoveryResult(IsometryMap(U, conjugate), True, worst)


def _sample_pairs(phi: GrassmannMap, trials: int, seed: int):
    """Pairs on which ma-preservation is checked: generic, sharing a line, orthogonal."""
    if phi.kind == "table":
        keys = [a for a, _ in phi.pairs]
        return [(keys[i], keys[j]) for i in range(len(keys)) for j in range(i + 1, len(keys))]
    n, d = phi.n, phi.d
    pairs = []
    for i in range(trials):
        rng = trial_rng(seed, i)
        S = random_subspace(rng, d, n)
        kind = i % 3
        if kind == 0 or n == d:
            T = random_subspace(rng, d, n)
        elif kind == 1:
            x = S.basis @ random_unit_vector(rng, n)
            rest = nullspace(x.conj()[None, :]) @ haar_unitary(rng, d - 1)
            T = Subspace(np.column_stack([x, rest[:, : n - 1]]))
        else:
            C = complement(S)
            if C is not None and C.dim >= n:
                T = Subspace(C.basis @ haar_unitary(rng, C.dim)[:, :n])
            else:
                T = random_subspace(rng, d, n)
        pairs.append((S, T))
    return pairs


def check_ma_preservation(phi: GrassmannMap, trials: int, seed: int, threshold=None) -> float:
    """Largest minimal-angle defect over sampled pairs; raises past ``threshold``."""
    threshold = 10 * get_tolerance().eps_angle if threshold is None else threshold
    worst = 0.0
    for S, T in _sample_pairs(phi, trials, seed):
        before = min_angle(S, T)
        after = min_angle(apply_map(phi, S), apply_map(phi, T))
        defect = abs(after - before)
        worst = max(worst, defect)
        if defect > threshold:
            raise PreserverViolationError(
                f"minimal angle changed by {defect:.3e} rad",
                {"before": before, "after": after, "S": S.to_dict(), "T": T.to_dict()})
    return worst


def _complemented(phi: GrassmannMap):
    def composed(S):
        C = complement(apply_map(phi, S))
        if C is None:
            raise PreserverViolationError("image is the whole space")
        return C
    composed.n, composed.d = phi.n, phi.d
    return composed


def attempt_branch(phi, branch: str, trials: int, seed: int,
                   pairs_per_line: int = 2) -> RecoveryResult:
    """Recover and validate assuming ``branch`` ("standard" or "complement")."""
    n, d = phi.n, phi.d
    psi_source = _complemented(phi) if branch == "complement" else (lambda S: apply_map(phi, S))
    rng = trial_rng(seed, 10**6 + (branch == "complement"))
    lines = probe_lines(d) + [random_unit_vector(rng, d) for _ in range(4)]
    psi = build_line_map(psi_source, lines, n=n, d=d, rng=rng, pairs_per_line=pairs_per_line)
    result = recover_isometry(psi, d)
    U = result.isometry
    worst = 0.0
    vrng = trial_rng(seed, 2 * 10**6)
    for _ in range(max(trials, 1)):
        S = random_subspace(vrng, d, n)
        P = subspace_to_projection(S)
        target = U.conjugate_projection(P)
        if branch == "complement":
            target = U.conjugate_projection(np.eye(d) - P.matrix)
        image = subspace_to_projection(apply_map(phi, S)).matrix
        worst = max(worst, spectral_norm(image - target))
    result.max_residual = max(worst, result.max_residual)
    result.branch = branch
    result.line_residual = psi.max_residual
    return result


def verify_preserver(phi: GrassmannMap, trials: int = 50, seed: int = 0,
                     pairs_per_line: int = 2) -> RecoveryResult:
    """Check ma-preservation, then recover the isometry behind ``phi`` and validate it.

    The ``standard`` branch is tried first; when it does not match within
    ``BRANCH_THRESHOLD`` and ``d == 2n`` the ``complement`` branch is tried.
    """
    defect = check_ma_preservation(phi, trials, seed)
    attempts, errors = [], []
    branches = ["standard"]
    if phi.d == 2 * phi.n and phi.codomain_dim == phi.d:
        branches.append("complement")
    for branch in branches:
        try:
            result = attempt_branch(phi, branch, trials, seed, pairs_per_line)
        except MinAngleError as exc:
            errors.append(exc)
            continue
        result.ma_defect = defect
        if result.max_residual <= BRANCH_THRESHOLD:
            result.details["attempts"] = [a.branch for a in attempts] + [branch]
            return result
        attempts.append(result)
    if attempts:
        best = min(attempts, key=lambda r: r.max_residual)
        best.details["attempts"] = [a.branch for a in attempts]
        best.details["matched"] = False
        return best
    raise errors[-1]


# ---------------------------------------------------------------- certificates


@dataclass
class Certificate:
    kind: str
    evidence: dict
    passed: bool

    def to_dict(self) -> dict:
        return {"kind": self.kind, "passed": bool(self.passed), "evidence": _jsonable(self.evidence)}


def _jsonable(value):
    if isinstance(value, np.ndarray):
        if np.iscomplexobj(value):
            return {"re": value.real.tolist(), "im": value.imag.tolist()}
        return value.tolist()
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _cover_blocks(n: int) -> list[list[int]]:
    """Three index sets of size ``n`` containing 0 and jointly covering ``0..2n-1``."""
    rest = list(range(1, 2 * n))
    blocks = []
    for i in range(3):
        chosen = rest[i * (n - 1):(i + 1) * (n - 1)]
        fill = [j for j in rest if j not in chosen]
        chosen = chosen + fill[: n - 1 - len(chosen)]
        blocks.append([0] + chosen)
    return blocks


def certificate_complement_not_standard(n: int) -> Certificate:
    """Witness that ``P -> I - P`` on rank-``n`` projections of ``C^2n`` is not standard.

    ``A = (P1 + P2 + P3)/3`` for diagonal projections covering every position
    and sharing the first one is invertible and has eigenvalue 1, so ``I - A``
    is singular; a standard map sending each ``Pi`` to ``I - Pi`` would make
    ``I - A`` unitarily similar to ``A``.
    """
    if n < 2:
        raise RegimeError("the certificate needs n >= 2")
    d = 2 * n
    projections = []
    for block in _cover_blocks(n):
        diag = np.zeros(d)
        diag[block] = 1.0
        projections.append(np.diag(diag).astype(complex))
    A = sum(projections) / 3
    e1 = np.eye(d, dtype=complex)[:, 0]
    evidence = {
        "n": n,
        "projections": projections,
        "A": A,
        "witness": e1,
        "min_singular_A": float(singular_values(A)[-1]),
        "eigen_residual": float(np.linalg.norm((A - np.eye(d)) @ e1)),
        "min_singular_I_minus_A": float(singular_values(np.eye(d) - A)[-1]),
    }
    cert = Certificate("complement_not_standard", evidence, False)
    cert.passed = validate_certificate(cert)
    return cert


def two_by_two_projection(p: float, z: complex) -> np.ndarray:
    off = z * math.sqrt(p * (1 - p))
    return np.array([[p, off], [np.conj(off), 1 - p]], dtype=complex)


TWO_BY_TWO_U = np.array([[0, 1], [-1, 0]], dtype=complex)


def certificate_two_by_two(tol: float = 1e-12) -> Certificate:
    """Grid check of ``I - P = U P^t U*`` and ``P^t = conj(P)`` on rank-one 2x2 projections."""
    ps = [k / 10 for k in range(11)]
    zs = [1, 1j, complex(math.cos(math.pi / 4), math.sin(math.pi / 4)), -1]
    points = []
    for p in ps:
        for z in zs:
            P = two_by_two_projection(p, z)
            identity_res = np.abs((np.eye(2) - P) - TWO_BY_TWO_U @ P.T @ TWO_BY_TWO_U.conj().T).max()
            transpose_res = np.abs(P.T - P.conj()).max()
            points.append({"p": p, "z": complex(z), "identity_residual": float(identity_res),
                           "transpose_residual": float(transpose_res)})
            if max(identity_res, transpose_res) > tol:
                raise CertificateFailure(f"identity fails at p={p}, z={z}", point=(p, z))
    evidence = {"U": TWO_BY_TWO_U, "tolerance": tol, "points": points,
                "max_residual": max(max(q["identity_residual"], q["transpose_residual"]) for q in points)}
    cert = Certificate("two_by_two_identity", evidence, False)
    cert.passed = validate_certificate(cert)
    return cert


def certificate_degenerate_regime(n: int, d: int, trials: int = 1000, seed: int = 0) -> Certificate:
    """For ``n + 1 <= d < 2n`` every pair of ``n``-subspaces of ``C^d`` intersects."""
    if not n + 1 <= d < 2 * n:
        raise RegimeError(f"need n + 1 <= d < 2n, got n={n}, d={d}")
    worst_ma, worst_pair, min_dim = -1.0, None, None
    for i in range(trials):
        rng = trial_rng(seed, i)
        S, T = random_subspace(rng, d, n), random_subspace(rng, d, n)
        ma = min_angle(S, T)
        k = intersection_dim(S, T)
        min_dim = k if min_dim is None else min(min_dim, k)
        if ma > worst_ma:
            worst_ma, worst_pair = ma, (S.basis, T.basis)
    evidence = {"n": n, "d": d, "trials": trials, "seed": seed,
                "max_ma": worst_ma, "min_intersection_dim": min_dim,
                "required_dim": 2 * n - d, "threshold": 10 * get_tolerance().eps_angle,
                "worst_pair": list(worst_pair)}
    cert = Certificate("degenerate_regime", evidence, False)
    cert.passed = validate_certificate(cert)
    return cert


def validate_certificate(cert: Certificate) -> bool:
    """Recompute a certificate's claims from the raw matrices in its evidence."""
    ev = cert.evidence
    if cert.kind == "complement_not_standard":
        Ps = [np.asarray(P) for P in ev["projections"]]
        n = ev["n"]
        d = 2 * n
        for P in Ps:
            if not (np.allclose(P, np.diag(np.diag(P))) and np.allclose(P @ P, P)
                    and round(np.trace(P).real) == n and P[0, 0] == 1):
                return False
        if not np.all(sum(np.diag(P).real for P in Ps) > 0):
            return False
        A = sum(Ps) / 3
        x = np.asarray(ev["witness"])
        eps_rank = get_tolerance().eps_rank
        return bool(singular_values(A)[-1] >= 1 / 3 - 1e-12
                    and np.linalg.norm((A - np.eye(d)) @ x) <= 1e-12
                    and singular_values(np.eye(d) - A)[-1] <= eps_rank)
    if cert.kind == "two_by_two_identity":
        U = np.asarray(ev["U"])
        for q in ev["points"]:
            P = two_by_two_projection(q["p"], q["z"])
            if np.abs((np.eye(2) - P) - U @ P.T @ U.conj().T).max() > ev["tolerance"]:
                return False
            if np.abs(P.T - P.conj()).max() > ev["tolerance"]:
                return False
        return True
    if cert.kind == "degenerate_regime":
        S, T = (Subspace(B) for B in ev["worst_pair"])
        ma = min_angle(S, T)
        return bool(ma <= ev["threshold"] and abs(ma - ev["max_ma"]) <= 1e-12
                    and intersection_dim(S, T) >= ev["required_dim"] >= 1
                    and ev["min_intersection_dim"] >= ev["required_dim"])
    raise ValueError(f"unknown certificate kind {cert.kind!r}")


# ---------------------------------------------------------------- 1-orthogonal triples


def lemma22_configuration(rng, n: int, d: int) -> dict:
    """Three pairwise 1-orthogonal ``n``-subspaces through a common line, plus
    ``3n - 2`` pairwise orthogonal auxiliary subspaces ``L, M...`` with ``e in L``
    and each ``f`` vector of the triple in its own ``M``."""
    need = n * (3 * n - 2)
    if n < 2 or d < need:
        raise HypothesisInfeasibleError(f"need n >= 2 and d >= n(3n-2) = {need}, got n={n}, d={d}")
    Q = haar_unitary(make_rng(rng), d)
    m = n - 1
    e = Q[:, 0]
    f = [Q[:, 1 + k * m: 1 + (k + 1) * m] for k in range(3)]
    U, V, W = (Subspace(np.column_stack([e, fk])) for fk in f)
    spare = iter(range(3 * n - 2, d))
    anchors = [e] + [fk[:, j] for fk in f for j in range(m)]
    aux = [Subspace(np.column_stack([a] + [Q[:, next(spare)] for _ in range(n - 1)])) for a in anchors]
    return {"U": U, "V": V, "W": W, "e": e, "aux": aux}


def _sharp_residual(A: Subspace, B: Subspace):
    meet = intersection(A, B)
    if meet is None or meet.dim != 1:
        return None, math.inf
    return meet.basis[:, 0], spectral_norm(
        relative_complement(A, meet).conj().T @ relative_complement(B, meet))


def check_lemma_2_2(phi, trials: int = 200, seed: int = 0, configurations=None,
                    check_hypotheses: bool = True) -> Report:
    """Images of pairwise 1-orthogonal triples through a common line stay so, with a common line."""
    eps = get_tolerance().eps_angle
    n, d = phi.n, phi.d
    if configurations is None:
        if getattr(phi, "kind", None) == "table":
            raise HypothesisInfeasibleError("table maps need explicit configurations")
        configurations = [lemma22_configuration(trial_rng(seed, i), n, d) for i in range(trials)]
    violations, worst = [], 0.0
    for i, conf in enumerate(configurations):
        try:
            images = {k: phi(conf[k]) for k in "UVW"}
            if check_hypotheses:
                aux = [phi(S) for S in conf["aux"]]
                for a in range(len(aux)):
                    for b in range(a + 1, len(aux)):
                        if spectral_norm(aux[a].basis.conj().T @ aux[b].basis) > eps:
                            violations.append({"trial": i, "reason": "auxiliary images not orthogonal"})
                for k in "UVW":
                    if min_angle(images[k], aux[0]) > eps:
                        violations.append({"trial": i, "reason": f"phi({k}) misses phi(L)"})
        except MinAngleError as exc:
            violations.append({"trial": i, "reason": f"map failed: {exc}"})
            worst = math.inf
            continue
        lines = []
        for a, b in ("UV", "UW", "VW"):
            line, res = _sharp_residual(images[a], images[b])
            worst = max(worst, res)
            if line is None or res > eps:
                violations.append({"trial": i, "reason": f"phi({a}), phi({b}) not 1-orthogonal"})
            lines.append(line)
        if all(line is not None for line in lines):
            spread = max(line_angle(lines[0], lines[1]), line_angle(lines[0], lines[2]),
                         line_angle(lines[1], lines[2]))
            worst = max(worst, spread)
            if spread > eps:
                violations.append({"trial": i, "reason": "pairwise intersections differ",
                                   "spread": spread})
    return Report("lemma22", seed, len(configurations), worst, violations,
                  paper_ref="1-orthogonal triples through a common line map to such triples",
                  passed=not violations)


def find_nonmonotone_witness(seed: int = 0, n: int = 2, d: int = 4, selector=None,
                             attempts: int = 100) -> dict:
    """Nested ``P <= Q`` (ranks ``n`` and ``n + 1``) with ``rho(P)`` not inside ``rho(Q)``."""
    if n + 1 > d:
        raise RegimeError("need n + 1 <= d")
    rho = selector or (lambda S: pivot_selector(S, 1))
    for i in range(attempts):
        rng = trial_rng(seed, i)
        Q = random_subspace(rng, d, n + 1)
        P = Subspace(Q.basis @ haar_unitary(rng, n + 1)[:, :n])
        rP, rQ = rho(P), rho(Q)
        if not contains(rQ, rP):
            return {"attempt": i, "P": P, "Q": Q, "rho_P": rP, "rho_Q": rQ,
                    "leak": spectral_norm(rP.basis - rQ.basis @ (rQ.basis.conj().T @ rP.basis))}
    raise RuntimeError("no witness found")
