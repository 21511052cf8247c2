"""Gramian volumes, angle ratios, negative-semidefinite kernels, the
vector-space Zariski classifier, fiber intersection kernels and fiber
balancing.

Rational inputs take an exact path (fraction-free determinants, exact
Gaussian elimination); float inputs use numpy.  Classifications are always
verified through two independent routes (the quadratic-form identity and an
eigendecomposition) before being reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DegenerateForSin, FiberRelationViolated, NotNSD, NotSolvable

_TOL = 1e-9


def _is_exact(mat) -> bool:
    return all(isinstance(v, (int, Fraction)) for row in mat for v in row)


def _det_exact(mat: list[list[Fraction]]) -> Fraction:
    """Determinant by exact fraction Gaussian elimination."""
    n = len(mat)
    a = [[Fraction(v) for v in row] for row in mat]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def _gram(vectors, metric):
    n = len(vectors)
    if metric is None:
        return [[sum(x * y for x, y in zip(vectors[i], vectors[j])) for j in range(n)] for i in range(n)]
    dim = len(vectors[0]) if vectors else 0
    out = []
    for i in range(n):
        mi = [sum(metric[r][c] * vectors[i][c] for c in range(dim)) for r in range(dim)]
        out.append([sum(mi[r] * vectors[j][r] for r in range(dim)) for j in range(n)])
    return out


def gramian_vol(vectors: Sequence[Sequence], metric=None) -> float:
    """sqrt(det <x_i, x_j>); 1 for the empty set, 0 for dependent sets."""
    if len(vectors) == 0:
        return 1.0
    if metric is not None and not _metric_ok(metric):
        raise ValueError("metric must be symmetric positive definite")
    G = _gram(vectors, metric)
    if _is_exact(G):
        det = _det_exact(G)
        return math.sqrt(float(det)) if det > 0 else 0.0
    det = float(np.linalg.det(np.array(G, dtype=float)))
    return math.sqrt(det) if det > 0 else 0.0


def _metric_ok(metric) -> bool:
    M = np.array(metric, dtype=float)
    if not np.allclose(M, M.T, atol=1e-12):
        return False
    try:
        np.linalg.cholesky(M)
        return True
    except np.linalg.LinAlgError:
        return False


def vol_ratio(vectors: Sequence[Sequence], index: int, metric=None) -> tuple[float, float]:
    """(h, sin(theta)) for the vector vectors[index] against the rest.

    h is the metric distance from x to the span of the others, computed by
    orthogonal projection, independently of the Gramian recursion it
    certifies.  sin(theta) requires the rest independent and x nonzero.
    """
    x = np.array(vectors[index], dtype=float)
    rest = [np.array(v, dtype=float) for i, v in enumerate(vectors) if i != index]
    M = np.eye(len(x)) if metric is None else np.array(metric, dtype=float)
    if rest:
        B = np.column_stack(rest)
        # metric least squares: minimize (x - Bc)^T M (x - Bc)
        L = np.linalg.cholesky(M)
        c, *_ = np.linalg.lstsq(L.T @ B, L.T @ x, rcond=None)
        r = x - B @ c
    else:
        r = x
    h = math.sqrt(max(float(r @ M @ r), 0.0))
    xnorm = math.sqrt(max(float(x @ M @ x), 0.0))
    rest_independent = (
        not rest or np.linalg.matrix_rank(np.column_stack(rest), tol=1e-10) == len(rest)
    )
    if xnorm < 1e-300 or not rest_independent:
        raise DegenerateForSin("zero vector or dependent remainder")
    return h, h / xnorm


def nsd_kernel_check(Q, x, tol: float = _TOL) -> bool:
    """Whether x^T Q x = 0 for negative semidefinite Q.

    Verifies the equivalence with Q x = 0 before answering; a mismatch
    beyond tolerance means Q was not NSD and raises.
    """
    Qm = np.array(Q, dtype=float)
    if not np.allclose(Qm, Qm.T, atol=1e-12):
        raise NotNSD("matrix not symmetric")
    scale = max(float(np.abs(Qm).max()), 1.0)
    eig = np.linalg.eigvalsh(Qm)
    if eig.max() > tol * scale:
        raise NotNSD(f"positive eigenvalue {eig.max():.3e}")
    xv = np.array(x, dtype=float)
    val = float(xv @ Qm @ xv)
    xscale = max(float(xv @ xv), 1.0)
    iszero = abs(val) <= tol * scale * xscale
    grad_zero = float(np.abs(Qm @ xv).max()) <= math.sqrt(tol) * scale * math.sqrt(xscale)
    if iszero != grad_zero:
        raise NotNSD("kernel equivalence violated: Q not NSD within tolerance")
    return iszero


@dataclass
class ZariskiClassification:
    kind: str  # NEG_DEFINITE | NEG_SEMIDEFINITE_KERNEL_e | HYPOTHESES_VIOLATED
    detail: str = ""
    kernel: np.ndarray | None = None


def _zariski_hypotheses(Q: np.ndarray, a: np.ndarray) -> str:
    n = Q.shape[0]
    if not np.allclose(Q, Q.T, atol=1e-12):
        return "matrix not symmetric"
    if np.any(a <= 0):
        return "coefficients not strictly positive"
    s = Q @ a
    if np.any(s > _TOL * max(1.0, float(np.abs(Q).max()))):
        return "Q(e, e_i) > 0 for some i"
    off = Q - np.diag(np.diag(Q))
    if np.any(off < -_TOL * max(1.0, float(np.abs(Q).max()))):
        return "off-diagonal sign"
    # connectivity of the strictly-positive off-diagonal graph
    adj = off > _TOL * max(1.0, float(np.abs(Q).max()))
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if adj[i, j] and j not in seen:
                seen.add(j)
                stack.append(j)
    if len(seen) != n:
        return "positive off-diagonal graph disconnected"
    return ""


def _identity_quadratic(Q: np.ndarray, a: np.ndarray, x: np.ndarray) -> float:
    """Q(x,x) through the proof identity on the rescaled basis f_i = a_i e_i."""
    n = Q.shape[0]
    Qf = (a[:, None] * Q) * a[None, :]
    se = Qf.sum(axis=1)  # Q(f_i, e) with e = sum f_j
    y = x / a  # coordinates of x on the f basis
    total = float((y * y) @ se)
    for i in range(n):
        for j in range(i + 1, n):
            total -= (y[i] - y[j]) ** 2 * Qf[i, j]
    return total


def zariski_classify(Q, a, tol: float = _TOL) -> ZariskiClassification:
    """Negative-(semi)definiteness of a connected fiber-type form.

    The verdict is computed from the sign of Q(e, e_i) and verified both by
    the quadratic-form identity (on deterministic probe vectors) and by an
    eigendecomposition, including the kernel direction in the semidefinite
    case.
    """
    Qm = np.array(Q, dtype=float)
    av = np.array(a, dtype=float)
    problem = _zariski_hypotheses(Qm, av)
    if problem:
        return ZariskiClassification(kind="HYPOTHESES_VIOLATED", detail=problem)
    scale = max(1.0, float(np.abs(Qm).max()))
    s = Qm @ av
    definite = bool(np.any(s < -tol * scale))
    # route 1: the identity on probes agrees with direct evaluation
    rng = np.random.default_rng(7)
    n = Qm.shape[0]
    for probe in [np.ones(n), *(rng.standard_normal(n) for _ in range(4))]:
        direct = float(probe @ Qm @ probe)
        via_identity = _identity_quadratic(Qm, av, probe)
        if abs(direct - via_identity) > 1e-7 * scale * max(1.0, float(probe @ probe)):
            raise RuntimeError("identity check failed; input outside hypotheses?")
    # route 2: eigendecomposition
    eig, vec = np.linalg.eigh(Qm)
    if eig.max() > tol * scale:
        raise RuntimeError("positive eigenvalue despite verified hypotheses")
    near_zero = np.abs(eig) <= tol * scale
    if definite:
        if near_zero.any():
            raise RuntimeError("eigen route disagrees: kernel found in definite case")
        return ZariskiClassification(kind="NEG_DEFINITE")
    if near_zero.sum() != 1:
        raise RuntimeError("eigen route disagrees: kernel dimension != 1")
    k = vec[:, int(np.argmax(eig))]
    cosine = abs(float(k @ av)) / (np.linalg.norm(k) * np.linalg.norm(av))
    if cosine < 1.0 - 1e-7:
        raise RuntimeError("kernel direction is not the multiplicity vector")
    kernel = av / np.linalg.norm(av)
    return ZariskiClassification(kind="NEG_SEMIDEFINITE_KERNEL_e", kernel=kernel)


@dataclass
class FiberKernel:
    kernel_basis: np.ndarray  # single row spanning ker
    image_normal: np.ndarray  # image = { y : a . y = 0 }


def fiber_kernel(M, a, tol: float = _TOL) -> FiberKernel:
    """Kernel and image of a fiber intersection matrix.

    Requires M symmetric with M a = 0 and the connectivity hypotheses;
    then ker = <a> and im = the hyperplane orthogonal to a, verified by
    solving M x = y for deterministic probes y in the hyperplane.
    """
    Mm = np.array(M, dtype=float)
    av = np.array(a, dtype=float)
    scale = max(1.0, float(np.abs(Mm).max()))
    if not np.allclose(Mm, Mm.T, atol=1e-12):
        raise ValueError("intersection matrix must be symmetric")
    if float(np.abs(Mm @ av).max()) > tol * scale:
        raise FiberRelationViolated("M a != 0")
    cls = zariski_classify(Mm, av, tol)
    if cls.kind == "HYPOTHESES_VIOLATED":
        raise ValueError(f"fiber hypotheses violated: {cls.detail}")
    if cls.kind != "NEG_SEMIDEFINITE_KERNEL_e":
        raise FiberRelationViolated("kernel is not spanned by the multiplicities")
    n = Mm.shape[0]
    # solve M x = y for probes y = e_i - (a_i/|a|^2) a in the hyperplane
    a2 = float(av @ av)
    for i in range(n):
        y = np.zeros(n)
        y[i] = 1.0
        y -= (av[i] / a2) * av
        x, *_ = np.linalg.lstsq(Mm, y, rcond=None)
        if float(np.abs(Mm @ x - y).max()) > 1e-8 * scale:
            raise RuntimeError("image probe not solvable; hypotheses violated?")
    return FiberKernel(kernel_basis=av / np.linalg.norm(av), image_normal=av.copy())


def _solve_singular_exact(M, rhs):
    """One exact solution of M x = rhs (fractions), free variables pinned to 0."""
    n = len(M)
    a = [[Fraction(v) for v in row] + [Fraction(r)] for row, r in zip(M, rhs)]
    piv_cols = []
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, n) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = 1 / a[row][col]
        a[row] = [v * inv for v in a[row]]
        for r in range(n):
            if r != row and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[row])]
        piv_cols.append(col)
        row += 1
    for r in range(row, n):
        if a[r][n] != 0:
            raise NotSolvable("inconsistent system")
    x = [Fraction(0)] * n
    for r, col in enumerate(piv_cols):
        x[col] = a[r][n]
    return x


def balance_fiber(M, a, rhs, tol: float = _TOL):
    """Strictly positive x with M x = -rhs, via the minimal integer shift.

    Solvable exactly when sum_j a_j rhs_j = 0 (the fiber relation); the
    particular solution is shifted by t * a with the smallest integer t
    making every coordinate positive.  Exact inputs produce exact output.
    """
    exact = _is_exact(M) and all(isinstance(v, (int, Fraction)) for v in rhs) and all(
        isinstance(v, (int, Fraction)) for v in a
    )
    av = np.array([float(v) for v in a])
    rv = np.array([float(v) for v in rhs])
    Mm = np.array([[float(v) for v in row] for row in M])
    scale = max(1.0, float(np.abs(Mm).max()), float(np.abs(rv).max()))
    if abs(float(av @ rv)) > tol * scale:
        raise NotSolvable(f"sum a_j rhs_j = {float(av @ rv):.3e} != 0")
    if float(np.abs(Mm @ av).max()) > tol * scale:
        raise FiberRelationViolated("M a != 0")
    if exact:
        part = _solve_singular_exact(M, [-Fraction(v) for v in rhs])
        t = 0
        for xi, ai in zip(part, a):
            ai = Fraction(ai)
            if xi <= 0:
                # smallest integer t with xi + t*ai > 0
                need = math.floor(-xi / ai) + 1
                t = max(t, need)
        return [xi + t * Fraction(ai) for xi, ai in zip(part, a)]
    part, *_ = np.linalg.lstsq(Mm, -rv, rcond=None)
    t = 0
    for xi, ai in zip(part, av):
        if xi <= tol:
            t = max(t, int(math.floor((-xi) / ai)) + 1)
    return [float(xi + t * ai) for xi, ai in zip(part, av)]
