"""Dense two-phase primal simplex with Bland's rule.

Solves min c.x subject to A x <= b with x free, by splitting x into
nonnegative parts and adding slacks.  Problem sizes in this package stay
well under a hundred rows, so a plain tableau is the right tool; Bland's
rule guarantees termination under degeneracy.  The solver returns the
nonnegative multipliers of the inequality rows so callers can certify
optimality (A^T mu = -c, gap b.mu + c.x = 0) independently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import Infeasible, Unbounded

_PIVOT_TOL = 1e-11


@dataclass
class LPResult:
    x: np.ndarray
    duals: np.ndarray  # multipliers mu >= 0 of the rows of A x <= b
    value: float


def _pivot(T: np.ndarray, basis: list[int], row: int, col: int):
    T[row] /= T[row, col]
    for r in range(T.shape[0]):
        if r != row and T[r, col] != 0.0:
            T[r] -= T[r, col] * T[row]
    basis[row] = col


def _bland_iterate(T: np.ndarray, basis: list[int], cost: np.ndarray):
    """Run simplex iterations in place on tableau T (last column is RHS)."""
    m = T.shape[0]
    while True:
        cb = cost[basis]
        red = cost - cb @ T[:, :-1]
        entering = -1
        for j in range(T.shape[1] - 1):
            if red[j] < -_PIVOT_TOL:
                entering = j
                break
        if entering < 0:
            return
        ratios = []
        for i in range(m):
            if T[i, entering] > _PIVOT_TOL:
                ratios.append((T[i, -1] / T[i, entering], basis[i], i))
        if not ratios:
            raise Unbounded("unbounded direction in simplex")
        ratios.sort(key=lambda t: (t[0], t[1]))
        _pivot(T, basis, ratios[0][2], entering)


def solve_inequality_lp(c, A, b) -> LPResult:
    """min c.x s.t. A x <= b, x free; raises Infeasible or Unbounded."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float).copy()
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    # equality form: [A, -A, diag(flip)] z = |b| with rows flipped where b < 0
    flip = np.where(b < 0, -1.0, 1.0)
    Ae = np.hstack([A * flip[:, None], -A * flip[:, None], np.diag(flip)])
    be = b * flip
    ncols = Ae.shape[1]
    art_rows = [i for i in range(m) if flip[i] < 0]
    Aa = np.zeros((m, len(art_rows)))
    for k, i in enumerate(art_rows):
        Aa[i, k] = 1.0
    T = np.hstack([Ae, Aa, be[:, None]])
    art_cols = set(range(ncols, ncols + len(art_rows)))
    art_iter = iter(sorted(art_cols))
    basis: list[int] = []
    for i in range(m):
        basis.append(2 * n + i if flip[i] > 0 else next(art_iter))
    row_ids = list(range(m))
    if art_rows:
        cost1 = np.zeros(T.shape[1] - 1)
        for j in art_cols:
            cost1[j] = 1.0
        _bland_iterate(T, basis, cost1)
        if cost1[basis] @ T[:, -1] > 1e-8:
            raise Infeasible("phase 1 optimum positive")
        for i in range(len(basis)):
            if basis[i] in art_cols:
                for j in range(ncols):
                    if abs(T[i, j]) > _PIVOT_TOL:
                        _pivot(T, basis, i, j)
                        break
        keep = [i for i in range(len(basis)) if basis[i] not in art_cols]
        T = T[keep]
        basis = [basis[i] for i in keep]
        row_ids = [row_ids[i] for i in keep]
        T = np.hstack([T[:, :ncols], T[:, -1:]])
    cost2 = np.zeros(ncols)
    cost2[:n] = c
    cost2[n : 2 * n] = -c
    _bland_iterate(T, basis, cost2)
    z = np.zeros(ncols)
    for i, j in enumerate(basis):
        z[j] = T[i, -1]
    x = z[:n] - z[n : 2 * n]
    # duals y of the surviving equality rows, mapped back to inequality signs
    B = Ae[np.ix_(row_ids, basis)]
    y = np.linalg.solve(B.T, cost2[basis])
    full = np.zeros(m)
    for k, i in enumerate(row_ids):
        full[i] = y[k]
    mu = -flip * full
    mu[np.abs(mu) < 1e-13] = 0.0
    return LPResult(x=x, duals=mu, value=float(c @ x))
