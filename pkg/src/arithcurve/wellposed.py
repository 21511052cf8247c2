"""Weighted Gram analysis of monomial sections on the projective line,
rotation-invariant weights only.

A radial model is a pair (a, b): the weight profile a(r) and the radial
density b(r), normalised so that the measure 2 r b(r) dr integrates to 1.
Monomials z^k are pairwise orthogonal under any such model (the angular
integral of distinct characters vanishes identically), so the Gram matrix
of degree n is diagonal with entries

    <z^k, z^k> = int_0^inf 2 r^(2k+1) exp(-n a(r)) b(r) dr,

computed by adaptive quadrature on the log-radius axis.  The module also
provides angle profiles, the three-condition generator report, subadditive
(Fekete) limits and smallest-monomial scans.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from .errors import QuadratureFailure

QUADRATURE_TOL = 1e-11


@dataclass(frozen=True)
class RadialModel:
    """Radial weight profile a(r) and density b(r) with unit total mass."""

    green: Callable[[float], float]
    density: Callable[[float], float]
    n_max: int = 40
    name: str = "custom"

    def __post_init__(self):
        mass = _radial_integral(0.0, self, 0)
        if abs(mass - 1.0) > 1e-10:
            raise ValueError(f"density mass {mass!r} != 1")


def fubini_study(n_max: int = 40) -> RadialModel:
    """a(r) = log(1 + r^2), b(r) = (1 + r^2)^-2."""
    return RadialModel(
        green=lambda r: math.log1p(r * r),
        density=lambda r: (1.0 + r * r) ** -2,
        n_max=n_max,
        name="fubini-study",
    )


def radial_table_model(table: Sequence[tuple[float, float]], n_max: int = 40) -> RadialModel:
    """Green profile interpolated linearly from (r, a(r)) pairs, FS density.

    Beyond the last table point the profile continues with the final
    segment's slope (a flat tail would make high-degree entries divergent).
    """
    rs = np.array([p[0] for p in table], dtype=float)
    vals = np.array([p[1] for p in table], dtype=float)
    if len(rs) < 2 or np.any(np.diff(rs) <= 0):
        raise ValueError("table radii must increase, need at least two points")
    tail_slope = (vals[-1] - vals[-2]) / (rs[-1] - rs[-2])

    def green(r: float) -> float:
        if r > rs[-1]:
            return float(vals[-1] + tail_slope * (r - rs[-1]))
        return float(np.interp(r, rs, vals))

    return RadialModel(
        green=green,
        density=lambda r: (1.0 + r * r) ** -2,
        n_max=n_max,
        name="table",
    )


def _radial_integral(power2: float, model: RadialModel, n: int,
                     tol: float = QUADRATURE_TOL) -> float:
    """int_0^inf r^power2 * 2 r exp(-n a(r)) b(r) dr on the log-r axis.

    The integrand is assembled in log space, so monomial powers never
    overflow; the value is cross-checked by integrating the two half-axes
    separately against the joint integral.
    """

    def integrand(t: float) -> float:
        try:
            r = math.exp(t)
            dens = model.density(r)
            if dens <= 0.0:
                return 0.0
            ng = n * model.green(r) if n else 0.0
            L = (power2 + 2.0) * t - ng + math.log(2.0 * dens)
        except OverflowError:
            # astronomically large r probed by the endpoint transform
            return 0.0
        if L < -745.0:
            return 0.0
        try:
            return math.exp(L)
        except OverflowError:
            return float("inf")

    total = 0.0
    err = 0.0
    for lo, hi in ((-np.inf, 0.0), (0.0, np.inf)):
        v, e = quad(integrand, lo, hi, epsabs=1e-300, epsrel=1e-13, limit=400)
        total += v
        err += e
    check, _ = quad(integrand, -np.inf, np.inf, epsabs=1e-300, epsrel=1e-13, limit=400)
    scale = max(abs(total), abs(check), 1e-300)
    if abs(total - check) > tol * scale or err > max(tol, 1e-8) * scale:
        raise QuadratureFailure(
            f"split/joint quadratures disagree: {total!r} vs {check!r}"
        )
    return total


@dataclass(frozen=True)
class GramSystem:
    n: int
    sigma_n: tuple[int, ...]
    gram: np.ndarray

    def __post_init__(self):
        G = np.asarray(self.gram, dtype=float)
        object.__setattr__(self, "gram", G)

    def is_positive_definite(self) -> bool:
        try:
            np.linalg.cholesky(self.gram)
            return True
        except np.linalg.LinAlgError:
            return False


def gram_matrix(model: RadialModel, n: int, tol: float = QUADRATURE_TOL) -> GramSystem:
    """Diagonal Gram matrix of the monomials of degree n.

    Off-diagonal entries are exactly zero: the angular factor of
    <z^k, z^j> is the integral of a nontrivial character for k != j.
    """
    if n > model.n_max:
        raise ValueError(f"n={n} exceeds n_max={model.n_max}")
    diag = [_radial_integral(2.0 * k, model, n, tol) for k in range(n + 1)]
    return GramSystem(n=n, sigma_n=tuple(range(n + 1)), gram=np.diag(diag))


def sin_theta_profile(G: GramSystem) -> dict[int, float]:
    """sin of the angle between each basis vector and the span of the rest.

    Computed through log-determinant ratios vol(S) / (|v_A| vol(S - A));
    orthogonal bases give exactly 1, a dependent index gives 0.
    """
    M = G.gram
    n = M.shape[0]
    sign, logdet = np.linalg.slogdet(M)
    out = {}
    for i, key in enumerate(G.sigma_n):
        if sign <= 0:
            out[key] = 0.0
            continue
        rest = [j for j in range(n) if j != i]
        sub = M[np.ix_(rest, rest)]
        s2, ld2 = np.linalg.slogdet(sub) if rest else (1.0, 0.0)
        if s2 <= 0:
            out[key] = 0.0
            continue
        log_sin = 0.5 * (logdet - ld2) - 0.5 * math.log(M[i, i])
        out[key] = min(math.exp(log_sin), 1.0)
    return out


@dataclass
class WellposedReport:
    n_values: list[int]
    basis_ok: list[bool]
    lattice_index: list[int]
    min_sin_theta: list[float]
    min_sin_root: list[float]  # min_A sin(theta_A)^(1/n)
    liminf_estimate: float
    conditions: dict[str, bool]
    note: str = (
        "finite-n evidence only: the generator conditions quantify over all n"
    )


def report_from_grams(grams: list[GramSystem], tol: float = 1e-9) -> WellposedReport:
    ns, ok, idx, msin, mroot = [], [], [], [], []
    for G in grams:
        ns.append(G.n)
        ok.append(G.is_positive_definite())
        # monomials are a free basis of the degree-n sections over Z, index 1
        idx.append(1)
        prof = sin_theta_profile(G)
        mn = min(prof.values()) if prof else 1.0
        msin.append(mn)
        mroot.append(mn ** (1.0 / G.n) if G.n > 0 else mn)
    # infimum over the tail half: insensitive to small-n transients
    liminf = min(mroot[len(mroot) // 2 :]) if mroot else 1.0
    conditions = {
        "basis": all(ok),
        "integral_index": all(v == 1 for v in idx),
        "volume_ratio": liminf >= 1.0 - tol,
    }
    return WellposedReport(
        n_values=ns,
        basis_ok=ok,
        lattice_index=idx,
        min_sin_theta=msin,
        min_sin_root=mroot,
        liminf_estimate=liminf,
        conditions=conditions,
    )


def wellposed_report(model: RadialModel, n_range,
                     quad_tol: float = QUADRATURE_TOL) -> WellposedReport:
    """Evaluate the three generator conditions for degrees in n_range."""
    grams = [gram_matrix(model, n, quad_tol) for n in n_range if n >= 1]
    return report_from_grams(grams)


@dataclass
class FeketeResult:
    limit: float
    violations: list[tuple[int, int, float]]


def fekete_limit(seq: Sequence[float], tol: float = 1e-9) -> FeketeResult:
    """inf_n a_n^(1/n) over the window, flagging submultiplicativity failures.

    seq[i] is a_{i+1}; a violation is a pair (n, n') with
    a_{n+n'} > a_n * a_{n'} beyond relative tolerance.
    """
    a = list(seq)
    if any(v <= 0 for v in a):
        raise ValueError("sequence must be strictly positive")
    N = len(a)
    limit = min(a[n - 1] ** (1.0 / n) for n in range(1, N + 1))
    violations = []
    for n in range(1, N + 1):
        for m in range(n, N + 1 - n):
            if a[n + m - 1] > a[n - 1] * a[m - 1] * (1.0 + tol):
                violations.append((n, m, a[n + m - 1] / (a[n - 1] * a[m - 1]) - 1.0))
    return FeketeResult(limit=limit, violations=violations)


def sup_norm_monomial(model: RadialModel, n: int, x: float) -> float:
    """sup over r of r^x exp(-n a(r) / 2), by grid scan plus local refinement."""

    def neg_log_value(t: float) -> float:
        r = math.exp(t)
        return -(x * t - 0.5 * n * model.green(r))

    ts = np.linspace(-30.0, 30.0, 2001)
    vals = [neg_log_value(t) for t in ts]
    i = int(np.argmin(vals))
    lo = ts[max(i - 1, 0)]
    hi = ts[min(i + 1, len(ts) - 1)]
    res = minimize_scalar(neg_log_value, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    best = min(res.fun, vals[i])
    return math.exp(-best)


@dataclass
class MonomialScan:
    k_star: int
    integer_norm: float
    x_star: float
    real_norm: float


def smallest_monomial_scan(model: RadialModel, n: int) -> MonomialScan:
    """Minimal sup norm over integer monomial exponents, and over real ones.

    The continuous optimum over x in [0, n] is never larger than the
    integer optimum; both are returned.
    """
    if n == 0:
        return MonomialScan(k_star=0, integer_norm=1.0, x_star=0.0, real_norm=1.0)
    norms = [sup_norm_monomial(model, n, k) for k in range(n + 1)]
    k_star = int(np.argmin(norms))
    res = minimize_scalar(
        lambda x: sup_norm_monomial(model, n, x),
        bounds=(0.0, float(n)),
        method="bounded",
        options={"xatol": 1e-10},
    )
    real_norm = min(float(res.fun), norms[k_star])
    return MonomialScan(
        k_star=k_star,
        integer_norm=norms[k_star],
        x_star=float(res.x),
        real_norm=real_norm,
    )
