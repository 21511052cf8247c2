"""Minimax core: explicit feasibility boxes, sup-norm minimization over
generator exponents, and the degree-zero smallest-section pipeline.

The optimization is the linear program

    minimize t
    s.t.     sum_i a_i log|phi_i|_s - xi_s / 2 <= t      (one row per place)
             d_P + sum_i a_i ord_P(phi_i)      >= 0      (one row per prime)

whose optimal value exp(t*) is attained because the feasible exponent set
is convex and compact.  At degree zero the optimum is exactly 1; the
pipeline certifies this by collecting short sections at increasing depth,
forming the S-unit group of the collected support, and closing the
certificate with the LP.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import simplex
from .arithdiv import (
    ArithmeticDivisor,
    PowerProduct,
    deg_arith,
    is_effective,
    principal_divisor,
)
from .errors import DegreeNotZero, UndecidedAtDepth
from .minkowski import minkowski_constant, short_section
from .quadfield import PrimeIdeal, QuadraticField
from .units import s_unit_group

DUALITY_TOL = 1e-8


# ---------------------------------------------------------------------------
# Compactness boxes


def compactness_bounds(
    div: ArithmeticDivisor, primes: list[PrimeIdeal]
) -> dict[PrimeIdeal, tuple[float, float]]:
    """Per-prime interval certain to contain every feasible perturbation.

    Perturbing div by sum_P a_P (P, -2 log N(P)/[K:Q]) keeps effectivity
    only if  -d_P <= a_P <= (sum_s xi_s / 2 + sum_{P' != P} d_P' log N(P'))
    / log N(P); any vector with a coordinate outside its interval is
    infeasible.
    """
    half_green = 0.5 * (div.green[0] + div.green[1])
    logs = {P: P.log_norm() for P in primes}
    d = {P: float(div.coeffs.get(P, 0)) for P in primes}
    extra = {P: float(c) * P.log_norm() for P, c in div.coeffs.items()}
    total_extra = sum(extra.values())
    out = {}
    for P in primes:
        upper = (half_green + total_extra - extra.get(P, 0.0)) / logs[P]
        out[P] = (-d[P], upper)
    return out


def perturbation_feasible(
    div: ArithmeticDivisor, primes: list[PrimeIdeal], a, tol: float = 1e-12
) -> bool:
    """Whether div + sum a_P * (P, -2 log N(P)/[K:Q]) stays effective."""
    a = {P: float(v) for P, v in zip(primes, a)}
    for P, v in a.items():
        if float(div.coeffs.get(P, 0)) + v < -tol:
            return False
    shift = sum(v * P.log_norm() for P, v in a.items()) * 2.0 / div.field.degree
    return all(g - shift >= -tol for g in div.green)


# ---------------------------------------------------------------------------
# The minimax LP


@dataclass(frozen=True)
class MinimaxProblem:
    div: ArithmeticDivisor
    gens: tuple[PowerProduct, ...]
    primes: tuple[PrimeIdeal, ...]
    ord_matrix: tuple[tuple[float, ...], ...]  # rows: primes, cols: gens
    log_matrix: tuple[tuple[float, ...], ...]  # rows: places, cols: gens


def build_problem(div: ArithmeticDivisor, gens) -> MinimaxProblem:
    gens = tuple(gens)
    primes: dict[PrimeIdeal, None] = {}
    for P in div.support():
        primes.setdefault(P, None)
    for g in gens:
        for P in g.support():
            primes.setdefault(P, None)
    primes = tuple(sorted(primes))
    V = tuple(tuple(float(g.ord_at(P)) for g in gens) for P in primes)
    L = tuple(tuple(g.log_abs(s) for g in gens) for s in (0, 1))
    return MinimaxProblem(div=div, gens=gens, primes=primes, ord_matrix=V, log_matrix=L)


@dataclass
class MinimaxSolution:
    a_star: np.ndarray
    log_value: float
    active_set: list[str]
    residuals: dict = field(default_factory=dict)

    @property
    def value(self) -> float:
        return math.exp(self.log_value)


def _lp_data(problem: MinimaxProblem):
    l = len(problem.gens)
    rows = []
    rhs = []
    names = []
    for s in (0, 1):
        rows.append(list(problem.log_matrix[s]) + [-1.0])
        rhs.append(problem.div.green[s] / 2.0)
        names.append(f"sigma{s}")
    for P, Vrow in zip(problem.primes, problem.ord_matrix):
        rows.append([-v for v in Vrow] + [0.0])
        rhs.append(float(problem.div.coeffs.get(P, 0)))
        names.append(f"P({P.p},{P.index})")
    c = [0.0] * l + [1.0]
    return np.array(rows), np.array(rhs), np.array(c), names


def _polish(A, b, c, x, names):
    """Re-solve the tight rows as equalities to sharpen the vertex."""
    resid = A @ x - b
    active = [i for i in range(len(b)) if resid[i] > -1e-7]
    if not active:
        return x
    sol, *_ = np.linalg.lstsq(A[active], b[active], rcond=None)
    if np.all(A @ sol - b <= 1e-10) and c @ sol <= c @ x + 1e-10:
        return sol
    return x


def minimize_sup(problem: MinimaxProblem, tol: float = DUALITY_TOL) -> MinimaxSolution:
    """Solve the sup-norm LP and certify the optimum by duality.

    Raises Infeasible when no exponent vector keeps the divisor effective,
    Unbounded only on inputs without the degree-zero structure.
    """
    A, b, c, names = _lp_data(problem)
    res = simplex.solve_inequality_lp(c, A, b)
    x = _polish(A, b, c, res.x, names)
    scale = 1.0 + float(np.abs(b).max(initial=0.0))
    primal_resid = float(np.max(A @ x - b, initial=0.0))
    dual_feas = float(np.max(-res.duals, initial=0.0))
    stationarity = float(np.abs(A.T @ res.duals + c).max())
    gap = abs(float(c @ x) + float(b @ res.duals))
    residuals = {
        "primal": max(primal_resid, 0.0),
        "dual": max(dual_feas, 0.0),
        "stationarity": stationarity,
        "gap": gap,
    }
    worst = max(residuals["primal"] / scale, residuals["dual"],
                stationarity, gap / scale)
    if worst > tol:
        raise RuntimeError(f"LP certificate failed: {residuals}")
    resid = A @ x - b
    active = [names[i] for i in range(len(names)) if resid[i] > -1e-7 * scale]
    return MinimaxSolution(
        a_star=x[:-1], log_value=float(x[-1]), active_set=active, residuals=residuals
    )


# ---------------------------------------------------------------------------
# Degree-zero pipeline


@dataclass
class PipelineResult:
    psi: PowerProduct
    solution: MinimaxSolution
    sigma: tuple[PrimeIdeal, ...]
    sections: list
    depth: int


def _scaled_integral(div: ArithmeticDivisor) -> tuple[ArithmeticDivisor, int]:
    k = 1
    for c in div.coeffs.values():
        if not isinstance(c, Fraction):
            raise DegreeNotZero("pipeline requires exact rational coefficients")
        k = k * c.denominator // math.gcd(k, c.denominator)
    return div * k, k


def smallest_section_pipeline(
    div: ArithmeticDivisor,
    depth: int = 8,
    tol: float = DUALITY_TOL,
    deg_tol: float = 1e-7,
    threads: int = 1,
) -> PipelineResult:
    """Produce psi with div + (psi) effective when deg(div) = 0.

    Collects short sections of n * (scaled div + Minkowski green bonus) for
    n = 1..depth, forms the S-unit group on the union of supports, and
    minimizes the sup norm over its exponents.  The certificate is
    exp(t*) <= 1 + tol; if it does not close at this depth the outcome is
    reported as undecided rather than guessed.
    """
    F = div.field
    if abs(deg_arith(div)) > deg_tol:
        raise DegreeNotZero(f"deg = {deg_arith(div):.3e}")
    scaled, _ = _scaled_integral(div)
    ck = minkowski_constant(F).value
    bonus = 2.0 * ck / F.degree

    def section_at(n: int):
        coeffs = {P: c * n for P, c in scaled.coeffs.items()}
        green = tuple(n * g + bonus for g in scaled.green)
        return short_section(ArithmeticDivisor(F, coeffs, green))

    ns = range(1, depth + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            sections = list(ex.map(section_at, ns))
    else:
        sections = [section_at(n) for n in ns]
    sigma: dict[PrimeIdeal, None] = {P: None for P in div.support()}
    for x in sections:
        for P in PowerProduct.of(x).support():
            sigma.setdefault(P, None)
    su = s_unit_group(F, tuple(sigma))
    gens = tuple(PowerProduct.of(g) for g in su.generators)
    problem = build_problem(div, gens)
    solution = minimize_sup(problem, tol)
    if solution.log_value > math.log1p(tol):
        raise UndecidedAtDepth(depth, solution.log_value)
    psi = PowerProduct(
        F,
        [
            (g, float(a))
            for g, a in zip(su.generators, solution.a_star)
            if abs(a) > 1e-15
        ],
    )
    return PipelineResult(
        psi=psi, solution=solution, sigma=su.sigma, sections=sections, depth=depth
    )


# ---------------------------------------------------------------------------
# Pseudo-effectivity decision


@dataclass
class Decision:
    status: str  # "NOT" or "PSEUDO_EFFECTIVE"
    witness: PowerProduct | None
    degree: float
    residual: float | None = None


def decide_pseudoeffective(
    div: ArithmeticDivisor,
    depth: int = 8,
    tol: float = DUALITY_TOL,
    threads: int = 1,
) -> Decision:
    """NOT when deg < 0; otherwise a verified witness of effectivity.

    The witness is produced by lowering the green vector by the constant
    2 deg / [K:Q] (making the degree zero) and running the pipeline; adding
    the constant back only helps effectivity.
    """
    degree = deg_arith(div)
    if degree < -tol:
        return Decision(status="NOT", witness=None, degree=degree)
    shift = 2.0 * degree / div.field.degree
    shifted = ArithmeticDivisor(
        div.field, div.coeffs, tuple(g - shift for g in div.green)
    )
    result = smallest_section_pipeline(shifted, depth=depth, tol=tol, threads=threads)
    witness = result.psi
    final = div + principal_divisor(witness)
    assert is_effective(final, max(1e-9, 2.0 * tol)), "witness failed re-verification"
    finite_min = min(
        (float(c) for c in final.coeffs.values()), default=0.0
    )
    residual = min(finite_min, min(final.green))
    return Decision(
        status="PSEUDO_EFFECTIVE", witness=witness, degree=degree, residual=residual
    )
