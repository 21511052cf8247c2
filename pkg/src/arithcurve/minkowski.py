"""Geometry-of-numbers layer: short sections, bounded-degree divisors,
class-group reduction.

The threshold constant is C_K = log((2/pi)^r2 sqrt(|disc|)).  Whenever an
arithmetic divisor has degree at least C_K, the lattice of its inverse
finite-part ideal meets the archimedean box cut out by the green vector in
a nonzero point; enumerating that box realizes the existence statement
constructively.  Degree comparisons against C_K are decided exactly (real
fields: integer comparison; imaginary: two-sided rational bounds on pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import sympy

from . import pell
from .arithdiv import ArithmeticDivisor, PowerProduct, is_effective, principal_divisor
from .errors import BoundExceeded, SearchExhausted
from .lattice import enumerate_points
from .quadfield import (
    FieldElement,
    FractionalIdeal,
    PrimeIdeal,
    QuadraticField,
    abs_embed,
    primes_over,
    principal_ideal,
    support_primes,
    valuation,
)

# pi is irrational, so two correctly rounded decimal bounds decide every
# comparison of an integer against (2/pi)^(2*r2) * |disc| exactly
_PI_LO = Fraction(31415926535897932, 10**16)
_PI_HI = Fraction(31415926535897933, 10**16)


@dataclass(frozen=True)
class MinkowskiConstant:
    value: float
    r2: int
    abs_disc: int


def minkowski_constant(F: QuadraticField) -> MinkowskiConstant:
    """C_K = log((2/pi)^r2 sqrt(|disc|))."""
    value = F.r2 * math.log(2.0 / math.pi) + 0.5 * math.log(abs(F.disc))
    return MinkowskiConstant(value=value, r2=F.r2, abs_disc=abs(F.disc))


def _deg_le_ck(F: QuadraticField, norm_product: int) -> bool:
    """Exact test: sum e_P log N(P) <= C_K, with norm_product = prod N(P)^e_P."""
    M2 = norm_product * norm_product
    if F.r2 == 0:
        return M2 <= abs(F.disc)
    lhs_hi = M2 * _PI_HI * _PI_HI
    lhs_lo = M2 * _PI_LO * _PI_LO
    rhs = 4 * abs(F.disc)
    if lhs_hi <= rhs:
        return True
    if lhs_lo > rhs:
        return False
    raise RuntimeError("pi bounds too coarse to decide Theta membership")


@dataclass(frozen=True)
class ThetaSet:
    field: QuadraticField
    divisors: tuple


def _theta_prime_pool(F: QuadraticField) -> list[PrimeIdeal]:
    """Primes whose single copy already satisfies the degree bound."""
    ck = minkowski_constant(F).value
    pool = []
    p = 2
    while p <= math.exp(ck) + 1:
        if sympy.isprime(p):
            for P in primes_over(F, p):
                if _deg_le_ck(F, P.residue_norm):
                    pool.append(P)
        p += 1
    return pool


def enumerate_theta(F: QuadraticField) -> ThetaSet:
    """All effective integral divisors of degree at most C_K."""
    pool = _theta_prime_pool(F)
    results: list[dict[PrimeIdeal, Fraction]] = []

    def extend(idx: int, current: dict, norm_product: int):
        results.append(dict(current))
        for i in range(idx, len(pool)):
            P = pool[i]
            np_next = norm_product * P.residue_norm
            if not _deg_le_ck(F, np_next):
                continue
            current[P] = current.get(P, Fraction(0)) + 1
            extend(i, current, np_next)
            current[P] -= 1
            if current[P] == 0:
                del current[P]

    extend(0, {}, 1)
    divisors = tuple(
        sorted(
            (ArithmeticDivisor(F, c, (0.0, 0.0)) for c in results),
            key=_divisor_sort_key,
        )
    )
    return ThetaSet(field=F, divisors=divisors)


def _divisor_sort_key(div: ArithmeticDivisor):
    items = tuple((P.p, P.index, float(c)) for P, c in sorted(div.coeffs.items()))
    return (len(items), items)


def short_section(div: ArithmeticDivisor, tol: float = 1e-9) -> FieldElement:
    """Nonzero x with div + (x) effective; divisor coefficients integral.

    Enumerates the ideal prod P^(-d_P) inside the box |x|_s <= exp(xi_s/2)
    and returns the candidate of smallest certificate sup norm (ties broken
    by |N(x)| and coordinates, so the result is deterministic).
    """
    F = div.field
    I = FractionalIdeal.unit_ideal(F)
    for P, c in div.coeffs.items():
        c = Fraction(c) if not isinstance(c, Fraction) else c
        if c.denominator != 1:
            raise ValueError("short_section needs integral coefficients")
        I = I * P.ideal ** (-int(c))
    radii = (math.exp(div.green[0] / 2.0), math.exp(div.green[1] / 2.0))
    candidates = enumerate_points(I, radii)
    best = None
    best_key = None
    for x in candidates:
        cand = div + principal_divisor(PowerProduct.of(x))
        if not is_effective(cand, tol):
            continue
        vals = abs_embed(F, x)
        cert = max(math.log(vals[s]) - div.green[s] / 2.0 for s in (0, 1))
        key = (cert, abs(x.norm()), x.a, x.b)
        if best_key is None or key < best_key:
            best, best_key = x, key
    if best is None:
        raise SearchExhausted(
            "no lattice point in the archimedean box; "
            "degree below the Minkowski threshold or malformed input"
        )
    return best


def reduce_to_theta(F: QuadraticField, div: ArithmeticDivisor) -> tuple[FieldElement, ArithmeticDivisor]:
    """x and E = D + (x) with E in Theta, via the canonical green choice."""
    from .arithdiv import deg_finite

    ck = minkowski_constant(F).value
    c = 2.0 * (ck - deg_finite(div.coeffs)) / F.degree
    lifted = ArithmeticDivisor(F, div.coeffs, (c, c))
    x = short_section(lifted)
    finite = dict(div.coeffs)
    for P in set(support_primes(x)) | set(finite):
        v = valuation(P, x)
        newc = Fraction(finite.get(P, 0)) + v
        if newc == 0:
            finite.pop(P, None)
        else:
            finite[P] = newc
    E = ArithmeticDivisor(F, finite, (0.0, 0.0))
    norm_product = 1
    for P, cc in E.coeffs.items():
        assert cc == int(cc) and cc > 0
        norm_product *= P.residue_norm ** int(cc)
    assert _deg_le_ck(F, norm_product), "reduction left Theta"
    return x, E


# ---------------------------------------------------------------------------
# Principality and the class group


def _unit_strip_radii(F: QuadraticField, norm: int) -> tuple[float, float]:
    root = math.sqrt(float(norm))
    if F.is_real:
        eps = pell.fundamental_unit(F)
        lam = math.log(abs_embed(F, eps)[0])
        r = root * math.exp(lam / 2.0) * (1.0 + 1e-9)
        return (r, r)
    r = root * (1.0 + 1e-9)
    return (r, r)


def principal_generator(I: FractionalIdeal) -> FieldElement | None:
    """A generator of I if I is principal, else None.

    Integral case: any generator can be moved by units into the box
    |x|_s <= sqrt(N) * eps^(1/2) (real; the fundamental-unit strip) or onto
    the circle |x| = sqrt(N) (imaginary), so enumerating that box and
    testing (x) = I exactly by HNF comparison decides principality.
    """
    F = I.field
    J = I.scale_rational(I.den) if I.den != 1 else I
    norm = int(J.norm())
    for x in enumerate_points(J, _unit_strip_radii(F, norm)):
        if abs(x.norm()) == norm and principal_ideal(x) == J:
            return x * Fraction(1, I.den)
    return None


def is_principal_divisor_difference(E1: ArithmeticDivisor, E2: ArithmeticDivisor) -> bool:
    """Whether E1 - E2 is the divisor of a field element."""
    F = E1.field
    I = FractionalIdeal.unit_ideal(F)
    coeffs = dict(E1.coeffs)
    for P, c in E2.coeffs.items():
        coeffs[P] = Fraction(coeffs.get(P, 0)) - Fraction(c)
    for P, c in coeffs.items():
        if c.denominator != 1:
            return False
        I = I * P.ideal ** int(c)
    return principal_generator(I) is not None


def class_group(F: QuadraticField, bound: int = 500) -> tuple[int, list[ArithmeticDivisor]]:
    """Class number and Theta-representatives of the ideal classes."""
    if abs(F.disc) > bound:
        raise BoundExceeded(f"|disc|={abs(F.disc)} exceeds bound {bound}")
    theta = enumerate_theta(F).divisors
    reps: list[ArithmeticDivisor] = []
    for E in theta:
        if not any(is_principal_divisor_difference(E, R) for R in reps):
            reps.append(E)
    return len(reps), reps
