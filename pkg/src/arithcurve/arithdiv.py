"""Arithmetic R-divisors on Spec(O_K) and formal power products.

A divisor is a pair (D, xi): a finite map from prime ideals to real (or
exact rational) coefficients plus one real archimedean component per
embedding, invariant under complex conjugation.  A PowerProduct is a formal
product prod x_i^{e_i} of nonzero field elements with real exponents; its
valuations and log absolute values extend those of the factors linearly.

Degrees, effectivity, sup and L^p norms follow the standard normalisation
deg(D, xi) = sum d_P log #(O_K/P) + (1/2) sum_s xi_s, under which principal
divisors have degree zero (product formula).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import NotConjugationInvariant, NotInGamma, ZeroElement
from .quadfield import (
    FieldElement,
    PrimeIdeal,
    QuadraticField,
    log_embed,
    support_primes,
    valuation,
)

EFFECTIVITY_TOL = 1e-9


class PowerProduct:
    """Formal product prod x_i^{e_i}, x_i nonzero field elements, e_i real.

    Only homomorphic images (valuations, log absolute values) are exposed;
    equality of formal products is not decidable from floating exponents.
    Construction merges repeated bases when both exponents are exact.
    """

    __slots__ = ("field", "factors")

    def __init__(self, field: QuadraticField, factors: Sequence[tuple[FieldElement, object]]):
        merged: list[tuple[FieldElement, object]] = []
        index: dict[FieldElement, int] = {}
        for x, e in factors:
            if x.is_zero():
                raise ZeroElement("zero base in a power product")
            if isinstance(e, int):
                e = Fraction(e)
            if isinstance(e, Fraction) and x in index:
                i = index[x]
                old = merged[i][1]
                if isinstance(old, Fraction):
                    merged[i] = (x, old + e)
                    continue
            if isinstance(e, Fraction):
                index.setdefault(x, len(merged))
            merged.append((x, e))
        merged = [(x, e) for x, e in merged if not (isinstance(e, Fraction) and e == 0)]
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "factors", tuple(merged))

    def __setattr__(self, *args):
        raise AttributeError("PowerProduct is immutable")

    @staticmethod
    def one(field: QuadraticField) -> "PowerProduct":
        return PowerProduct(field, [])

    @staticmethod
    def of(x: FieldElement, e=1) -> "PowerProduct":
        return PowerProduct(x.field, [(x, e)])

    def __mul__(self, other: "PowerProduct") -> "PowerProduct":
        return PowerProduct(self.field, list(self.factors) + list(other.factors))

    def __pow__(self, c) -> "PowerProduct":
        if isinstance(c, int):
            c = Fraction(c)
        scaled = []
        for x, e in self.factors:
            if isinstance(e, Fraction) and isinstance(c, Fraction):
                scaled.append((x, e * c))
            else:
                scaled.append((x, float(e) * float(c)))
        return PowerProduct(self.field, scaled)

    def is_exact(self) -> bool:
        return all(isinstance(e, Fraction) for _, e in self.factors)

    def ord_at(self, P: PrimeIdeal):
        """ord_P extended linearly over the factors (exact when exponents are)."""
        total = Fraction(0) if self.is_exact() else 0.0
        for x, e in self.factors:
            total += e * valuation(P, x)
        return total

    def log_abs(self, sigma: int) -> float:
        return sum(float(e) * log_embed(self.field, x)[sigma] for x, e in self.factors)

    def support(self) -> list[PrimeIdeal]:
        seen: dict[PrimeIdeal, None] = {}
        for x, _ in self.factors:
            for P in support_primes(x):
                seen.setdefault(P, None)
        return sorted(P for P in seen if abs(float(self.ord_at(P))) > 0)

    def __repr__(self) -> str:
        return " * ".join(f"{x!r}^{e}" for x, e in self.factors) or "1"


class ArithmeticDivisor:
    """(D, xi): finite coefficients on prime ideals + archimedean vector."""

    __slots__ = ("field", "coeffs", "green")

    def __init__(self, field: QuadraticField, coeffs: Mapping[PrimeIdeal, object],
                 green: Sequence[float], tol: float = EFFECTIVITY_TOL):
        green = tuple(float(g) for g in green)
        if len(green) != 2:
            raise ValueError("expected one archimedean component per embedding")
        if not field.is_real and abs(green[0] - green[1]) > tol:
            raise NotConjugationInvariant(
                f"xi must satisfy xi_s = xi_sbar: {green}"
            )
        cleaned = {}
        for P, c in coeffs.items():
            if isinstance(c, (int, Fraction)):
                c = Fraction(c)
                if c == 0:
                    continue
            elif c == 0.0:
                continue
            cleaned[P] = c
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", cleaned)
        object.__setattr__(self, "green", green)

    def __setattr__(self, *args):
        raise AttributeError("ArithmeticDivisor is immutable")

    @staticmethod
    def zero(field: QuadraticField) -> "ArithmeticDivisor":
        return ArithmeticDivisor(field, {}, (0.0, 0.0))

    @staticmethod
    def green_only(field: QuadraticField, green) -> "ArithmeticDivisor":
        return ArithmeticDivisor(field, {}, green)

    def support(self) -> list[PrimeIdeal]:
        return sorted(self.coeffs)

    def __add__(self, other: "ArithmeticDivisor") -> "ArithmeticDivisor":
        coeffs = dict(self.coeffs)
        for P, c in other.coeffs.items():
            if P in coeffs:
                a, b = coeffs[P], c
                if isinstance(a, Fraction) and isinstance(b, Fraction):
                    s = a + b
                else:
                    s = float(a) + float(b)
                if s == 0:
                    del coeffs[P]
                else:
                    coeffs[P] = s
            else:
                coeffs[P] = c
        green = (self.green[0] + other.green[0], self.green[1] + other.green[1])
        return ArithmeticDivisor(self.field, coeffs, green)

    def __neg__(self) -> "ArithmeticDivisor":
        return self * -1

    def __sub__(self, other: "ArithmeticDivisor") -> "ArithmeticDivisor":
        return self + (-other)

    def __mul__(self, c) -> "ArithmeticDivisor":
        if isinstance(c, int):
            c = Fraction(c)
        coeffs = {}
        for P, v in self.coeffs.items():
            if isinstance(v, Fraction) and isinstance(c, Fraction):
                coeffs[P] = v * c
            else:
                coeffs[P] = float(v) * float(c)
        return ArithmeticDivisor(
            self.field, coeffs, (float(c) * self.green[0], float(c) * self.green[1])
        )

    __rmul__ = __mul__

    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs.values())

    def __repr__(self) -> str:
        return f"Divisor({dict(self.coeffs)}, xi={self.green})"


def deg_finite(coeffs: Mapping[PrimeIdeal, object]) -> float:
    """deg of the finite part: sum d_P log #(O_K/P)."""
    return sum(float(c) * P.log_norm() for P, c in coeffs.items())


def deg_arith(div: ArithmeticDivisor) -> float:
    """deg_finite plus half the sum of the archimedean components."""
    return deg_finite(div.coeffs) + 0.5 * (div.green[0] + div.green[1])


def principal_divisor(phi: PowerProduct) -> ArithmeticDivisor:
    """The divisor of a power product: valuations plus -log|phi|^2 green part."""
    coeffs: dict[PrimeIdeal, object] = {}
    for P in phi.support():
        coeffs[P] = phi.ord_at(P)
    green = (-2.0 * phi.log_abs(0), -2.0 * phi.log_abs(1))
    return ArithmeticDivisor(phi.field, coeffs, green)


def is_effective(div: ArithmeticDivisor, tol: float = EFFECTIVITY_TOL) -> bool:
    """All finite coefficients and archimedean components nonnegative.

    Exact rational coefficients are tested exactly; floats within tol.
    """
    for c in div.coeffs.values():
        if isinstance(c, Fraction):
            if c < 0:
                return False
        elif c < -tol:
            return False
    return all(g >= -tol for g in div.green)


def gamma_member(phi: PowerProduct, coeffs: Mapping[PrimeIdeal, object],
                 tol: float = EFFECTIVITY_TOL) -> bool:
    """Whether D + (phi) >= 0 on the finite part."""
    primes = set(coeffs) | set(phi.support())
    for P in primes:
        total = phi.ord_at(P)
        c = coeffs.get(P, 0)
        if isinstance(total, Fraction) and isinstance(c, (int, Fraction)):
            if total + c < 0:
                return False
        elif float(total) + float(c) < -tol:
            return False
    return True


def gammahat_member(phi: PowerProduct, div: ArithmeticDivisor,
                    tol: float = EFFECTIVITY_TOL) -> bool:
    """Membership in the norm-at-most-one part of the linear system."""
    if not gamma_member(phi, div.coeffs, tol):
        return False
    return sup_norm(phi, div, tol) <= 1.0 + tol


def _place_logs(phi: PowerProduct, div: ArithmeticDivisor) -> list[float]:
    return [phi.log_abs(s) - div.green[s] / 2.0 for s in (0, 1)]


def sup_norm(phi: PowerProduct, div: ArithmeticDivisor,
             tol: float = EFFECTIVITY_TOL) -> float:
    """max over embeddings of |phi| e^(-xi/2); phi must lie in the system."""
    if not gamma_member(phi, div.coeffs, tol):
        raise NotInGamma("D + (phi) is not effective")
    return math.exp(max(_place_logs(phi, div)))


def lp_norm(phi: PowerProduct, div: ArithmeticDivisor, p: float,
            weights: Sequence[float] | None = None,
            tol: float = EFFECTIVITY_TOL) -> float:
    """(sum_s w_s (|phi| e^(-xi/2))_s^p)^(1/p) with probability weights w.

    Defaults to uniform weights 1/[K:Q]; evaluated in log space so large p
    does not overflow.
    """
    if not gamma_member(phi, div.coeffs, tol):
        raise NotInGamma("D + (phi) is not effective")
    if p < 1:
        raise ValueError("p >= 1 required")
    if weights is None:
        weights = (0.5, 0.5)
    if len(weights) != 2 or any(w <= 0 for w in weights):
        raise ValueError("weights must be positive, one per embedding")
    total = sum(weights)
    logs = _place_logs(phi, div)
    terms = [math.log(w / total) + p * L for w, L in zip(weights, logs)]
    return math.exp(np.logaddexp(terms[0], terms[1]) / p)
