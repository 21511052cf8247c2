"""Fundamental units of real quadratic fields by continued fractions.

The reduced quadratic irrational beta = omega + floor(-omega') (omega' the
conjugate of the integral-basis generator) has a purely periodic continued
fraction.  With convergent denominators q_k over one period of length l,
eps = q_{l-1} * beta + q_{l-2} is the fundamental unit > 1 of O_K.  All
steps run on exact integers via the (P + sqrt(m))/Q representation.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .quadfield import FieldElement, QuadraticField


_CACHE: dict[int, FieldElement] = {}


def fundamental_unit(F: QuadraticField) -> FieldElement:
    """Smallest unit > 1 of O_K for a real quadratic field."""
    if not F.is_real:
        raise ValueError("fundamental unit exists only for real quadratic fields")
    if F.m in _CACHE:
        return _CACHE[F.m]
    m = F.m
    s = math.isqrt(m)
    if F.half:
        # beta = omega + k with k = floor((sqrt(m) - 1)/2), i.e. (2k+1+sqrt(m))/2
        k = (s - 1) // 2
        P0, Q0 = 2 * k + 1, 2
    else:
        k = s
        P0, Q0 = k, 1  # beta = floor(sqrt(m)) + sqrt(m)
    assert (m - P0 * P0) % Q0 == 0
    partials: list[int] = []
    P, Q = P0, Q0
    while True:
        a = (P + s) // Q  # complete quotients stay reduced, so Q > 0 throughout
        partials.append(a)
        P = a * Q - P
        Q = (m - P * P) // Q
        if (P, Q) == (P0, Q0):
            break
    qm2, qm1 = 1, 0  # q_{-2}, q_{-1}
    for a in partials:
        qm2, qm1 = qm1, a * qm1 + qm2
    # eps = q_{l-1} * beta + q_{l-2} with beta = omega + k on the (1, omega) basis
    eps = FieldElement(F, Fraction(qm1 * k + qm2), Fraction(qm1))
    assert abs(eps.norm()) == 1, "continued fraction did not produce a unit"
    _CACHE[F.m] = eps
    return eps


def pell_brute_force(F: QuadraticField, limit: int = 10**6) -> FieldElement:
    """Independent oracle: smallest unit > 1 by direct coefficient search.

    Scans x = (a + b sqrt(m))/t (t = 2 on the half basis, else 1) in
    increasing b > 0 and returns the first solution of |a^2 - m b^2| = t^2,
    trying the smaller candidate a first.
    """
    if not F.is_real:
        raise ValueError("real quadratic fields only")
    m = F.m
    t = 2 if F.half else 1
    for b in range(1, limit):
        mb2 = m * b * b
        for target in (-t * t, t * t):
            a2 = mb2 + target
            if a2 <= 0:
                continue
            a = math.isqrt(a2)
            if a * a != a2:
                continue
            if F.half:
                if (a - b) % 2 != 0:
                    continue
                return FieldElement(F, Fraction(a - b, 2), Fraction(b))
            return FieldElement(F, Fraction(a), Fraction(b))
    raise RuntimeError(f"no unit found with b < {limit}")
