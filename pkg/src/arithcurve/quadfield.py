"""Exact arithmetic in quadratic number fields K = Q(sqrt(m)).

Elements live on the integral basis (1, omega) with exact rational
coordinates, where omega = sqrt(m) for m = 2, 3 (mod 4) and
omega = (1 + sqrt(m))/2 for m = 1 (mod 4).  Ideals are rank-2 Z-lattices
stored in Hermite normal form on that basis, scaled by a positive integer
denominator.  Valuations are computed by exact HNF membership tests; only
the archimedean absolute values are floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy
from sympy.ntheory import sqrt_mod

from .errors import DegenerateM, NotPrime, NotSquarefree, ZeroElement


def _is_squarefree(n: int) -> bool:
    return all(e == 1 for e in sympy.factorint(abs(n)).values())


@dataclass(frozen=True)
class QuadraticField:
    """The field Q(sqrt(m)) together with its integral basis (1, omega)."""

    m: int
    disc: int
    r1: int
    r2: int
    half: bool  # omega = (1 + sqrt(m))/2 when True, sqrt(m) otherwise

    @property
    def degree(self) -> int:
        return 2

    @property
    def omega_desc(self) -> str:
        return f"(1+sqrt({self.m}))/2" if self.half else f"sqrt({self.m})"

    @property
    def is_real(self) -> bool:
        return self.m > 0

    def element(self, a, b=0) -> "FieldElement":
        return FieldElement(self, Fraction(a), Fraction(b))

    def one(self) -> "FieldElement":
        return self.element(1)

    def omega(self) -> "FieldElement":
        return self.element(0, 1)

    def sqrt_m(self) -> "FieldElement":
        """sqrt(m) as a field element (2*omega - 1 on the half basis)."""
        if self.half:
            return self.element(-1, 2)
        return self.omega()

    def omega_sqrt_coords(self) -> tuple[Fraction, Fraction]:
        """omega written as A + B*sqrt(m), exact."""
        if self.half:
            return Fraction(1, 2), Fraction(1, 2)
        return Fraction(0), Fraction(1)

    def __repr__(self) -> str:
        return f"QuadraticField(m={self.m})"


def make_field(m: int) -> QuadraticField:
    """Build Q(sqrt(m)) for a squarefree integer m not in {0, 1}."""
    m = int(m)
    if m in (0, 1):
        raise DegenerateM(f"m={m} does not define a quadratic field")
    if not _is_squarefree(m):
        raise NotSquarefree(f"m={m} is not squarefree")
    half = m % 4 == 1
    disc = m if half else 4 * m
    r1, r2 = (2, 0) if m > 0 else (0, 1)
    return QuadraticField(m=m, disc=disc, r1=r1, r2=r2, half=half)


class FieldElement:
    """a + b*omega with exact rational coordinates."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: QuadraticField, a, b):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __setattr__(self, *args):
        raise AttributeError("FieldElement is immutable")

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field, self.a + other.a, self.b + other.b)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field, self.a - other.a, self.b - other.b)

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, -self.a, -self.b)

    def __mul__(self, other) -> "FieldElement":
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, self.a * other, self.b * other)
        self._check(other)
        F = self.field
        a, b, c, d = self.a, self.b, other.a, other.b
        if F.half:
            # omega^2 = (m-1)/4 + omega
            t = Fraction(F.m - 1, 4)
            return FieldElement(F, a * c + b * d * t, a * d + b * c + b * d)
        return FieldElement(F, a * c + b * d * F.m, a * d + b * c)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "FieldElement":
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return self * other.inverse()

    def conjugate(self) -> "FieldElement":
        if self.field.half:
            return FieldElement(self.field, self.a + self.b, -self.b)
        return FieldElement(self.field, self.a, -self.b)

    def norm(self) -> Fraction:
        """N(x) = x * conj(x) as an exact rational."""
        prod = self * self.conjugate()
        assert prod.b == 0
        return prod.a

    def trace(self) -> Fraction:
        return 2 * self.a + (self.b if self.field.half else 0)

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroElement("cannot invert zero")
        return self.conjugate() * (1 / self.norm())

    def as_sqrt_coords(self) -> tuple[Fraction, Fraction]:
        """Coordinates (A, B) with x = A + B*sqrt(m)."""
        oa, ob = self.field.omega_sqrt_coords()
        return self.a + self.b * oa, self.b * ob

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldElement)
            and self.field.m == other.field.m
            and self.a == other.a
            and self.b == other.b
        )

    def __hash__(self):
        return hash((self.field.m, self.a, self.b))

    def _check(self, other: "FieldElement"):
        if self.field.m != other.field.m:
            raise ValueError("elements of different fields")

    def __repr__(self) -> str:
        return f"({self.a}+{self.b}w|m={self.field.m})"


def abs_embed(F: QuadraticField, x: FieldElement) -> tuple[float, float]:
    """Archimedean absolute values (|x|_s0, |x|_s1), one per embedding.

    Embedding order: s0 sends sqrt(m) to the positive branch (resp. to
    +i*|m|^(1/2) for imaginary fields), s1 to the negative one.  For
    imaginary fields the two values coincide.  Evaluated cancellation-free:
    the conjugate whose terms share a sign is summed directly, the other is
    recovered from the exact |N(x)|.
    """
    if x.is_zero():
        raise ZeroElement("zero has no absolute value")
    A, B = x.as_sqrt_coords()
    if F.m < 0:
        v = math.sqrt(float(A * A - B * B * F.m))
        return v, v
    if A == 0 or B == 0:
        v = abs(float(A)) + abs(float(B)) * math.sqrt(F.m)
        return v, v
    big = abs(float(A)) + abs(float(B)) * math.sqrt(F.m)
    small = float(abs(x.norm())) / big
    if (A > 0) == (B > 0):
        return big, small
    return small, big


def log_embed(F: QuadraticField, x: FieldElement) -> tuple[float, float]:
    """(log|x|_s0, log|x|_s1)."""
    v0, v1 = abs_embed(F, x)
    return math.log(v0), math.log(v1)


def _sign_plus(A: Fraction, B: Fraction, m: int) -> int:
    """Exact sign of A + B*sqrt(m) for m > 0."""
    if B == 0:
        return (A > 0) - (A < 0)
    if A == 0:
        return 1 if B > 0 else -1
    if (A > 0) == (B > 0):
        return 1 if A > 0 else -1
    # opposite signs: compare |A| against |B| sqrt(m) exactly
    if A * A > B * B * m:
        return 1 if A > 0 else -1
    return 1 if B > 0 else -1


def embed(F: QuadraticField, x: FieldElement) -> tuple[complex, complex]:
    """The two embeddings of x into C (conjugate pair when m < 0).

    Real embeddings combine the cancellation-free magnitudes of abs_embed
    with exactly determined signs, so they stay accurate even when the
    coordinates of x are astronomically larger than its value.
    """
    if x.is_zero():
        return complex(0.0), complex(0.0)
    A, B = x.as_sqrt_coords()
    if F.m > 0:
        v0, v1 = abs_embed(F, x)
        s0 = _sign_plus(A, B, F.m)
        s1 = _sign_plus(A, -B, F.m)
        return complex(s0 * v0), complex(s1 * v1)
    s = math.sqrt(-F.m)
    z = complex(float(A), float(B) * s)
    return z, z.conjugate()


# ---------------------------------------------------------------------------
# Ideals


def _hnf2(rows: list[tuple[int, int]]) -> tuple[int, int, int]:
    """HNF (a, b, d) of the lattice spanned by integer rows (u, v).

    The basis of the reduced lattice is (a, b + d*omega) with a, d > 0 and
    0 <= b < a; as a coordinate matrix with basis vectors in columns this is
    the upper-triangular [[a, b], [0, d]].  Raises ValueError unless the
    rows span a rank-2 lattice.
    """
    pure: list[int] = []  # rational-integer generators (u, 0)
    mixed: list[tuple[int, int]] = []
    for u, v in rows:
        if u == 0 and v == 0:
            continue
        if v == 0:
            pure.append(u)
        else:
            mixed.append((u, v))
    while len(mixed) > 1:
        mixed.sort(key=lambda r: abs(r[1]))
        (u0, v0), (u1, v1) = mixed[0], mixed[1]
        q = v1 // v0
        u1, v1 = u1 - q * u0, v1 - q * v0
        rest = mixed[2:]
        mixed = [(u0, v0)]
        if v1 == 0:
            if u1:
                pure.append(u1)
        else:
            mixed.append((u1, v1))
        mixed.extend(rest)
    if not mixed:
        raise ValueError("rank < 2: no omega component")
    b, d = mixed[0]
    if d < 0:
        b, d = -b, -d
    a = 0
    for u in pure:
        a = math.gcd(a, u)
    if a == 0:
        raise ValueError("rank < 2: no rational component")
    b %= a
    return a, b, d


class FractionalIdeal:
    """Nonzero fractional O_K-ideal: HNF lattice (a, b + d*omega) / den."""

    __slots__ = ("field", "a", "b", "d", "den")

    def __init__(self, field: QuadraticField, a: int, b: int, d: int, den: int = 1):
        if den < 0:
            a, b, d, den = -a, -b, -d, -den
        if a < 0:
            a = -a
        if d < 0:
            b, d = -b, -d
        b %= a
        g = math.gcd(math.gcd(a, b), math.gcd(d, den))
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "a", a // g)
        object.__setattr__(self, "b", b // g)
        object.__setattr__(self, "d", d // g)
        object.__setattr__(self, "den", den // g)

    def __setattr__(self, *args):
        raise AttributeError("FractionalIdeal is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_elements(field: QuadraticField, elements) -> "FractionalIdeal":
        """Ideal generated over O_K by the given elements (zeros ignored)."""
        rows: list[tuple[Fraction, Fraction]] = []
        omega = field.omega()
        for x in elements:
            if x.is_zero():
                continue
            rows.append((x.a, x.b))
            xo = x * omega
            rows.append((xo.a, xo.b))
        if not rows:
            raise ZeroElement("ideal needs a nonzero generator")
        den = 1
        for u, v in rows:
            den = math.lcm(den, u.denominator, v.denominator)
        int_rows = [(int(u * den), int(v * den)) for u, v in rows]
        a, b, d = _hnf2(int_rows)
        return FractionalIdeal(field, a, b, d, den)

    @staticmethod
    def unit_ideal(field: QuadraticField) -> "FractionalIdeal":
        return FractionalIdeal(field, 1, 0, 1, 1)

    # -- structure ---------------------------------------------------------

    def hnf_matrix(self) -> list[list[int]]:
        """Upper-triangular coordinate matrix [[a, b], [0, d]] (columns are
        the basis vectors on (1, omega))."""
        return [[self.a, self.b], [0, self.d]]

    def basis(self) -> tuple[FieldElement, FieldElement]:
        """Z-basis (a/den, (b + d*omega)/den)."""
        F = self.field
        return (
            FieldElement(F, Fraction(self.a, self.den), Fraction(0)),
            FieldElement(F, Fraction(self.b, self.den), Fraction(self.d, self.den)),
        )

    def norm(self) -> Fraction:
        return Fraction(self.a * self.d, self.den * self.den)

    def is_integral(self) -> bool:
        return self.den == 1

    def contains(self, x: FieldElement) -> bool:
        u = x.a * self.den
        v = x.b * self.den
        if u.denominator != 1 or v.denominator != 1:
            return False
        u, v = int(u), int(v)
        if v % self.d:
            return False
        t = v // self.d
        return (u - t * self.b) % self.a == 0

    def __mul__(self, other: "FractionalIdeal") -> "FractionalIdeal":
        g1, g2 = self.basis()
        h1, h2 = other.basis()
        return FractionalIdeal.from_elements(
            self.field, [g1 * h1, g1 * h2, g2 * h1, g2 * h2]
        )

    def scale_element(self, x: FieldElement) -> "FractionalIdeal":
        g1, g2 = self.basis()
        return FractionalIdeal.from_elements(self.field, [g1 * x, g2 * x])

    def scale_rational(self, q) -> "FractionalIdeal":
        q = Fraction(q)
        return FractionalIdeal(
            self.field,
            self.a * q.numerator,
            self.b * q.numerator,
            self.d * q.numerator,
            self.den * q.denominator,
        )

    def conjugate(self) -> "FractionalIdeal":
        g1, g2 = self.basis()
        return FractionalIdeal.from_elements(
            self.field, [g1.conjugate(), g2.conjugate()]
        )

    def inverse(self) -> "FractionalIdeal":
        return self.conjugate().scale_rational(1 / self.norm())

    def __pow__(self, k: int) -> "FractionalIdeal":
        if k < 0:
            return self.inverse() ** (-k)
        result = FractionalIdeal.unit_ideal(self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FractionalIdeal)
            and self.field.m == other.field.m
            and (self.a, self.b, self.d, self.den)
            == (other.a, other.b, other.d, other.den)
        )

    def __hash__(self):
        return hash((self.field.m, self.a, self.b, self.d, self.den))

    def __repr__(self) -> str:
        return f"Ideal[[{self.a},{self.b}],[0,{self.d}]]/{self.den}(m={self.field.m})"


def principal_ideal(x: FieldElement) -> FractionalIdeal:
    if x.is_zero():
        raise ZeroElement("zero generates no fractional ideal")
    return FractionalIdeal.from_elements(x.field, [x])


# ---------------------------------------------------------------------------
# Prime ideals


class PrimeIdeal:
    """Maximal ideal of O_K over the rational prime p."""

    __slots__ = ("field", "p", "kind", "index", "residue_norm", "ideal", "root")

    def __init__(self, field, p, kind, index, residue_norm, ideal, root):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "residue_norm", residue_norm)
        object.__setattr__(self, "ideal", ideal)
        object.__setattr__(self, "root", root)

    def __setattr__(self, *args):
        raise AttributeError("PrimeIdeal is immutable")

    @property
    def ramification(self) -> int:
        return 2 if self.kind == "ramified" else 1

    def log_norm(self) -> float:
        return math.log(self.residue_norm)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PrimeIdeal)
            and self.field.m == other.field.m
            and self.p == other.p
            and self.index == other.index
        )

    def __hash__(self):
        return hash((self.field.m, self.p, self.index))

    def __lt__(self, other: "PrimeIdeal") -> bool:
        return (self.p, self.index) < (other.p, other.index)

    def __repr__(self) -> str:
        return f"P({self.p},{self.index}|{self.kind},m={self.field.m})"


def _minpoly_roots_mod_p(F: QuadraticField, p: int) -> list[int]:
    """Roots of the minimal polynomial of omega modulo p."""
    if p == 2:
        if F.half:
            c = (F.m - 1) // 4
            return sorted(r for r in (0, 1) if (r * r - r - c) % 2 == 0)
        return sorted({r for r in (0, 1) if (r * r - F.m) % 2 == 0})
    s = sqrt_mod(F.m, p, all_roots=True)
    if not s:
        return []
    if F.half:
        inv2 = pow(2, -1, p)
        return sorted({(1 + si) * inv2 % p for si in s})
    return sorted({si % p for si in s})


def factor_rational_prime(F: QuadraticField, p: int) -> list[tuple[PrimeIdeal, int]]:
    """Factor pO_K, returning (prime, exponent) pairs sorted by root.

    Exponent pattern: (1, 1) split, (1,) inert, (2,) ramified.
    """
    p = int(p)
    if not sympy.isprime(p):
        raise NotPrime(f"{p} is not prime")
    pe = F.element(p)
    roots = _minpoly_roots_mod_p(F, p)
    if F.disc % p == 0:
        r = roots[0]
        ideal = FractionalIdeal.from_elements(F, [pe, F.omega() - F.element(r)])
        return [(PrimeIdeal(F, p, "ramified", 0, p, ideal, r), 2)]
    if not roots:
        return [(PrimeIdeal(F, p, "inert", 0, p * p, principal_ideal(pe), None), 1)]
    assert len(roots) == 2
    out = []
    for idx, r in enumerate(roots):
        ideal = FractionalIdeal.from_elements(F, [pe, F.omega() - F.element(r)])
        out.append((PrimeIdeal(F, p, "split", idx, p, ideal, r), 1))
    return out


@lru_cache(maxsize=None)
def _primes_over_cached(m: int, p: int):
    return tuple(factor_rational_prime(make_field(m), p))


def primes_over(F: QuadraticField, p: int) -> list[PrimeIdeal]:
    return [P for P, _ in _primes_over_cached(F.m, p)]


def prime_by_index(F: QuadraticField, p: int, index: int) -> PrimeIdeal:
    for P in primes_over(F, p):
        if P.index == index:
            return P
    raise ValueError(f"no prime of index {index} over {p}")


def valuation(P: PrimeIdeal, x: FieldElement) -> int:
    """ord_P(x); negative values come from the denominator of x."""
    if x.is_zero():
        raise ZeroElement("ord of zero is undefined")
    den = math.lcm(x.a.denominator, x.b.denominator)
    y = x * den
    k = 0
    power = P.ideal
    while power.contains(y):
        k += 1
        power = power * P.ideal
    vp = 0
    n = den
    while n % P.p == 0:
        vp += 1
        n //= P.p
    return k - vp * P.ramification


def support_primes(x: FieldElement) -> list[PrimeIdeal]:
    """All primes where ord_P(x) is nonzero, sorted."""
    if x.is_zero():
        raise ZeroElement("zero has no divisor")
    F = x.field
    den = math.lcm(x.a.denominator, x.b.denominator)
    y = x * den
    ps = set(sympy.factorint(abs(int(y.norm()))).keys())
    ps |= set(sympy.factorint(den).keys())
    out = []
    for p in sorted(ps):
        for P in primes_over(F, p):
            if valuation(P, x) != 0:
                out.append(P)
    return out
