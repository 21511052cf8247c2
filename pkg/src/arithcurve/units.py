"""Unit and S-unit groups, and the constructive realization of trace-zero
archimedean vectors by unit combinations.

For quadratic fields the unit group is torsion times at most one infinite
generator: imaginary fields carry only roots of unity, real fields add the
fundamental unit.  The S-unit group attaches, for every basis vector of the
lattice {v : prod P^(v_P) principal} inside Z^Sigma, an explicit witness
element whose divisor matches the vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import minkowski, pell
from .arithdiv import ArithmeticDivisor, PowerProduct, principal_divisor
from .errors import NoSolution, NotConjugationInvariant, TraceNotZero
from .quadfield import (
    FieldElement,
    FractionalIdeal,
    PrimeIdeal,
    QuadraticField,
    abs_embed,
    valuation,
)


@dataclass(frozen=True)
class UnitGroup:
    torsion_order: int
    torsion_generator: FieldElement
    fundamental: FieldElement | None

    def generators(self) -> list[FieldElement]:
        gens = [self.torsion_generator]
        if self.fundamental is not None:
            gens.append(self.fundamental)
        return gens


def _torsion_units(F: QuadraticField) -> list[FieldElement]:
    # norm 1 forces |x| = 1 in an imaginary field, so the scan box suffices
    out = []
    for a in range(-2, 3):
        for b in range(-2, 3):
            x = F.element(a, b)
            if not x.is_zero() and x.norm() == 1:
                out.append(x)
    return out


def unit_group(F: QuadraticField) -> UnitGroup:
    """Torsion order, a torsion generator, and the fundamental unit (real)."""
    if F.is_real:
        return UnitGroup(2, F.element(-1), pell.fundamental_unit(F))
    tors = _torsion_units(F)
    w = len(tors)
    if F.m == -1:
        gen = F.element(0, 1)  # i
    elif F.m == -3:
        gen = F.element(0, 1)  # sixth root (1+sqrt(-3))/2
    else:
        gen = F.element(-1)
    assert w in (2, 4, 6) and len(tors) == w
    return UnitGroup(w, gen, None)


def dirichlet_realize(
    F: QuadraticField, xi, tol: float = 1e-9
) -> list[tuple[FieldElement, float]]:
    """Units u_i and exponents a_i with xi_s = sum a_i log|u_i|_s everywhere.

    Requires sum_s xi_s = 0 and xi invariant under conjugate embeddings.
    Equivalently (0, xi) + sum (a_i/2) * (u_i) vanishes as an arithmetic
    divisor; the returned list is the minimal generating set.
    """
    xi = tuple(float(v) for v in xi)
    if len(xi) != 2:
        raise ValueError("one component per embedding expected")
    if abs(xi[0] + xi[1]) > tol:
        raise TraceNotZero(f"sum xi = {xi[0] + xi[1]:.3e}")
    if not F.is_real and abs(xi[0] - xi[1]) > tol:
        raise NotConjugationInvariant(f"xi = {xi}")
    if max(abs(v) for v in xi) <= tol:
        return []
    if not F.is_real:
        raise NoSolution("imaginary quadratic field has unit rank 0")
    eps = pell.fundamental_unit(F)
    lam = math.log(abs_embed(F, eps)[0])
    return [(eps, xi[0] / lam)]


@dataclass(frozen=True)
class SUnitGroup:
    sigma: tuple[PrimeIdeal, ...]
    generators: tuple[FieldElement, ...]
    ord_matrix: tuple[tuple[int, ...], ...]  # rows: generators, cols: sigma


def _hnf_rows_with_witnesses(
    rows: list[list[int]], witnesses: list[FieldElement]
) -> tuple[list[list[int]], list[FieldElement]]:
    """Row HNF of the integer matrix, applying the same operations to the
    witnesses multiplicatively."""
    rows = [list(r) for r in rows]
    wit = list(witnesses)
    ncols = len(rows[0]) if rows else 0
    pivot_row = 0
    for col in range(ncols):
        # euclid the column below pivot_row down to one nonzero entry
        while True:
            nz = [i for i in range(pivot_row, len(rows)) if rows[i][col] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda i: abs(rows[i][col]))
            i0, i1 = nz[0], nz[1]
            q = rows[i1][col] // rows[i0][col]
            rows[i1] = [x - q * y for x, y in zip(rows[i1], rows[i0])]
            wit[i1] = wit[i1] / wit[i0] ** q
        nz = [i for i in range(pivot_row, len(rows)) if rows[i][col] != 0]
        if not nz:
            continue
        i0 = nz[0]
        rows[pivot_row], rows[i0] = rows[i0], rows[pivot_row]
        wit[pivot_row], wit[i0] = wit[i0], wit[pivot_row]
        if rows[pivot_row][col] < 0:
            rows[pivot_row] = [-x for x in rows[pivot_row]]
            wit[pivot_row] = wit[pivot_row].inverse()
        # reduce the rows above the pivot
        for i in range(pivot_row):
            q = rows[i][col] // rows[pivot_row][col]
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[pivot_row])]
                wit[i] = wit[i] / wit[pivot_row] ** q
        pivot_row += 1
    return rows[:pivot_row], wit[:pivot_row]


def s_unit_group(F: QuadraticField, sigma) -> SUnitGroup:
    """Generators of the multiplicative group supported in sigma.

    The image lattice of the valuation map is recovered by testing
    principality over candidate exponent vectors with entries below the
    class number h (the lattice always contains h * Z^sigma).
    """
    sigma = tuple(sorted(sigma))
    ug = unit_group(F)
    base = ug.generators()
    if not sigma:
        mat = tuple(tuple() for _ in base)
        return SUnitGroup(sigma, tuple(base), mat)
    h, _ = minkowski.class_group(F)
    found_rows: list[list[int]] = []
    witnesses: list[FieldElement] = []
    for P in sigma:
        g = minkowski.principal_generator(P.ideal ** h)
        assert g is not None, "P^h must be principal"
        found_rows.append([h if Q == P else 0 for Q in sigma])
        witnesses.append(g)
    if h > 1:
        for vec in np.ndindex(*([h] * len(sigma))):
            if not any(vec):
                continue
            I = FractionalIdeal.unit_ideal(F)
            for P, e in zip(sigma, vec):
                I = I * P.ideal ** int(e)
            g = minkowski.principal_generator(I)
            if g is not None:
                found_rows.append([int(e) for e in vec])
                witnesses.append(g)
    rows, wits = _hnf_rows_with_witnesses(found_rows, witnesses)
    gens = base + wits
    mat = []
    for g in gens:
        mat.append(tuple(valuation(P, g) for P in sigma))
    # witnesses must reproduce their exponent rows exactly
    for expected, got in zip([[0] * len(sigma)] * len(base) + rows, mat):
        assert list(got) == list(expected), "witness divisor mismatch"
    return SUnitGroup(sigma, tuple(gens), tuple(mat))
