"""Enumeration of ideal lattice points inside archimedean boxes.

An element x of a fractional ideal I is admissible for radii (R0, R1) when
|x|_s <= R_s at both embeddings.  For real fields this is a rectangle in
the Minkowski plane, for imaginary fields a disk.  The ideal basis is
Lagrange-reduced first so the integer scan box stays proportional to the
number of admissible points; the reduction runs on exact coordinates and
re-embeds each step, so arbitrarily skew ideals (huge HNF entries whose
short vectors have tiny coordinates) reduce without losing precision.
"""

from __future__ import annotations

import math

import numpy as np

from .quadfield import FieldElement, FractionalIdeal, abs_embed, embed

_SLACK = 1.0 + 1e-12


def _scaled_vector(x: FieldElement, radii: tuple[float, float]) -> np.ndarray:
    """Embedding coordinates of x with the box scaled to the unit square."""
    z0, z1 = embed(x.field, x)
    if x.field.is_real:
        return np.array([z0.real / radii[0], z1.real / radii[1]])
    return np.array([z0.real / radii[0], z0.imag / radii[1]])


def _reduce_basis(
    v0: FieldElement, v1: FieldElement, radii: tuple[float, float]
) -> tuple[FieldElement, FieldElement]:
    """Lagrange reduction in the scaled embedding, exact coordinates."""
    for _ in range(512):
        e0 = _scaled_vector(v0, radii)
        e1 = _scaled_vector(v1, radii)
        if e0 @ e0 > e1 @ e1:
            v0, v1 = v1, v0
            e0, e1 = e1, e0
        denom = float(e0 @ e0)
        if denom <= 0.0:
            break
        q = int(round(float(e0 @ e1) / denom))
        if q == 0:
            break
        v1 = v1 - v0 * q
    return v0, v1


def _scan(I: FractionalIdeal, radii: tuple[float, float],
          reduce_basis: bool) -> list[FieldElement]:
    F = I.field
    if min(radii) <= 0.0:
        return []
    v0, v1 = I.basis()
    if reduce_basis:
        v0, v1 = _reduce_basis(v0, v1, radii)
    B = np.column_stack([_scaled_vector(v0, radii), _scaled_vector(v1, radii)])
    inv = np.linalg.inv(B)
    if F.is_real:
        norms = np.abs(inv).sum(axis=1)  # unit square: l1 row norms
    else:
        norms = np.sqrt((inv * inv).sum(axis=1))  # unit disk: l2 row norms
    n0, n1 = (int(math.floor(v * _SLACK)) + 1 for v in norms)
    out = []
    for c0 in range(-n0, n0 + 1):
        base = v0 * c0
        for c1 in range(-n1, n1 + 1):
            if c0 == 0 and c1 == 0:
                continue
            x = base + v1 * c1
            vals = abs_embed(F, x)
            if vals[0] <= radii[0] * _SLACK and vals[1] <= radii[1] * _SLACK:
                out.append(x)
    return out


def enumerate_points(I: FractionalIdeal, radii: tuple[float, float]) -> list[FieldElement]:
    """All nonzero x in I with |x|_s <= radii[s] at both embeddings."""
    return _scan(I, radii, reduce_basis=True)


def enumerate_points_naive(I: FractionalIdeal, radii: tuple[float, float]) -> list[FieldElement]:
    """Reference enumeration on the unreduced HNF basis (test oracle)."""
    return _scan(I, radii, reduce_basis=False)
