"""Numerical model of the pairing (f, g) -> integral of f against the
complex Hessian current of g, on the flat unit torus.

On the period-1 torus with coordinate z = x + iy the operator dd^c reduces
to (1/4pi) * Laplacian * dx dy, so the pairing becomes a plain weighted
grid sum with a spectral Laplacian.  It is bilinear, symmetric, negative
semidefinite, and vanishes on f exactly when f is constant; mean-zero
energy is bounded by -I(f,f)/pi since the lowest nonzero mode has |k| = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GridMismatch


@dataclass(frozen=True)
class TorusFunction:
    """Real samples on the N x N grid over [0,1)^2, N a power of two."""

    samples: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("expected a square grid")
        n = arr.shape[0]
        if n & (n - 1) or n == 0:
            raise ValueError("grid size must be a power of two")
        object.__setattr__(self, "samples", arr)

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @staticmethod
    def from_function(fn, n: int) -> "TorusFunction":
        xs = np.arange(n) / n
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        return TorusFunction(fn(X, Y))

    def mean(self) -> float:
        return float(self.samples.mean())

    def variance(self) -> float:
        return float(self.samples.var())


def _laplacian(arr: np.ndarray) -> np.ndarray:
    n = arr.shape[0]
    k = np.fft.fftfreq(n, d=1.0 / n)  # integer frequencies
    k2 = (2.0 * math.pi) ** 2 * (k[:, None] ** 2 + k[None, :] ** 2)
    return np.fft.ifft2(-k2 * np.fft.fft2(arr)).real


def pairing(f: TorusFunction, g: TorusFunction) -> float:
    """(1/4pi) * mean(f * Laplacian(g)) over the grid."""
    if f.n != g.n:
        raise GridMismatch(f"{f.n} vs {g.n}")
    return float((f.samples * _laplacian(g.samples)).mean() / (4.0 * math.pi))


def pairing_spectral(f: TorusFunction, g: TorusFunction) -> float:
    """Same pairing evaluated mode-by-mode (independent reduction)."""
    if f.n != g.n:
        raise GridMismatch(f"{f.n} vs {g.n}")
    n = f.n
    fh = np.fft.fft2(f.samples) / (n * n)
    gh = np.fft.fft2(g.samples) / (n * n)
    k = np.fft.fftfreq(n, d=1.0 / n)
    k2 = (2.0 * math.pi) ** 2 * (k[:, None] ** 2 + k[None, :] ** 2)
    return float((-k2 * fh * np.conj(gh)).sum().real / (4.0 * math.pi))


def self_energy(f: TorusFunction) -> float:
    return pairing(f, f)


@dataclass
class PairingReport:
    symmetry_defect: float
    max_self_pairing: float
    kernel_diagnostics: list  # (self pairing, variance, variance bound)
    kernel_consistent: bool


def pairing_properties_report(
    functions: list[TorusFunction], near_zero: float = 1e-10
) -> PairingReport:
    """Symmetry, negativity and kernel diagnostics over a sample set.

    Any f with I(f, f) > -near_zero must have variance below
    near_zero / pi; constants therefore sit exactly in the kernel.
    """
    sym = 0.0
    for i, f in enumerate(functions):
        for g in functions[i + 1 :]:
            sym = max(sym, abs(pairing(f, g) - pairing(g, f)))
    max_self = max((self_energy(f) for f in functions), default=float("-inf"))
    diags = []
    consistent = True
    for f in functions:
        e = self_energy(f)
        if e > -near_zero:
            bound = near_zero / math.pi
            var = f.variance()
            diags.append((e, var, bound))
            if var > bound:
                consistent = False
    return PairingReport(
        symmetry_defect=sym,
        max_self_pairing=max_self,
        kernel_diagnostics=diags,
        kernel_consistent=consistent,
    )
