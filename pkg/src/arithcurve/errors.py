"""Exception types shared across the package.

Every error corresponds to a violated precondition or an exhausted search;
numerical near-misses inside declared tolerances never raise.
"""


class ArithCurveError(Exception):
    """Base class for all package errors."""


class NotSquarefree(ArithCurveError):
    """m has a square factor; Q(sqrt(m)) would duplicate another field."""


class DegenerateM(ArithCurveError):
    """m in {0, 1} does not define a quadratic field."""


class NotPrime(ArithCurveError):
    """Expected a rational prime."""


class ZeroElement(ArithCurveError):
    """The zero element is not a unit of the function field."""


class NotInGamma(ArithCurveError):
    """The function violates the effectivity constraint of the linear system."""


class TraceNotZero(ArithCurveError):
    """Sum of the archimedean components must vanish."""


class NotConjugationInvariant(ArithCurveError):
    """Archimedean data must agree on conjugate embeddings."""


class NoSolution(ArithCurveError):
    """No unit combination realizes the requested archimedean vector."""


class SearchExhausted(ArithCurveError):
    """Lattice enumeration hit its bound without finding the guaranteed point."""


class BoundExceeded(ArithCurveError):
    """Discriminant larger than the configured class-group bound."""


class Infeasible(ArithCurveError):
    """The linear program has an empty feasible set."""


class Unbounded(ArithCurveError):
    """The linear program is unbounded (malformed input)."""


class DegreeNotZero(ArithCurveError):
    """The pipeline requires a degree-zero arithmetic divisor."""


class UndecidedAtDepth(ArithCurveError):
    """The certificate did not close at the configured pipeline depth."""

    def __init__(self, depth, log_value):
        self.depth = depth
        self.log_value = log_value
        super().__init__(
            f"certificate open after depth {depth}: optimal log norm {log_value:.3e}"
        )


class GridMismatch(ArithCurveError):
    """Torus grids must share the same size."""


class QuadratureFailure(ArithCurveError):
    """Adaptive quadrature did not reach the requested tolerance."""


class DegenerateForSin(ArithCurveError):
    """Angle undefined: zero vector or dependent remaining set."""


class NotNSD(ArithCurveError):
    """Matrix is not negative semidefinite within tolerance."""


class FiberRelationViolated(ArithCurveError):
    """Intersection matrix does not annihilate the multiplicity vector."""


class NotSolvable(ArithCurveError):
    """Fiber balancing system has no solution (solvability relation fails)."""
