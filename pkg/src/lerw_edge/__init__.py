"""Edge-use probability of planar loop-erased random walk crossing a square.

Exact routes (Green's functions, log-determinants, loop-measure masses,
harmonic boundary profiles), exhaustive enumeration oracles at small n,
and a reproducible Monte Carlo cross-check.
"""

__version__ = "0.1.0"

from .lattice import LatticeDomain, Point, build_domain
from .solver import SignedDeterminantError, TransitionOperator
from .walks import loop_erase

__all__ = [
    "LatticeDomain",
    "Point",
    "build_domain",
    "TransitionOperator",
    "SignedDeterminantError",
    "loop_erase",
    "__version__",
]
