"""Traces of spectrally defined operators on the circle and flat torus.

Submodules:

- ``special_fn``: zeta, Dirichlet beta, theta3 and the Mellin integral with error bounds
- ``finop``: finite-dimensional adjoint, square root, ``|A|``, traces, canonical form
- ``lattice``: sup-norm shell sums over Z^2 minus the origin
- ``torus_spectral``: eigenvalue rules, trace classification, divergence certificates
- ``counterexamples``: diagonal sums of the identity, alternating and shift operators
- ``cli``: command-line front end
"""

__version__ = "0.1.0"

from .errors import DomainError, NonConvergenceError, SpectraceError
from .special_fn import BoundedValue, dirichlet_beta, gamma_positive_integer, mellin_theta, theta3, zeta

__all__ = [
    "BoundedValue",
    "DomainError",
    "NonConvergenceError",
    "SpectraceError",
    "__version__",
    "dirichlet_beta",
    "gamma_positive_integer",
    "mellin_theta",
    "theta3",
    "zeta",
]
