"""stabkit: Schur-Weyl machinery for the Clifford group.

Enumeration of stochastic Lagrangian subspaces and the commutant operators
R(T) they define, stabilizer moment formulas, weighted-orbit t-design
construction, stabilizer-testing protocols, a robust Hudson theorem, and
stabilizer de Finetti bounds.
"""

from . import (
    cli,
    clifford,
    commutant,
    definetti,
    gf,
    moments,
    phase_space,
    protocols,
    stabilizer,
)

__version__ = "0.1.0"

__all__ = [
    "cli",
    "clifford",
    "commutant",
    "definetti",
    "gf",
    "moments",
    "phase_space",
    "protocols",
    "stabilizer",
    "__version__",
]
