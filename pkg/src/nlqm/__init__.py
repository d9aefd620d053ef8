"""Two-state-vector nonlinear quantum dynamics.

A system is described by a pair of state vectors whose inner products
drive the couplings.  The norm difference tau and squared overlap delta
close into a one-dimensional Hamiltonian system (`taudelta`, with Jacobi
elliptic closed forms in `elliptic`); the full state vectors follow
exactly at the fixed point (`statevec_simple`) and by quadrature plus a
scalar envelope ODE on any background (`statevec_general`).  The
extended-Born-rule density matrix and the closed particle orbits it
produces live in `density`; `approx` holds the small-oscillation and
piecewise-potential approximations, and `verify` the invariant registry
behind the CLI.
"""

from .errors import (
    AccuracyError,
    DomainError,
    NlqmError,
    ParameterError,
    RegimeError,
    SolveError,
)
from .params import DerivedParams, ModelParams, derive, params_from_json, validate

__all__ = [
    "AccuracyError",
    "DomainError",
    "NlqmError",
    "ParameterError",
    "RegimeError",
    "SolveError",
    "DerivedParams",
    "ModelParams",
    "derive",
    "params_from_json",
    "validate",
]

__version__ = "0.1.0"
