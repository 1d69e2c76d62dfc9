"""Homogeneous matrix cones: factorization, faces, and completions.

Core layers:

* :mod:`homcone.talgebra` -- generic bigraded algebras and triangular machinery
* :mod:`homcone.cholesky` -- proper factorizations and cone membership
* :mod:`homcone.faces` -- face certificates, projections, exposing vectors
* :mod:`homcone.graph` / :mod:`homcone.chordal` -- sparsity-pattern cones and
  PSD completion
* :mod:`homcone.matrixnorm` -- the matrix-norm-cone instance
* :mod:`homcone.service` / :mod:`homcone.cli` -- HTTP service and its CLI client
"""

__version__ = "0.1.0"

from .cholesky import Side, MembershipStatus, membership, primal_factor, dual_factor
from .errors import HomconeError
from .graph import Graph, Ordering, is_homogeneous_chordal, trivially_perfect_ordering, verify_tpeo
from .scalars import Context

__all__ = [
    "Context",
    "Graph",
    "HomconeError",
    "MembershipStatus",
    "Ordering",
    "Side",
    "__version__",
    "dual_factor",
    "is_homogeneous_chordal",
    "membership",
    "primal_factor",
    "trivially_perfect_ordering",
    "verify_tpeo",
]
