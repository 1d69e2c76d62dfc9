"""Face identification and facial-structure reports.

A face of the cone is pinned down by any point in its relative interior.
Factoring that point gives an index set I (the vanishing diagonal), and
solving  u t = e_I  inside the triangular group gives an automorphism Q_u
carrying the face onto the *principal face* of index I: the copy of the cone
living on the rows and columns outside I.  Everything else falls out of u:

  * exposing vector  Q_(u*)(e - e_I), orthogonal to the face, in the dual cone;
  * projection element  v = u^(-1) e_I u, whose quadratic map retracts the
    whole cone onto the face;
  * conjugate face data from the transpose of the filled factor.

Certificates store these objects rather than abstract face sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Tuple

from .errors import RankTooLarge
from .scalars import Context, DEFAULT_CONTEXT
from . import talgebra as ta
from .cholesky import Membership, ProperFactor, Side, membership, require_member
from .talgebra import AlgebraInstance, Element, Triangular


@dataclass(frozen=True)
class FaceCertificate:
    """Full report for the minimal face of ``x`` in the chosen cone.

    ``u`` maps x to the principal identity (u t = e_I); ``u_inv`` is its
    inverse, the factor filled with unit columns on I.  ``face_rank`` is the
    algebra rank minus |I|.
    """

    side: Side
    x: Element
    factor: ProperFactor
    index_set: frozenset
    u: Triangular
    u_inv: Triangular
    face_rank: int
    projection_elem: Element
    exposing: Element


@dataclass(frozen=True)
class ConjugateFace:
    """Descriptor of the conjugate face (dual cone meets orthogonal complement).

    ``w`` is triangular in the opposite shape; its quadratic map carries the
    conjugate face onto the principal face of the opposite cone indexed by the
    complement ``index_set``.
    """

    index_set: frozenset
    w: Triangular
    rank: int


@dataclass(frozen=True)
class PrincipalFace:
    index_set: frozenset
    dimension: int


def minimal_face(
    alg: AlgebraInstance, x: Element, side: Side, ctx: Context = DEFAULT_CONTEXT
) -> FaceCertificate:
    """Certificate for the smallest face containing ``x``.

    Raises OutsideCone when ``x`` fails membership.
    """
    m = require_member(alg, x, side, ctx)
    return certificate_from_membership(alg, x, m)


def certificate_from_membership(alg: AlgebraInstance, x: Element, m: Membership) -> FaceCertificate:
    f = m.factor
    index_set = f.zero_set
    filled = ta.fill_identity_columns(alg, f.t, index_set)
    u = ta.triangular_inverse(alg, filled)
    e_partial = ta.principal_identity(alg, index_set)
    # v = u^(-1) e_I u; triangular products of one shape associate.
    v = ta.star(alg, ta.star(alg, filled.elem, e_partial), u.elem)
    complement_identity = ta.sub(ta.identity(alg), e_partial)
    exposing = ta.quadratic_map(alg, ta.involution(alg, u.elem), complement_identity)
    return FaceCertificate(
        side=f.side,
        x=x,
        factor=f,
        index_set=index_set,
        u=u,
        u_inv=filled,
        face_rank=alg.rank - len(index_set),
        projection_elem=v,
        exposing=exposing,
    )


def face_projection_apply(alg: AlgebraInstance, cert: FaceCertificate, y: Element) -> Element:
    """Apply the idempotent map retracting the closed cone onto the face."""
    return ta.quadratic_map(alg, cert.projection_elem, y)


def orthogonal_projection_principal(alg: AlgebraInstance, index_set: Iterable[int], y: Element) -> Element:
    """Self-adjoint idempotent onto the principal face: zeroes the rows and
    columns indexed by ``index_set``."""
    e_partial = ta.principal_identity(alg, index_set)
    return ta.quadratic_map(alg, e_partial, y)


def is_extreme_ray(
    alg: AlgebraInstance, x: Element, side: Side, ctx: Context = DEFAULT_CONTEXT
) -> bool:
    """A cone point spans an extreme ray iff its proper factor has exactly one
    positive diagonal entry."""
    m = require_member(alg, x, side, ctx)
    return len(m.zero_set) == alg.rank - 1


def conjugate_face(alg: AlgebraInstance, cert: FaceCertificate) -> ConjugateFace:
    """Conjugate-face descriptor from a minimal-face certificate.

    The transpose of the filled factor (the element mapping e_I to the
    factored point) is an automorphism of the opposite cone carrying the
    conjugate face onto the principal face indexed by the complement of I.
    Ranks are complementary: rank(face) + rank(conjugate) = rank(algebra).
    """
    complement = frozenset(range(1, alg.rank + 1)) - cert.index_set
    w_elem = ta.involution(alg, cert.u_inv.elem)
    w = Triangular(w_elem, cert.u_inv.shape.opposite())
    return ConjugateFace(index_set=complement, w=w, rank=len(cert.index_set))


def principal_face_chain(alg: AlgebraInstance) -> List[frozenset]:
    """Longest chain of principal faces, as index sets from {1..r} down to {}.

    The first entry is the zero face, the last the whole cone; every step
    increases the face rank by one, so the chain has length rank + 1.
    """
    r = alg.rank
    return [frozenset(range(1, k + 1)) for k in range(r, -1, -1)]


def principal_face_dimension(alg: AlgebraInstance, index_set: frozenset) -> int:
    """Linear dimension of the span of the principal face: one per surviving
    diagonal index plus the dimensions of surviving strictly-upper components."""
    keep = [i for i in range(1, alg.rank + 1) if i not in index_set]
    total = 0
    for a in keep:
        for b in keep:
            if a <= b:
                total += alg.dim(a, b) if a < b else 1
    return total


def enumerate_principal_faces(alg: AlgebraInstance, max_rank: int = 20) -> List[PrincipalFace]:
    """All 2^r principal faces with their span dimensions.

    No two distinct principal faces are related by a triangular automorphism
    (see :func:`triangular_map_between_principal_exists`), so this list is a
    full set of orbit representatives for faces under triangular maps.
    """
    r = alg.rank
    if r > max_rank:
        raise RankTooLarge(f"rank {r} exceeds enumeration bound {max_rank}")
    out = []
    for mask in range(1 << r):
        index_set = frozenset(i + 1 for i in range(r) if mask & (1 << i))
        out.append(PrincipalFace(index_set, principal_face_dimension(alg, index_set)))
    out.sort(key=lambda p: (len(p.index_set), sorted(p.index_set)))
    return out


def triangular_map_between_principal_exists(
    alg: AlgebraInstance, index_set_a: frozenset, index_set_b: frozenset
) -> bool:
    """Decide whether some invertible upper triangular u satisfies
    u e_A = e_B, i.e. whether the principal faces of A and B lie on one orbit.

    Multiplying by e_A keeps the columns outside A and kills the rest, so the
    equation forces: every column j in A must vanish in e_B (j in B), and
    every column j outside A must equal the unit column of e_B, which needs a
    positive diagonal (j outside B).  Hence a map exists iff A = B.
    """
    a_forces = all(j in index_set_b for j in index_set_a)
    b_forces = all(j not in index_set_b for j in range(1, alg.rank + 1) if j not in index_set_a)
    return a_forces and b_forces
