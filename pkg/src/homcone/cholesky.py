"""Generalized Cholesky decompositions and cone membership.

Every point of the closed cone {tt* : t upper triangular, nonnegative
diagonal} has a unique *proper* factor: one whose columns vanish wherever the
diagonal does.  The primal routine recovers it by eliminating columns from
the last index down; the dual routine is the same elimination run on the
index-reversed algebra, producing proper lower factors of dual-cone points.

Both routines are total: fed a point outside the cone they still return a
proper triangular element, it just fails to reconstruct the input.  That
turns factorization into a membership test, which :func:`membership`
packages with scale-aware tolerances.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .errors import NotHermitian, OutsideCone
from .scalars import Context, DEFAULT_CONTEXT, sqrt_scalar
from . import talgebra as ta
from .talgebra import AlgebraInstance, Element, Shape, Triangular


class Side(enum.Enum):
    """Which of the two cones attached to an algebra is meant.

    PRIMAL: {tt* : t upper triangular}, factored last index first.
    DUAL:   {ll* : l lower triangular}, factored first index first.
    """

    PRIMAL = "primal"
    DUAL = "dual"

    @property
    def shape(self) -> Shape:
        return Shape.UPPER if self is Side.PRIMAL else Shape.LOWER

    def opposite(self) -> "Side":
        return Side.DUAL if self is Side.PRIMAL else Side.PRIMAL


class MembershipStatus(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class ProperFactor:
    """Proper triangular factor together with its zero-diagonal index set."""

    t: Triangular
    zero_set: frozenset
    side: Side


@dataclass(frozen=True)
class Membership:
    status: MembershipStatus
    zero_set: frozenset
    residual: float
    factor: ProperFactor

    @property
    def inside(self) -> bool:
        return self.status is not MembershipStatus.OUTSIDE


def _require_hermitian(alg: AlgebraInstance, x: Element) -> None:
    ta.check_conforms(alg, x)
    if not ta.is_hermitian(alg, x, tol=1e-8):
        raise NotHermitian("input must equal its involution")


def _zero_cutoff(alg: AlgebraInstance, x: Element, ctx: Context):
    if ctx.exact:
        return 0
    return ctx.tol_zero * max(1.0, float(ta.trace(x, alg.rank)))


def _eliminate(alg: AlgebraInstance, x: Element, order: Iterable[int], shape: Shape, ctx: Context) -> ProperFactor:
    cutoff = _zero_cutoff(alg, x, ctx)
    y = x
    col = ta.zero()
    comps = {}
    zero_set = set()
    for i in order:
        y = ta.sub(y, ta.star(alg, col, ta.involution(alg, col)))
        pivot = ta.rho(y, i)
        if pivot > cutoff:
            s = sqrt_scalar(pivot, ctx)
            rng = range(1, i + 1) if shape is Shape.UPPER else range(i, alg.rank + 1)
            col_comps = {}
            for j in rng:
                vec = y.components.get((j, i))
                if vec is not None:
                    col_comps[(j, i)] = tuple(v / s for v in vec)
            col = Element(col_comps)
            comps.update(col.components)
        else:
            # Nonpositive pivot: emit a vanishing column and let the
            # reconstruction test flag non-members.
            col = ta.zero()
            zero_set.add(i)
    side = Side.PRIMAL if shape is Shape.UPPER else Side.DUAL
    return ProperFactor(Triangular(Element(comps), shape), frozenset(zero_set), side)


def primal_factor(alg: AlgebraInstance, x: Element, ctx: Context = DEFAULT_CONTEXT) -> ProperFactor:
    """Unique proper upper factor of a closed-cone point (columns r..1)."""
    _require_hermitian(alg, x)
    return _eliminate(alg, x, range(alg.rank, 0, -1), Shape.UPPER, ctx)


def dual_factor(alg: AlgebraInstance, x: Element, ctx: Context = DEFAULT_CONTEXT) -> ProperFactor:
    """Unique proper lower factor of a dual-cone point (columns 1..r)."""
    _require_hermitian(alg, x)
    return _eliminate(alg, x, range(1, alg.rank + 1), Shape.LOWER, ctx)


def factor(alg: AlgebraInstance, x: Element, side: Side, ctx: Context = DEFAULT_CONTEXT) -> ProperFactor:
    if side is Side.PRIMAL:
        return primal_factor(alg, x, ctx)
    return dual_factor(alg, x, ctx)


def reconstruct(alg: AlgebraInstance, f: ProperFactor) -> Element:
    return ta.star(alg, f.t.elem, ta.involution(alg, f.t.elem))


def reconstruction_residual(alg: AlgebraInstance, x: Element, f: ProperFactor) -> float:
    return ta.norm(alg, ta.sub(x, reconstruct(alg, f)))


def membership(alg: AlgebraInstance, x: Element, side: Side, ctx: Context = DEFAULT_CONTEXT) -> Membership:
    """Factor, reconstruct, and compare.

    Interior: reconstruction passes with no zero diagonal.  Boundary: passes
    with a nonempty zero set.  Outside: reconstruction misses x.
    """
    f = factor(alg, x, side, ctx)
    if ctx.exact:
        exact_match = ta.sub(x, reconstruct(alg, f)).is_zero()
        residual = 0.0 if exact_match else reconstruction_residual(alg, x, f)
        ok = exact_match
    else:
        residual = reconstruction_residual(alg, x, f)
        ok = residual <= ctx.tol_rec * max(1.0, ta.norm(alg, x))
    if not ok:
        status = MembershipStatus.OUTSIDE
    elif f.zero_set:
        status = MembershipStatus.BOUNDARY
    else:
        status = MembershipStatus.INTERIOR
    return Membership(status, f.zero_set, residual, f)


def require_member(alg: AlgebraInstance, x: Element, side: Side, ctx: Context = DEFAULT_CONTEXT) -> Membership:
    m = membership(alg, x, side, ctx)
    if not m.inside:
        raise OutsideCone(
            f"point is outside the {side.value} cone (reconstruction residual {m.residual:.3e})"
        )
    return m
