"""Bigraded matrix algebras with involution, and their triangular machinery.

An algebra of rank r decomposes as a direct sum of components A_ij
(1 <= i, j <= r) multiplying like matrix blocks:

    A_ij . A_jk  is contained in  A_ik,      A_ij . A_kl = {0} for j != k,

with each diagonal component A_ii one-dimensional, spanned by a unit e_i.
Concrete algebras plug in through :class:`AlgebraInstance` by supplying the
component dimensions, the bilinear component products, and the involution;
everything in this module is generic over the instance.

The cone attached to an instance is {tt* : t upper triangular, positive
diagonal}; its closure allows zero diagonals and its dual is the analogous
set built from lower triangular elements.  The quadratic maps Q_a act on the
fixed points of the involution and restrict to cone automorphisms for
invertible triangular a.
"""

from __future__ import annotations

import abc
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from .errors import (
    BadIndex,
    DimensionMismatch,
    ImproperFactor,
    NotHermitian,
    NotInvertible,
    ParseError,
)
from .scalars import HALF, Context, Scalar, parse_scalar, reciprocal, scalar_to_json

Key = Tuple[int, int]


class AlgebraInstance(abc.ABC):
    """Contract a concrete algebra fulfills.

    Coordinates of the one-dimensional diagonal components are chosen so that
    the unit e_i has coordinate 1; the diagonal evaluation rho_i then reads
    off that single coordinate.
    """

    rank: int

    @abc.abstractmethod
    def dim(self, i: int, j: int) -> int:
        """Dimension of component (i, j); 0 when the component is absent."""

    @abc.abstractmethod
    def component_mul(self, i: int, j: int, k: int, a: tuple, b: tuple) -> tuple:
        """Bilinear product A_ij x A_jk -> A_ik on coordinate tuples.

        Only called when all three components have positive dimension.
        """

    @abc.abstractmethod
    def component_invol(self, i: int, j: int, a: tuple) -> tuple:
        """Coordinates of the involution A_ij -> A_ji."""

    @property
    def dims(self) -> Dict[Key, int]:
        return {
            (i, j): self.dim(i, j)
            for i in range(1, self.rank + 1)
            for j in range(1, self.rank + 1)
            if self.dim(i, j) > 0
        }

    def component_keys(self) -> Iterable[Key]:
        r = self.rank
        for i in range(1, r + 1):
            for j in range(1, r + 1):
                if self.dim(i, j) > 0:
                    yield (i, j)


class Element:
    """An algebra element stored by bigraded components.

    ``components`` maps (i, j) to a coordinate tuple; all-zero components are
    pruned so that equality of dicts is equality of elements.
    """

    __slots__ = ("components",)

    def __init__(self, components: Optional[Dict[Key, tuple]] = None):
        comps = {}
        for key, vec in (components or {}).items():
            vec = tuple(vec)
            if any(v != 0 for v in vec):
                comps[key] = vec
        self.components = comps

    def get(self, i: int, j: int, dim: int = 1) -> tuple:
        return self.components.get((i, j), (0,) * dim)

    def __eq__(self, other):
        return isinstance(other, Element) and self.components == other.components

    def __repr__(self):
        items = ", ".join(f"{k}: {v}" for k, v in sorted(self.components.items()))
        return f"Element({{{items}}})"

    def is_zero(self) -> bool:
        return not self.components


class Shape(enum.Enum):
    UPPER = "upper"
    LOWER = "lower"

    def opposite(self) -> "Shape":
        return Shape.LOWER if self is Shape.UPPER else Shape.UPPER


@dataclass(frozen=True)
class Triangular:
    """Element together with its triangle tag."""

    elem: Element
    shape: Shape

    def diag(self, alg: AlgebraInstance) -> list:
        return [rho(self.elem, i) for i in range(1, alg.rank + 1)]


def zero() -> Element:
    return Element({})


def unit(alg: AlgebraInstance, i: int) -> Element:
    if not (1 <= i <= alg.rank):
        raise BadIndex(f"diagonal index {i} out of range 1..{alg.rank}")
    return Element({(i, i): (1,)})


def identity(alg: AlgebraInstance) -> Element:
    return Element({(i, i): (1,) for i in range(1, alg.rank + 1)})


def principal_identity(alg: AlgebraInstance, removed: Iterable[int]) -> Element:
    """Sum of units over indices *not* in ``removed`` (the identity of the
    principal subalgebra obtained by deleting those rows and columns)."""
    removed = set(removed)
    for i in removed:
        if not (1 <= i <= alg.rank):
            raise BadIndex(f"index {i} out of range 1..{alg.rank}")
    return Element({(i, i): (1,) for i in range(1, alg.rank + 1) if i not in removed})


def rho(a: Element, i: int) -> Scalar:
    """Diagonal evaluation: the single coordinate of the (i, i) component."""
    return a.components.get((i, i), (0,))[0]


def add(a: Element, b: Element) -> Element:
    out = dict(a.components)
    for key, vec in b.components.items():
        cur = out.get(key)
        out[key] = vec if cur is None else tuple(x + y for x, y in zip(cur, vec))
    return Element(out)


def sub(a: Element, b: Element) -> Element:
    return add(a, scale(b, -1))


def scale(a: Element, c: Scalar) -> Element:
    return Element({key: tuple(c * x for x in vec) for key, vec in a.components.items()})


def star(alg: AlgebraInstance, a: Element, b: Element) -> Element:
    """Bigraded product: (ab)_ik = sum_j a_ij b_jk.

    Products landing in an absent component are dropped, which is exactly the
    instance's projection back onto its bigradation.
    """
    by_row: Dict[int, list] = {}
    for (j, k), vec in b.components.items():
        by_row.setdefault(j, []).append((k, vec))
    acc: Dict[Key, list] = {}
    for (i, j), avec in a.components.items():
        for k, bvec in by_row.get(j, ()):
            if alg.dim(i, k) == 0:
                continue
            term = alg.component_mul(i, j, k, avec, bvec)
            cur = acc.get((i, k))
            if cur is None:
                acc[(i, k)] = list(term)
            else:
                for p, t in enumerate(term):
                    cur[p] += t
    return Element({key: tuple(vec) for key, vec in acc.items()})


def involution(alg: AlgebraInstance, a: Element) -> Element:
    return Element(
        {(j, i): alg.component_invol(i, j, vec) for (i, j), vec in a.components.items()}
    )


def trace(a: Element, rank: int) -> Scalar:
    return sum((rho(a, i) for i in range(1, rank + 1)), 0)


def inner(alg: AlgebraInstance, a: Element, b: Element) -> Scalar:
    """Positive definite pairing  <a, b> = sum_ij rho_i(a_ij (b_ij)*)."""
    total = 0
    for (i, j), avec in a.components.items():
        bvec = b.components.get((i, j))
        if bvec is None:
            continue
        conj = alg.component_invol(i, j, bvec)
        total += alg.component_mul(i, j, i, avec, conj)[0]
    return total


def norm(alg: AlgebraInstance, a: Element) -> float:
    return math.sqrt(max(float(inner(alg, a, a)), 0.0))


def check_conforms(alg: AlgebraInstance, a: Element) -> None:
    for (i, j), vec in a.components.items():
        d = alg.dim(i, j)
        if d == 0:
            raise DimensionMismatch(f"component {(i, j)} is absent in this algebra")
        if len(vec) != d:
            raise DimensionMismatch(
                f"component {(i, j)} has length {len(vec)}, expected {d}"
            )


def max_abs(a: Element) -> float:
    return max((abs(float(x)) for vec in a.components.values() for x in vec), default=0.0)


def has_float_scalars(a: Element) -> bool:
    """True when the element carries double-precision coordinates.

    Integers are neutral (exact in either backend); the presence of a float
    marks the whole element as double precision.
    """
    return any(isinstance(x, float) for vec in a.components.values() for x in vec)


def max_component_diff(a: Element, b: Element) -> float:
    return max_abs(sub(a, b))


def hermitian_violation(alg: AlgebraInstance, a: Element) -> float:
    return max_component_diff(a, involution(alg, a))


def is_hermitian(alg: AlgebraInstance, a: Element, tol: float = 1e-9) -> bool:
    return hermitian_violation(alg, a) <= tol * max(1.0, max_abs(a))


def hermitian_part(alg: AlgebraInstance, a: Element) -> Element:
    half = 0.5 if has_float_scalars(a) else HALF
    return scale(add(a, involution(alg, a)), half)


def quadratic_map(alg: AlgebraInstance, a: Element, b: Element, check: bool = True) -> Element:
    """Q_a(b) = (a(ba*) + a(ab) - (aa)b + transpose)/2 on Hermitian b.

    For triangular u, t these maps compose as Q_u Q_t = Q_(ut) and satisfy
    Q_u(tt*) = (ut)(ut)*, which is what makes them cone automorphisms.
    """
    if check and not is_hermitian(alg, b, tol=1e-8):
        raise NotHermitian("quadratic map argument must be Hermitian")
    a_star = involution(alg, a)
    term1 = star(alg, a, star(alg, b, a_star))
    term2 = star(alg, a, star(alg, a, b))
    term3 = star(alg, star(alg, a, a), b)
    raw = sub(add(term1, term2), term3)
    return hermitian_part(alg, raw)


# ---------------------------------------------------------------------------
# Triangular elements


def triangle_keys(alg: AlgebraInstance, shape: Shape) -> list:
    if shape is Shape.UPPER:
        return [(i, j) for (i, j) in alg.component_keys() if i <= j]
    return [(i, j) for (i, j) in alg.component_keys() if i >= j]


def in_triangle(elem: Element, shape: Shape) -> bool:
    if shape is Shape.UPPER:
        return all(i <= j for (i, j) in elem.components)
    return all(i >= j for (i, j) in elem.components)


def as_triangular(elem: Element, shape: Shape) -> Triangular:
    if not in_triangle(elem, shape):
        raise DimensionMismatch(f"element is not {shape.value} triangular")
    return Triangular(elem, shape)


def column(alg: AlgebraInstance, t: Triangular, i: int) -> Element:
    """Column i of a triangular element: components (j, i) within its triangle."""
    rng = range(1, i + 1) if t.shape is Shape.UPPER else range(i, alg.rank + 1)
    comps = {}
    for j in rng:
        vec = t.elem.components.get((j, i))
        if vec is not None:
            comps[(j, i)] = vec
    return Element(comps)


def zero_diagonal_set(alg: AlgebraInstance, t: Triangular) -> frozenset:
    return frozenset(i for i in range(1, alg.rank + 1) if rho(t.elem, i) == 0)


def is_proper(alg: AlgebraInstance, t: Triangular) -> bool:
    """Proper: a zero diagonal entry forces its whole column to vanish."""
    for i in zero_diagonal_set(alg, t):
        if column(alg, t, i).components:
            return False
    return True


def triangular_inverse(alg: AlgebraInstance, t: Triangular) -> Triangular:
    """Inverse inside the triangular group, by back substitution.

    Requires every diagonal to be positive.  Associativity of triangular
    products makes the computed one-sided inverse two-sided.
    """
    d = t.diag(alg)
    for i, val in enumerate(d, start=1):
        if not val > 0:
            raise NotInvertible(f"diagonal entry {i} is {val}, not positive")
    recip = (lambda v: 1.0 / float(v)) if has_float_scalars(t.elem) else reciprocal
    upper = t.shape is Shape.UPPER
    comps: Dict[Key, tuple] = {}
    for i in range(1, alg.rank + 1):
        comps[(i, i)] = (recip(d[i - 1]),)
    for j in range(1, alg.rank + 1):
        inner_range = (
            range(j - 1, 0, -1) if upper else range(j + 1, alg.rank + 1)
        )  # solve outward from the diagonal of column j
        for i in inner_range:
            if alg.dim(i, j) == 0:
                continue
            between = range(i + 1, j + 1) if upper else range(j, i)
            acc = None
            for k in between:
                tvec = t.elem.components.get((i, k))
                vvec = comps.get((k, j))
                if tvec is None or vvec is None or alg.dim(i, j) == 0:
                    continue
                if alg.dim(k, j) == 0 or alg.dim(i, k) == 0:
                    continue
                term = alg.component_mul(i, k, j, tvec, vvec)
                if acc is None:
                    acc = list(term)
                else:
                    for p, v in enumerate(term):
                        acc[p] += v
            if acc is not None and any(v != 0 for v in acc):
                f = -recip(d[i - 1])
                comps[(i, j)] = tuple(f * v for v in acc)
    return Triangular(Element(comps), t.shape)


def fill_identity_columns(
    alg: AlgebraInstance, t: Triangular, index_set: Iterable[int]
) -> Triangular:
    """Replace the (vanishing) columns of a proper factor indexed by
    ``index_set`` with unit columns, yielding an invertible triangular element
    that maps the principal identity back onto t t*'s factor."""
    index_set = frozenset(index_set)
    for i in index_set:
        if not (1 <= i <= alg.rank):
            raise BadIndex(f"index {i} out of range 1..{alg.rank}")
    if zero_diagonal_set(alg, t) != index_set:
        raise ImproperFactor(
            f"zero-diagonal set {sorted(zero_diagonal_set(alg, t))} does not match "
            f"requested index set {sorted(index_set)}"
        )
    if not is_proper(alg, t):
        raise ImproperFactor("factor has a zero diagonal with a surviving column")
    comps = dict(t.elem.components)
    for i in index_set:
        comps[(i, i)] = (1,)
    return Triangular(Element(comps), t.shape)


def triangular_solve_to_identity(
    alg: AlgebraInstance, t: Triangular, index_set: Iterable[int]
) -> Triangular:
    """Invertible u (same triangle as t) with  u t = principal identity.

    Free entries follow the filled-column convention: the solve inverts the
    element obtained from t by replacing each vanishing column i in
    ``index_set`` with the unit column e_i, so u's columns at those indices
    are unit columns.
    """
    filled = fill_identity_columns(alg, t, index_set)
    return triangular_inverse(alg, filled)


# ---------------------------------------------------------------------------
# Reversed (dual) algebra

class ReversedAlgebra(AlgebraInstance):
    """Index-reversed view: component (i, j) is the base's (r+1-i, r+1-j).

    Upper triangular elements here correspond to lower triangular elements of
    the base algebra, which realizes the dual cone as a primal one.
    """

    def __init__(self, base: AlgebraInstance):
        self.base = base
        self.rank = base.rank

    def _m(self, i: int) -> int:
        return self.rank + 1 - i

    def dim(self, i, j):
        return self.base.dim(self._m(i), self._m(j))

    def component_mul(self, i, j, k, a, b):
        return self.base.component_mul(self._m(i), self._m(j), self._m(k), a, b)

    def component_invol(self, i, j, a):
        return self.base.component_invol(self._m(i), self._m(j), a)


def reverse_element(alg: AlgebraInstance, a: Element) -> Element:
    r = alg.rank
    return Element({(r + 1 - i, r + 1 - j): vec for (i, j), vec in a.components.items()})


# ---------------------------------------------------------------------------
# Random sampling (seeded, for tests and the axiom suite)


def _rand_scalar(rng, exact: bool) -> Scalar:
    if exact:
        return Fraction(int(rng.integers(-8, 9)), int(rng.integers(1, 5)))
    return float(rng.uniform(-1.0, 1.0))


def sample_element(alg: AlgebraInstance, rng, exact: bool = False) -> Element:
    return Element(
        {
            key: tuple(_rand_scalar(rng, exact) for _ in range(alg.dim(*key)))
            for key in alg.component_keys()
        }
    )


def sample_hermitian(alg: AlgebraInstance, rng, exact: bool = False) -> Element:
    return hermitian_part(alg, sample_element(alg, rng, exact))


def sample_triangular(
    alg: AlgebraInstance,
    rng,
    shape: Shape = Shape.UPPER,
    zero_set: Iterable[int] = (),
    strictly_positive: bool = True,
    exact: bool = False,
) -> Triangular:
    """Random proper triangular element with prescribed vanishing columns."""
    zero_set = frozenset(zero_set)
    comps: Dict[Key, tuple] = {}
    for (i, j) in triangle_keys(alg, shape):
        col = j
        if col in zero_set:
            continue
        if i == j:
            if exact:
                val = Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 5)))
            else:
                val = float(rng.uniform(0.4, 1.6)) if strictly_positive else float(
                    rng.uniform(0.1, 1.6)
                )
            comps[(i, j)] = (val,)
        else:
            comps[(i, j)] = tuple(_rand_scalar(rng, exact) for _ in range(alg.dim(i, j)))
    return Triangular(Element(comps), shape)


# ---------------------------------------------------------------------------
# Axiom suite


@dataclass(frozen=True)
class AxiomCheck:
    axiom: str
    description: str
    max_violation: float
    witness: Optional[dict] = None

    def to_json(self) -> dict:
        return {
            "axiom": self.axiom,
            "description": self.description,
            "max_violation": self.max_violation,
            "witness": self.witness,
        }


@dataclass(frozen=True)
class AxiomReport:
    checks: Tuple[AxiomCheck, ...]
    n_samples: int
    seed: int

    @property
    def max_violation(self) -> float:
        return max(c.max_violation for c in self.checks)

    def passed(self, tol: float = 1e-10) -> bool:
        return self.max_violation <= tol

    def to_json(self) -> dict:
        return {
            "n_samples": self.n_samples,
            "seed": self.seed,
            "max_violation": self.max_violation,
            "checks": [c.to_json() for c in self.checks],
        }


def _vec_diff(a: Optional[tuple], b: Optional[tuple], dim: int) -> float:
    av = a if a is not None else (0,) * dim
    bv = b if b is not None else (0,) * dim
    return max((abs(float(x - y)) for x, y in zip(av, bv)), default=0.0)


def check_axioms(alg: AlgebraInstance, n_samples: int = 100, seed: int = 42) -> AxiomReport:
    """Evaluate the seven structure axioms on seeded pseudo-random elements.

    (a1) and (a2) are checked structurally plus on random diagonal scalars;
    the rest numerically.  Violations never raise; they land in the report.
    """
    if n_samples <= 0:
        raise ValueError("n_samples must be positive")
    rng = np.random.default_rng(seed)
    r = alg.rank
    checks = []

    # a1: one-dimensional diagonal subalgebras isomorphic to the reals
    v1, w1 = 0.0, None
    for i in range(1, r + 1):
        if alg.dim(i, i) != 1:
            v1, w1 = 1.0, {"index": i, "dim": alg.dim(i, i)}
            break
    if v1 == 0.0:
        for s in range(n_samples):
            i = int(rng.integers(1, r + 1))
            x, y = _rand_scalar(rng, False), _rand_scalar(rng, False)
            got = alg.component_mul(i, i, i, (x,), (y,))[0]
            d = abs(float(got - x * y))
            if d > v1:
                v1, w1 = d, {"index": i, "sample": s}
    checks.append(AxiomCheck("a1", "diagonal components are copies of the reals", v1, w1))

    # a2: units act as left/right identities on their row and column
    v2, w2 = 0.0, None
    keys = list(alg.component_keys())
    for s in range(n_samples):
        a = sample_element(alg, rng)
        for (i, j) in keys:
            avec = a.get(i, j, alg.dim(i, j))
            left = alg.component_mul(i, i, j, (1,), avec)
            right = alg.component_mul(i, j, j, avec, (1,))
            d = max(_vec_diff(left, avec, alg.dim(i, j)), _vec_diff(right, avec, alg.dim(i, j)))
            if d > v2:
                v2, w2 = d, {"component": [i, j], "sample": s}
    checks.append(AxiomCheck("a2", "diagonal units act as identities", v2, w2))

    # a3: trace symmetry
    v3, w3 = 0.0, None
    for s in range(n_samples):
        a, b = sample_element(alg, rng), sample_element(alg, rng)
        d = abs(float(trace(star(alg, a, b), r) - trace(star(alg, b, a), r)))
        if d > v3:
            v3, w3 = d, {"sample": s}
    checks.append(AxiomCheck("a3", "trace of a product is order-independent", v3, w3))

    # a4: trace associativity
    v4, w4 = 0.0, None
    for s in range(n_samples):
        a, b, c = (sample_element(alg, rng) for _ in range(3))
        lhs = trace(star(alg, star(alg, a, b), c), r)
        rhs = trace(star(alg, a, star(alg, b, c)), r)
        d = abs(float(lhs - rhs))
        if d > v4:
            v4, w4 = d, {"sample": s}
    checks.append(AxiomCheck("a4", "trace pairs associatively", v4, w4))

    # a5: positive definiteness of tr(a a*)
    v5, w5 = 0.0, None
    for s in range(n_samples):
        a = sample_element(alg, rng)
        q = float(trace(star(alg, a, involution(alg, a)), r))
        d = max(0.0, -q)
        if max_abs(a) > 1e-6 and q < 1e-14:
            d = max(d, 1.0)
        if d > v5:
            v5, w5 = d, {"sample": s}
    checks.append(AxiomCheck("a5", "self-pairing is positive definite", v5, w5))

    # a6: associativity across ordered component quadruples i<=j<=k<=l
    v6, w6 = 0.0, None
    quads = [
        (i, j, k, l)
        for i in range(1, r + 1)
        for j in range(i, r + 1)
        for k in range(j, r + 1)
        for l in range(k, r + 1)
        if alg.dim(i, j) and alg.dim(j, k) and alg.dim(k, l)
    ]
    for s in range(n_samples):
        a, b, c = (sample_element(alg, rng) for _ in range(3))
        for (i, j, k, l) in quads:
            av = a.get(i, j, alg.dim(i, j))
            bv = b.get(j, k, alg.dim(j, k))
            cv = c.get(k, l, alg.dim(k, l))
            lhs = rhs = None
            if alg.dim(j, l):
                bc = alg.component_mul(j, k, l, bv, cv)
                if alg.dim(i, l):
                    lhs = alg.component_mul(i, j, l, av, bc)
            if alg.dim(i, k):
                ab = alg.component_mul(i, j, k, av, bv)
                if alg.dim(i, l):
                    rhs = alg.component_mul(i, k, l, ab, cv)
            d = _vec_diff(lhs, rhs, alg.dim(i, l) or 1)
            if d > v6:
                v6, w6 = d, {"indices": [i, j, k, l], "sample": s}
    checks.append(AxiomCheck("a6", "ordered triple products associate", v6, w6))

    # a7: a_ij (b_jk (b_lk)*) = (a_ij b_jk) (b_lk)* for i<=j<=k, l<=k
    v7, w7 = 0.0, None
    quads7 = [
        (i, j, k, l)
        for i in range(1, r + 1)
        for j in range(i, r + 1)
        for k in range(j, r + 1)
        for l in range(1, k + 1)
        if alg.dim(i, j) and alg.dim(j, k) and alg.dim(l, k)
    ]
    for s in range(n_samples):
        a, b = sample_element(alg, rng), sample_element(alg, rng)
        for (i, j, k, l) in quads7:
            av = a.get(i, j, alg.dim(i, j))
            bv = b.get(j, k, alg.dim(j, k))
            cv = alg.component_invol(l, k, b.get(l, k, alg.dim(l, k)))  # (b_lk)* in A_kl
            lhs = rhs = None
            if alg.dim(j, l):
                bc = alg.component_mul(j, k, l, bv, cv)
                if alg.dim(i, l):
                    lhs = alg.component_mul(i, j, l, av, bc)
            if alg.dim(i, k):
                ab = alg.component_mul(i, j, k, av, bv)
                if alg.dim(i, l):
                    rhs = alg.component_mul(i, k, l, ab, cv)
            d = _vec_diff(lhs, rhs, alg.dim(i, l) or 1)
            if d > v7:
                v7, w7 = d, {"indices": [i, j, k, l], "sample": s}
    checks.append(AxiomCheck("a7", "triple products with one conjugate associate", v7, w7))

    return AxiomReport(tuple(checks), n_samples, seed)


# ---------------------------------------------------------------------------
# Wire format


def element_to_json(a: Element) -> dict:
    return {
        "components": {
            f"{i},{j}": [scalar_to_json(v) for v in vec]
            for (i, j), vec in sorted(a.components.items())
        }
    }


def element_from_json(data, ctx: Context = Context()) -> Element:
    if not isinstance(data, dict) or "components" not in data:
        raise ParseError("element JSON must be an object with key 'components'")
    comps = {}
    for key, vec in data["components"].items():
        try:
            i, j = (int(p) for p in key.split(","))
        except ValueError as exc:
            raise ParseError(f"bad component key {key!r}; expected 'i,j'") from exc
        if not isinstance(vec, list):
            raise ParseError(f"component {key!r} must be a list of numbers")
        comps[(i, j)] = tuple(parse_scalar(v, ctx) for v in vec)
    return Element(comps)
