"""The sparsity-pattern algebra of a homogeneous chordal graph, and the PSD
completion toolkit for the cone of completable pattern matrices.

For a graph G on vertices 1..n in a trivially perfect elimination ordering,
the algebra has one-dimensional components at the diagonal and at every edge,
and multiplies by "matrix product, then zero out entries off the pattern".
The ordering is load-bearing: with it, triangular products need no projection
at all, the dual cone is exactly the PSD matrices supported on the pattern,
and the primal closed cone is exactly the PSD-*completable* pattern matrices.

Operations accept graphs in any labeling; they relabel to an elimination
ordering internally (preferring the identity when it already works) and map
every output back to the caller's labels.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .errors import (
    BadIndex,
    CertificateMismatch,
    HomconeError,
    NotCompletable,
    NotSymmetric,
    OrderingNotVerified,
    ParseError,
    RankDeficient,
    ZeroInput,
)
from .scalars import Context, DEFAULT_CONTEXT, Scalar, parse_scalar, scalar_to_json
from . import talgebra as ta
from .cholesky import Membership, MembershipStatus, Side, membership, require_member
from .faces import FaceCertificate, certificate_from_membership
from .graph import Graph, Ordering, induced_subgraph, is_homogeneous_chordal, trivially_perfect_ordering, verify_tpeo
from .talgebra import AlgebraInstance, Element


class PatternAlgebra(AlgebraInstance):
    """Algebra of n x n matrices supported on a graph pattern.

    Component (i, j) exists when i = j or {i, j} is an edge; the product is
    the matrix product projected back onto the pattern.  The constructor does
    not check the labeling; the cone identities (and two of the axioms) hold
    only when the labels form a trivially perfect elimination ordering, which
    is what :func:`build_instance` enforces.
    """

    def __init__(self, graph: Graph):
        self.graph = graph
        self.rank = graph.n
        self._pattern = {(i, i) for i in graph.vertices()}
        for (u, v) in graph.edges:
            self._pattern.add((u, v))
            self._pattern.add((v, u))

    def dim(self, i: int, j: int) -> int:
        return 1 if (i, j) in self._pattern else 0

    def component_mul(self, i, j, k, a, b):
        return (a[0] * b[0],)

    def component_invol(self, i, j, a):
        return tuple(a)

    # Dense conversions -----------------------------------------------------

    def element_from_dense(self, m) -> Element:
        comps = {}
        for (i, j) in self._pattern:
            val = m[i - 1][j - 1]
            if val != 0:
                comps[(i, j)] = (val,)
        return Element(comps)

    def element_to_dense(self, a: Element, exact: Optional[bool] = None) -> np.ndarray:
        if exact is None:
            exact = any(
                isinstance(v, Fraction) for vec in a.components.values() for v in vec
            )
        n = self.rank
        rows = [[Fraction(0) if exact else 0.0] * n for _ in range(n)]
        for (i, j), vec in a.components.items():
            rows[i - 1][j - 1] = vec[0] if exact else float(vec[0])
        return np.array(rows, dtype=object if exact else float)


def build_instance(g: Graph, ordering: Optional[Ordering] = None) -> PatternAlgebra:
    """Instance on the relabeled graph; the ordering must pass :func:`verify_tpeo`."""
    if ordering is None:
        ordering = trivially_perfect_ordering(g)
    if not verify_tpeo(g, ordering):
        raise OrderingNotVerified(
            "ordering fails the elimination conditions; relabel with trivially_perfect_ordering"
        )
    return PatternAlgebra(ordering.apply(g))


@functools.lru_cache(maxsize=256)
def ordered_instance(g: Graph) -> Tuple[PatternAlgebra, Ordering]:
    """Instance plus the relabeling used; identity when the graph is already ordered."""
    ident = Ordering.identity(g.n, verified=True)
    if verify_tpeo(g, ident):
        return PatternAlgebra(g), ident
    ordering = trivially_perfect_ordering(g)
    return PatternAlgebra(ordering.apply(g)), ordering


# ---------------------------------------------------------------------------
# Pattern matrices


@dataclass(frozen=True)
class PatternMatrix:
    """Symmetric matrix supported on the diagonal and the edges of a graph.

    ``values`` maps (i, j) with i <= j to the entry; the (j, i) entry is
    implied.  Support outside the pattern is rejected.
    """

    graph: Graph
    values: Dict[Tuple[int, int], Scalar]

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.values.items():
            key = (min(i, j), max(i, j))
            if key[0] != key[1] and not self.graph.has_edge(*key):
                raise ParseError(f"entry {key} is off the pattern")
            if not (1 <= key[0] and key[1] <= self.graph.n):
                raise BadIndex(f"entry {key} out of range")
            if v != 0:
                clean[key] = v
        object.__setattr__(self, "values", clean)

    def entry(self, i: int, j: int) -> Scalar:
        return self.values.get((min(i, j), max(i, j)), 0)

    def is_zero(self) -> bool:
        return not self.values

    def to_dense(self) -> np.ndarray:
        exact = any(isinstance(v, Fraction) for v in self.values.values())
        n = self.graph.n
        rows = [[Fraction(0) if exact else 0.0] * n for _ in range(n)]
        for (i, j), v in self.values.items():
            rows[i - 1][j - 1] = v
            rows[j - 1][i - 1] = v
        return np.array(rows, dtype=object if exact else float)

    def to_json(self) -> dict:
        return {
            "n": self.graph.n,
            "entries": [
                [i, j, scalar_to_json(v)] for (i, j), v in sorted(self.values.items())
            ],
        }

    @classmethod
    def from_json(cls, g: Graph, data, ctx: Context = DEFAULT_CONTEXT) -> "PatternMatrix":
        if not isinstance(data, dict) or "entries" not in data:
            raise ParseError("pattern JSON must be an object with keys 'n' and 'entries'")
        if data.get("n") != g.n:
            raise ParseError(f"pattern has n={data.get('n')} but the graph has {g.n} vertices")
        values = {}
        for item in data["entries"]:
            try:
                i, j, v = item
            except (TypeError, ValueError):
                raise ParseError(f"bad entry {item!r}; expected [i, j, value]")
            values[(int(i), int(j))] = parse_scalar(v, ctx)
        return cls(g, values)

    @classmethod
    def from_dense(cls, g: Graph, m, ctx: Context = DEFAULT_CONTEXT) -> "PatternMatrix":
        return pi_g(g, m, ctx)


def _dense_rows(m) -> list:
    if isinstance(m, np.ndarray):
        return m.tolist()
    return [list(r) for r in m]


def pi_g(g: Graph, dense, ctx: Context = DEFAULT_CONTEXT) -> PatternMatrix:
    """Project a dense symmetric matrix onto the pattern (zero off-pattern
    entries).  Self-adjoint for the trace inner product."""
    rows = _dense_rows(dense)
    n = g.n
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ParseError(f"dense matrix must be {n}x{n}")
    sym_tol = 0 if ctx.exact else 1e-8
    scale = max([abs(float(v)) for r in rows for v in r], default=0.0)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(float(rows[i][j] - rows[j][i])) > sym_tol * max(1.0, scale):
                raise NotSymmetric(f"entries ({i+1},{j+1}) and ({j+1},{i+1}) differ")
    values = {}
    for i in range(1, n + 1):
        values[(i, i)] = rows[i - 1][i - 1]
    for (u, v) in g.edges:
        values[(u, v)] = rows[u - 1][v - 1]
    return PatternMatrix(g, values)


def relabel_pattern(x: PatternMatrix, ordering: Ordering) -> PatternMatrix:
    g2 = ordering.apply(x.graph)
    values = {}
    for (i, j), v in x.values.items():
        a, b = ordering.new_label(i), ordering.new_label(j)
        values[(min(a, b), max(a, b))] = v
    return PatternMatrix(g2, values)


def pattern_to_element(alg: PatternAlgebra, x: PatternMatrix) -> Element:
    comps = {}
    for (i, j), v in x.values.items():
        comps[(i, j)] = (v,)
        if i != j:
            comps[(j, i)] = (v,)
    return Element(comps)


def _unrelabel_dense(m: np.ndarray, ordering: Ordering) -> np.ndarray:
    n = ordering.n
    out = np.empty_like(m)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            out[i - 1, j - 1] = m[ordering.new_label(i) - 1, ordering.new_label(j) - 1]
    return out


def pattern_membership(
    g: Graph, x: PatternMatrix, side: Side, ctx: Context = DEFAULT_CONTEXT
) -> Membership:
    alg, ordering = ordered_instance(g)
    elem = pattern_to_element(alg, relabel_pattern(x, ordering))
    return membership(alg, elem, side, ctx)


# ---------------------------------------------------------------------------
# Completions


@dataclass(frozen=True)
class Completion:
    """A full PSD matrix whose pattern restriction reproduces the input."""

    w: np.ndarray
    rank: int
    inverse_pattern_residual: Optional[float] = None


def _triangular_dense(alg: PatternAlgebra, elem: Element) -> np.ndarray:
    return alg.element_to_dense(elem)


def max_rank_completion(g: Graph, x: PatternMatrix, ctx: Context = DEFAULT_CONTEXT) -> Completion:
    """Completion of maximum possible rank, read off the proper factor.

    The factor's positive-diagonal count r is the exact maximum: the ordinary
    product t t^T is a rank-r PSD completion, and no completion can beat r
    because a conjugate-face witness of rank n - r annihilates them all.
    """
    alg, ordering = ordered_instance(g)
    x2 = relabel_pattern(x, ordering)
    elem = pattern_to_element(alg, x2)
    m = membership(alg, elem, Side.PRIMAL, ctx)
    if not m.inside:
        raise NotCompletable(
            f"pattern matrix has no PSD completion (reconstruction residual {m.residual:.3e})"
        )
    t = _triangular_dense(alg, m.factor.t.elem)
    w = np.dot(t, t.T)
    return Completion(w=_unrelabel_dense(w, ordering), rank=g.n - len(m.zero_set))


def _exact_inverse(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    work = [[Fraction(a[i, j]) for j in range(n)] for i in range(n)]
    inv = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot_row is None:
            raise RankDeficient("matrix is singular")
        work[col], work[pivot_row] = work[pivot_row], work[col]
        inv[col], inv[pivot_row] = inv[pivot_row], inv[col]
        piv = work[col][col]
        work[col] = [v / piv for v in work[col]]
        inv[col] = [v / piv for v in inv[col]]
        for r in range(n):
            if r == col or work[r][col] == 0:
                continue
            f = work[r][col]
            work[r] = [v - f * w for v, w in zip(work[r], work[col])]
            inv[r] = [v - f * w for v, w in zip(inv[r], inv[col])]
    return np.array(inv, dtype=object)


def max_det_completion(g: Graph, x: PatternMatrix, ctx: Context = DEFAULT_CONTEXT) -> Completion:
    """Determinant-maximizing completion of a positive definite completable
    matrix, with its optimality certificate.

    The factor product t t^T maximizes the determinant exactly when its
    inverse is again supported on the pattern; the residual of that support
    condition is returned alongside.
    """
    comp = max_rank_completion(g, x, ctx)
    if comp.rank < g.n:
        raise RankDeficient(
            f"maximum completion rank {comp.rank} < {g.n}; no positive definite completion"
        )
    w = comp.w
    if ctx.exact:
        w_inv = _exact_inverse(w)
    else:
        w_inv = np.linalg.inv(w)
    residual = 0.0
    for i in range(1, g.n + 1):
        for j in range(i + 1, g.n + 1):
            if not g.has_edge(i, j):
                residual = max(residual, abs(float(w_inv[i - 1, j - 1])))
    return Completion(w=w, rank=comp.rank, inverse_pattern_residual=residual)


def completion_determinant(g: Graph, x: PatternMatrix, ctx: Context = DEFAULT_CONTEXT) -> Scalar:
    """det(t t^T) = (product of the factor diagonal)^2, exact-mode friendly."""
    alg, ordering = ordered_instance(g)
    m = membership(alg, pattern_to_element(alg, relabel_pattern(x, ordering)), Side.PRIMAL, ctx)
    if not m.inside:
        raise NotCompletable("pattern matrix has no PSD completion")
    prod = 1
    for i in range(1, alg.rank + 1):
        prod = prod * ta.rho(m.factor.t.elem, i)
    return prod * prod


# ---------------------------------------------------------------------------
# Extreme rays of the completable cone


def _is_chordal(g: Graph) -> bool:
    # simplicial-vertex peeling
    remaining = set(g.vertices())
    adj = {v: g.neighbors(v) for v in g.vertices()}
    while remaining:
        for v in sorted(remaining):
            nbrs = adj[v] & remaining
            if all(g.has_edge(a, b) for a in nbrs for b in nbrs if a < b):
                remaining.discard(v)
                break
        else:
            return False
    return True


def _max_cliques(g: Graph) -> List[frozenset]:
    cliques = []
    verts = list(g.vertices())
    for mask in range(1, 1 << g.n):
        subset = [verts[i] for i in range(g.n) if mask & (1 << i)]
        if all(g.has_edge(a, b) for a in subset for b in subset if a < b):
            cliques.append(frozenset(subset))
    return [c for c in cliques if not any(c < d for d in cliques)]


def _chordal_completable(g: Graph, x: PatternMatrix, tol: float) -> bool:
    # for chordal patterns, completability = every maximal clique block is PSD
    dense = x.to_dense().astype(float)
    for clique in _max_cliques(g):
        idx = [v - 1 for v in sorted(clique)]
        block = dense[np.ix_(idx, idx)]
        if np.linalg.eigvalsh(block).min() < -tol * max(1.0, abs(dense).max()):
            return False
    return True


def max_completion_rank_is_one(g: Graph, x: PatternMatrix, tol: float = 1e-9) -> bool:
    """Decide whether every PSD completion of ``x`` has rank one.

    A rank-one completion vv^T is pinned by the diagonal up to signs, and by
    Cauchy-Schwarz any completion agreeing with vv^T on a connected support
    *is* vv^T.  So the maximum rank is one iff the diagonal square roots admit
    a consistent sign assignment along edges and the resulting support is
    connected; a split support yields a second completion by a sign flip, and
    averaging the two already has rank two.
    """
    dense = x.to_dense().astype(float)
    scale = max(1.0, abs(dense).max())
    eps = tol * scale
    n = g.n
    diag = dense.diagonal()
    if (diag < -eps).any():
        return False
    v = np.sqrt(np.clip(diag, 0.0, None))
    support = [i for i in range(1, n + 1) if v[i - 1] > eps]
    if not support:
        return False  # zero matrix spans no ray
    sign = {}
    adj_sign = {i: [] for i in support}
    for (a, b) in g.edges:
        entry = dense[a - 1, b - 1]
        if abs(entry) <= eps:
            continue
        if v[a - 1] <= eps or v[b - 1] <= eps:
            return False  # nonzero edge entry over a vanishing diagonal: not even completable
        if abs(abs(entry) - v[a - 1] * v[b - 1]) > 1e3 * eps:
            return False  # magnitude incompatible with a rank-one completion
        s = 1 if entry > 0 else -1
        adj_sign[a].append((b, s))
        adj_sign[b].append((a, s))
    # propagate signs and count connected pieces of the support
    pieces = 0
    for start in support:
        if start in sign:
            continue
        pieces += 1
        sign[start] = 1
        stack = [start]
        while stack:
            u = stack.pop()
            for (w, s) in adj_sign[u]:
                expected = sign[u] * s
                if w in sign:
                    if sign[w] != expected:
                        return False  # inconsistent sign cycle
                else:
                    sign[w] = expected
                    stack.append(w)
    return pieces == 1


def extreme_ray_completable(g: Graph, x: PatternMatrix, ctx: Context = DEFAULT_CONTEXT) -> bool:
    """Does ``x`` span an extreme ray of the PSD-completable cone?

    Equivalent to the maximum completion rank being one.  Homogeneous chordal
    patterns go through the factorization (one positive diagonal); plain
    chordal patterns fall back to the direct rank-one test.
    """
    if x.is_zero():
        raise ZeroInput("the zero matrix spans no ray")
    if is_homogeneous_chordal(g):
        m = pattern_membership(g, x, Side.PRIMAL, ctx)
        if not m.inside:
            raise NotCompletable("pattern matrix has no PSD completion")
        return len(m.zero_set) == g.n - 1
    if not _is_chordal(g):
        raise HomconeError("extreme-ray test requires a chordal pattern")
    if not _chordal_completable(g, x, ctx.tol_zero):
        raise NotCompletable("pattern matrix has no PSD completion")
    return max_completion_rank_is_one(g, x, ctx.tol_zero)


# ---------------------------------------------------------------------------
# Faces in the caller's labeling


@dataclass(frozen=True)
class SubgraphFace:
    """Principal face attached to an induced subgraph: cone points whose
    diagonal vanishes off the kept vertices."""

    graph: Graph
    side: Side
    keep: frozenset
    removed: frozenset
    subgraph: Graph
    dimension: int


def face_of_subgraph(g: Graph, keep: Iterable[int], side: Side = Side.DUAL) -> SubgraphFace:
    keep = frozenset(keep)
    if not keep:
        raise BadIndex("kept vertex set must be nonempty")
    for v in keep:
        if not (1 <= v <= g.n):
            raise BadIndex(f"vertex {v} out of range 1..{g.n}")
    sub = induced_subgraph(g, keep)
    dimension = sub.n + len(sub.edges)
    return SubgraphFace(
        graph=g,
        side=side,
        keep=keep,
        removed=frozenset(g.vertices()) - keep,
        subgraph=sub,
        dimension=dimension,
    )


@dataclass(frozen=True)
class PatternFaceCertificate:
    """Face certificate expressed in the caller's vertex labels.

    ``transform`` is the dense congruence factor: conjugating by it maps the
    face onto the principal face of the kept vertices, and maps ``x`` to the
    0/1 diagonal matrix of those vertices.
    """

    graph: Graph
    side: Side
    ordering: Ordering
    removed: frozenset
    face_rank: int
    factor: np.ndarray
    transform: np.ndarray
    transform_inverse: np.ndarray
    projection: np.ndarray
    exposing: np.ndarray
    core: FaceCertificate


def pattern_face(
    g: Graph, x: PatternMatrix, side: Side, ctx: Context = DEFAULT_CONTEXT
) -> PatternFaceCertificate:
    """Minimal-face certificate for a pattern matrix, in original labels."""
    alg, ordering = ordered_instance(g)
    elem = pattern_to_element(alg, relabel_pattern(x, ordering))
    m = require_member(alg, elem, side, ctx)
    cert = certificate_from_membership(alg, elem, m)
    removed = frozenset(ordering.old_label(i) for i in cert.index_set)
    back = lambda e: _unrelabel_dense(alg.element_to_dense(e), ordering)
    return PatternFaceCertificate(
        graph=g,
        side=side,
        ordering=ordering,
        removed=removed,
        face_rank=cert.face_rank,
        factor=back(cert.factor.t.elem),
        transform=back(cert.u.elem),
        transform_inverse=back(cert.u_inv.elem),
        projection=back(cert.projection_elem),
        exposing=back(cert.exposing),
        core=cert,
    )


def congruence_reduce(
    g: Graph,
    cert: PatternFaceCertificate,
    matrices: List[PatternMatrix],
    ctx: Context = DEFAULT_CONTEXT,
) -> Tuple[Graph, List[PatternMatrix]]:
    """Sparsity-preserving facial reduction step.

    Conjugates every matrix by the certificate's transform (which keeps the
    pattern), drops the rows and columns of the removed vertices, and returns
    the induced subgraph with the reduced matrices relabeled onto it.
    """
    if cert.graph != g:
        raise CertificateMismatch("certificate was computed for a different graph")
    keep = sorted(set(g.vertices()) - cert.removed)
    sub = induced_subgraph(g, keep)
    l = cert.transform
    idx = [v - 1 for v in keep]
    reduced = []
    for pm in matrices:
        if pm.graph != g:
            raise CertificateMismatch("matrix pattern does not match the certificate graph")
        dense = pm.to_dense()
        conj = np.dot(np.dot(l, dense), l.T)
        masked = pi_g(g, conj, ctx).to_dense()
        small = masked[np.ix_(idx, idx)]
        reduced.append(pi_g(sub, small, ctx))
    return sub, reduced


def orth_proj_classification(g: Graph) -> bool:
    """True iff every connected component is a clique, which is exactly when
    the completable cone is self-dual and its faces are images of self-adjoint
    projections under the trace inner product."""
    for comp in g.components():
        for a in comp:
            for b in comp:
                if a < b and not g.has_edge(a, b):
                    return False
    return True
