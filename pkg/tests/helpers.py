"""Shared oracles and enumerators for the tests.

These deliberately avoid the code paths they are used to check: recognition is
cross-checked against an explicit isomorphism scan, extreme rays against a
brute-force sign enumeration with eigenvalue checks, and so on.
"""

import itertools
from fractions import Fraction

import numpy as np

from homcone import chordal
from homcone.graph import Graph, trivially_perfect_ordering


def all_graphs(n):
    """Every labeled simple graph on vertices 1..n."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, frozenset(p for i, p in enumerate(pairs) if mask & (1 << i)))


def _quad_templates(quad):
    """All induced-P4 and induced-C4 edge sets on a fixed 4-vertex subset."""
    p4, c4 = set(), set()
    for perm in itertools.permutations(quad):
        a, b, c, d = perm
        p4.add(frozenset({frozenset({a, b}), frozenset({b, c}), frozenset({c, d})}))
        c4.add(
            frozenset(
                {frozenset({a, b}), frozenset({b, c}), frozenset({c, d}), frozenset({d, a})}
            )
        )
    return p4, c4


def brute_force_homogeneous_chordal(g: Graph) -> bool:
    """Independent recognition oracle: exhaustive induced-subgraph scan."""
    edges = {frozenset(e) for e in g.edges}
    for quad in itertools.combinations(g.vertices(), 4):
        present = frozenset(
            frozenset(p) for p in itertools.combinations(quad, 2) if frozenset(p) in edges
        )
        if len(present) not in (3, 4):
            continue
        p4, c4 = _quad_templates(quad)
        if present in p4 or present in c4:
            return False
    return True


def tp_graphs_upto(n_max):
    """Homogeneous chordal graphs with 1..n_max vertices, one per canonical
    (elimination-relabeled) edge set."""
    seen, out = set(), []
    for n in range(1, n_max + 1):
        for g in all_graphs(n):
            try:
                ordering = trivially_perfect_ordering(g)
            except Exception:
                continue
            h = ordering.apply(g)
            key = (h.n, h.edges)
            if key not in seen:
                seen.add(key)
                out.append(h)
    return out


def eigen_rank(m, tol=1e-7):
    vals = np.linalg.eigvalsh(np.asarray(m, dtype=float))
    scale = max(1.0, float(abs(vals).max(initial=0.0)))
    return int((vals > tol * scale).sum())


def is_psd(m, tol=1e-9):
    vals = np.linalg.eigvalsh(np.asarray(m, dtype=float))
    scale = max(1.0, float(abs(vals).max(initial=0.0)))
    return bool(vals.min() >= -tol * scale)


def mask_to_pattern(g: Graph, dense):
    dense = np.asarray(dense, dtype=float)
    out = np.zeros_like(dense)
    for i in g.vertices():
        out[i - 1, i - 1] = dense[i - 1, i - 1]
    for (a, b) in g.edges:
        out[a - 1, b - 1] = dense[a - 1, b - 1]
        out[b - 1, a - 1] = dense[b - 1, a - 1]
    return out


def rank_one_max_completion_oracle(g: Graph, dense, tol=1e-8) -> bool:
    """Brute-force decision of 'every PSD completion has rank one'.

    Enumerates all sign patterns of the diagonal square roots, keeps those
    whose rank-one matrix restricts to the input, and rejects when none work
    or when two distinct ones do (their average is then a rank-two completion,
    confirmed by eigendecomposition).
    """
    dense = np.asarray(dense, dtype=float)
    n = g.n
    scale = max(1.0, float(abs(dense).max(initial=0.0)))
    diag = dense.diagonal()
    if (diag < -tol * scale).any():
        return False
    v = np.sqrt(np.clip(diag, 0.0, None))
    completions = []
    for signs in itertools.product((1.0, -1.0), repeat=n):
        vs = v * np.array(signs)
        w = np.outer(vs, vs)
        if abs(mask_to_pattern(g, w) - dense).max() <= 1e3 * tol * scale:
            if not any(abs(w - other).max() <= tol * scale for other in completions):
                completions.append(w)
    if not completions:
        return False
    if len(completions) >= 2:
        blended = 0.5 * (completions[0] + completions[1])
        assert eigen_rank(blended) >= 2
        return False
    return True


def sample_completable_point(g: Graph, rng, rank=None):
    """Pattern restriction of a random PSD matrix of the given rank.

    Entries are kept well away from zero (or exactly zero) so that the
    discrete rank decisions under test are not sitting on the boundary.
    """
    n = g.n
    if rank is None:
        rank = int(rng.integers(1, n + 1))
    b = rng.uniform(0.3, 1.5, size=(n, rank)) * rng.choice([-1.0, 1.0], size=(n, rank))
    b *= rng.uniform(size=(n, rank)) > 0.15  # occasional exact zeros
    w = b @ b.T
    return chordal.pi_g(g, w)


def dense_exact(rows):
    return [[Fraction(v) for v in row] for row in rows]
