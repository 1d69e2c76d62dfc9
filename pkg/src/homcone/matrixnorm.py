"""The matrix-norm-cone algebra: a second, structurally different instance.

Elements are (m+n) x (m+n) real matrices of the block form

    [ V  W ]
    [ U^T  alpha I_n ]

with V of size m x m.  Multiplication matches the ordinary matrix product on
every block except the lower-right, where the product collapses to the scalar
trace(U1 W2^T) + alpha1 alpha2 times the identity.  This yields an algebra of
rank m + 1 whose closed primal cone is exactly the PSD matrices of the block
form above: the matrix-norm cone.  Its principal faces are either smaller PSD
cones (when the scalar block index m+1 is removed) or smaller matrix-norm
cones (when it survives).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .errors import BadDims, BadIndex, ParseError
from .scalars import Context, DEFAULT_CONTEXT, parse_scalar, scalar_to_json
from .talgebra import AlgebraInstance, Element


class MatrixNormAlgebra(AlgebraInstance):
    """Rank m+1 algebra behind the matrix-norm cone.

    Components: (i, j) with i, j <= m are the entries of V; (i, m+1) is row i
    of W; (m+1, i) is row i of U; (m+1, m+1) is the scalar alpha.
    """

    def __init__(self, m: int, n: int):
        if m < 1 or n < 1:
            raise BadDims(f"block sizes must be positive, got m={m}, n={n}")
        self.m = m
        self.n = n
        self.rank = m + 1

    def dim(self, i: int, j: int) -> int:
        if not (1 <= i <= self.rank and 1 <= j <= self.rank):
            return 0
        s = self.rank
        if i == s and j == s:
            return 1
        if i == s or j == s:
            return self.n
        return 1

    def component_mul(self, i, j, k, a, b):
        s = self.rank
        if j < s:
            if i < s and k < s:
                return (a[0] * b[0],)  # V entry times V entry
            if i < s and k == s:
                return tuple(a[0] * x for x in b)  # V entry scales a W row
            if i == s and k < s:
                return tuple(x * b[0] for x in a)  # V entry scales a U row
            return (sum(x * y for x, y in zip(a, b)),)  # U row dot W row -> alpha
        # j == s
        if i < s and k == s:
            return tuple(x * b[0] for x in a)  # alpha scales a W row
        if i == s and k < s:
            return tuple(a[0] * x for x in b)  # alpha scales a U row
        if i < s and k < s:
            return (sum(x * y for x, y in zip(a, b)),)  # W row dot U row -> V entry
        return (a[0] * b[0],)  # alpha times alpha

    def component_invol(self, i, j, a):
        return tuple(a)


@dataclass(frozen=True)
class MatrixNormElement:
    """Block view of an algebra element: V (m x m), W and U (m x n), alpha."""

    V: np.ndarray
    W: np.ndarray
    U: np.ndarray
    alpha: object

    @property
    def m(self) -> int:
        return self.V.shape[0]

    @property
    def n(self) -> int:
        return self.W.shape[1]

    def is_hermitian(self, tol: float = 1e-9) -> bool:
        v_sym = np.abs(self.V.astype(float) - self.V.astype(float).T).max(initial=0.0) <= tol
        wu = np.abs(self.W.astype(float) - self.U.astype(float)).max(initial=0.0) <= tol
        return bool(v_sym and wu)

    def to_element(self, alg: MatrixNormAlgebra) -> Element:
        if self.m != alg.m or self.n != alg.n:
            raise BadDims("block sizes do not match the algebra")
        s = alg.rank
        comps = {}
        for i in range(1, alg.m + 1):
            for j in range(1, alg.m + 1):
                comps[(i, j)] = (self.V[i - 1, j - 1],)
            comps[(i, s)] = tuple(self.W[i - 1, :])
            comps[(s, i)] = tuple(self.U[i - 1, :])
        comps[(s, s)] = (self.alpha,)
        return Element(comps)

    @classmethod
    def from_element(cls, alg: MatrixNormAlgebra, a: Element) -> "MatrixNormElement":
        exact = any(isinstance(v, Fraction) for vec in a.components.values() for v in vec)
        dt = object if exact else float
        zero = Fraction(0) if exact else 0.0
        m, n, s = alg.m, alg.n, alg.rank
        V = np.full((m, m), zero, dtype=dt)
        W = np.full((m, n), zero, dtype=dt)
        U = np.full((m, n), zero, dtype=dt)
        alpha = zero
        for (i, j), vec in a.components.items():
            if i == s and j == s:
                alpha = vec[0]
            elif j == s:
                W[i - 1, :] = vec
            elif i == s:
                U[j - 1, :] = vec
            else:
                V[i - 1, j - 1] = vec[0]
        return cls(V=V, W=W, U=U, alpha=alpha)

    def to_full_matrix(self) -> np.ndarray:
        """Ordinary (m+n) x (m+n) matrix with W upper-right and U^T lower-left."""
        m, n = self.m, self.n
        full = np.zeros((m + n, m + n))
        full[:m, :m] = self.V.astype(float)
        full[:m, m:] = self.W.astype(float)
        full[m:, :m] = self.U.astype(float).T
        full[m:, m:] = float(self.alpha) * np.eye(n)
        return full

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "V": [[scalar_to_json(v) for v in row] for row in self.V.tolist()],
            "W": [[scalar_to_json(v) for v in row] for row in self.W.tolist()],
            "U": [[scalar_to_json(v) for v in row] for row in self.U.tolist()],
            "alpha": scalar_to_json(self.alpha),
        }

    @classmethod
    def from_json(cls, data, ctx: Context = DEFAULT_CONTEXT) -> "MatrixNormElement":
        try:
            m, n = int(data["m"]), int(data["n"])
            V = [[parse_scalar(v, ctx) for v in row] for row in data["V"]]
            W = [[parse_scalar(v, ctx) for v in row] for row in data["W"]]
            U = [[parse_scalar(v, ctx) for v in row] for row in data["U"]]
            alpha = parse_scalar(data["alpha"], ctx)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad matrix-norm element payload: {exc}") from exc
        dt = object if ctx.exact else float
        V, W, U = (np.array(B, dtype=dt) for B in (V, W, U))
        if V.shape != (m, m) or W.shape != (m, n) or U.shape != (m, n):
            raise ParseError("block shapes do not match m and n")
        return cls(V=V, W=W, U=U, alpha=alpha)


def build_instance(m: int, n: int) -> MatrixNormAlgebra:
    return MatrixNormAlgebra(m, n)


def full_matrix(alg: MatrixNormAlgebra, a: Element) -> np.ndarray:
    return MatrixNormElement.from_element(alg, a).to_full_matrix()


def psd_oracle(alg: MatrixNormAlgebra, a: Element, tol: float = 1e-9) -> bool:
    """Eigenvalue test of the ordinary block matrix; the independent check
    for primal-cone membership."""
    full = full_matrix(alg, a)
    scale = max(1.0, np.abs(full).max(initial=0.0))
    return bool(np.linalg.eigvalsh(full).min() >= -tol * scale)


@dataclass(frozen=True)
class PrincipalFaceKind:
    """What a principal face of the matrix-norm cone is isomorphic to."""

    kind: str  # "psd" or "matrix_norm"
    size: int
    cols: Optional[int] = None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "size": self.size}
        if self.cols is not None:
            out["cols"] = self.cols
        return out


def classify_principal_face(m: int, n: int, index_set: Iterable[int]) -> PrincipalFaceKind:
    """Removing the scalar index leaves a PSD cone of the surviving V block;
    keeping it leaves a smaller matrix-norm cone."""
    index_set = frozenset(index_set)
    for i in index_set:
        if not (1 <= i <= m + 1):
            raise BadIndex(f"index {i} out of range 1..{m + 1}")
    if m + 1 in index_set:
        return PrincipalFaceKind(kind="psd", size=m - len(index_set - {m + 1}))
    return PrincipalFaceKind(kind="matrix_norm", size=m - len(index_set), cols=n)
