"""Service layer: one function per operation.

The FastAPI endpoints and the CLI both call these; the CLI is a thin client
that feeds the same request models and prints the same response models.
"""

from __future__ import annotations

from typing import Optional, Tuple

import numpy as np

from .. import chordal, faces, matrixnorm, talgebra as ta
from ..cholesky import Membership, Side, membership, require_member
from ..errors import NotHermitian, ParseError
from ..graph import Graph, Ordering, is_homogeneous_chordal, trivially_perfect_ordering, find_p4_or_c4
from ..scalars import Context, scalar_to_json
from ..talgebra import AlgebraInstance, Element
from . import schemas as S


# ---------------------------------------------------------------------------
# Input assembly


def _rows_to_matrix(rows, ctx: Context):
    from ..scalars import parse_scalar

    return [[parse_scalar(v, ctx) for v in row] for row in rows]


def _build_chordal(model: S.AlgebraModel) -> Tuple[chordal.PatternAlgebra, Ordering]:
    g = model.graph.to_graph()
    if model.relabel:
        return chordal.ordered_instance(g)
    return chordal.PatternAlgebra(g), Ordering.identity(g.n)


def _build_matrixnorm(model: S.AlgebraModel) -> matrixnorm.MatrixNormAlgebra:
    return matrixnorm.build_instance(model.m, model.n)


def _chordal_element(
    alg: chordal.PatternAlgebra, ordering: Ordering, g: Graph, x: S.MatrixInput, ctx: Context
) -> Element:
    if x.components is not None:
        elem = ta.element_from_json({"components": x.components}, ctx)
        ta.check_conforms(alg, elem)
        return elem
    if x.pattern is not None:
        pm = chordal.PatternMatrix.from_json(g, x.pattern.model_dump(), ctx)
    elif x.dense is not None:
        pm = chordal.pi_g(g, _rows_to_matrix(x.dense, ctx), ctx)
    else:
        raise ParseError("chordal inputs must be dense, pattern, or components")
    return chordal.pattern_to_element(alg, chordal.relabel_pattern(pm, ordering))


def _matrixnorm_element(alg: matrixnorm.MatrixNormAlgebra, x: S.MatrixInput, ctx: Context) -> Element:
    if x.components is not None:
        elem = ta.element_from_json({"components": x.components}, ctx)
        ta.check_conforms(alg, elem)
        return elem
    if x.blocks is not None:
        blk = matrixnorm.MatrixNormElement.from_json(x.blocks.model_dump(), ctx)
        return blk.to_element(alg)
    if x.dense is not None:
        rows = _rows_to_matrix(x.dense, ctx)
        m, n = alg.m, alg.n
        if len(rows) != m + n or any(len(r) != m + n for r in rows):
            raise ParseError(f"dense matrix must be {(m + n)}x{(m + n)}")
        arr = np.array([[float(v) for v in row] for row in rows])
        tail = arr[m:, m:]
        alpha = rows[m][m]
        if np.abs(tail - float(alpha) * np.eye(n)).max(initial=0.0) > 1e-8 * max(1.0, np.abs(arr).max()):
            raise ParseError("lower-right block must be a scalar multiple of the identity")
        dt = object if ctx.exact else float
        blk = matrixnorm.MatrixNormElement(
            V=np.array([r[:m] for r in rows[:m]], dtype=dt),
            W=np.array([r[m:] for r in rows[:m]], dtype=dt),
            U=np.array([[rows[m + k][i] for k in range(n)] for i in range(m)], dtype=dt),
            alpha=alpha,
        )
        return blk.to_element(alg)
    raise ParseError("matrixnorm inputs must be dense, blocks, or components")


def _components_json(elem: Element) -> dict:
    return ta.element_to_json(elem)["components"]


def _dense_rows_json(dense: np.ndarray) -> list:
    return [[scalar_to_json(v) for v in row] for row in dense.tolist()]


# ---------------------------------------------------------------------------
# Operations


def do_recognize(req: S.RecognizeRequest) -> S.RecognizeResponse:
    g = req.graph.to_graph()
    if is_homogeneous_chordal(g):
        ordering = trivially_perfect_ordering(g)
        return S.RecognizeResponse(homogeneous_chordal=True, ordering=list(ordering.perm))
    kind, vertices = find_p4_or_c4(g)
    return S.RecognizeResponse(
        homogeneous_chordal=False,
        witness=S.WitnessModel(kind=kind, vertices=sorted(vertices)),
    )


def do_order(req: S.OrderRequest) -> S.OrderResponse:
    ordering = trivially_perfect_ordering(req.graph.to_graph())
    return S.OrderResponse(perm=list(ordering.perm))


def do_factor(req: S.FactorRequest) -> S.FactorResponse:
    ctx = req.options.context()
    side = Side(req.side)
    if req.algebra.kind == "chordal":
        g = req.algebra.graph.to_graph()
        alg, ordering = _build_chordal(req.algebra)
        elem = _chordal_element(alg, ordering, g, req.x, ctx)
        m = membership(alg, elem, side, ctx)
        dense = chordal._unrelabel_dense(alg.element_to_dense(m.factor.t.elem), ordering)
        zero_set = sorted(ordering.old_label(i) for i in m.zero_set)
        return S.FactorResponse(
            side=side.value,
            status=m.status.value,
            zero_set=zero_set,
            residual=m.residual,
            t=_components_json(m.factor.t.elem),
            t_matrix=_dense_rows_json(dense),
            ordering_used=list(ordering.perm),
        )
    alg = _build_matrixnorm(req.algebra)
    elem = _matrixnorm_element(alg, req.x, ctx)
    m = membership(alg, elem, side, ctx)
    blk = matrixnorm.MatrixNormElement.from_element(alg, m.factor.t.elem)
    full = blk.to_full_matrix()
    return S.FactorResponse(
        side=side.value,
        status=m.status.value,
        zero_set=sorted(m.zero_set),
        residual=m.residual,
        t=_components_json(m.factor.t.elem),
        t_matrix=_dense_rows_json(full),
    )


def _face_residuals(alg: AlgebraInstance, cert: faces.FaceCertificate) -> dict:
    e_partial = ta.principal_identity(alg, cert.index_set)
    solve = ta.norm(alg, ta.sub(ta.star(alg, cert.u.elem, cert.factor.t.elem), e_partial))
    ortho = abs(float(ta.inner(alg, cert.x, cert.exposing)))
    projected = faces.face_projection_apply(alg, cert, cert.x)
    fixes = ta.norm(alg, ta.sub(projected, cert.x))
    return {"solve": solve, "orthogonality": ortho, "projection_fixes_point": fixes}


def do_face(req: S.FaceRequest) -> S.FaceResponse:
    ctx = req.options.context()
    side = Side(req.side)
    if req.algebra.kind == "chordal":
        g = req.algebra.graph.to_graph()
        alg, ordering = _build_chordal(req.algebra)
        elem = _chordal_element(alg, ordering, g, req.x, ctx)
        m = require_member(alg, elem, side, ctx)
        cert = faces.certificate_from_membership(alg, elem, m)
        residuals = _face_residuals(alg, cert)
        residuals["reconstruction"] = m.residual
        back = lambda e: _dense_rows_json(
            chordal._unrelabel_dense(alg.element_to_dense(e), ordering)
        )
        return S.FaceResponse(
            side=side.value,
            index_set=sorted(ordering.old_label(i) for i in cert.index_set),
            face_rank=cert.face_rank,
            u=back(cert.u.elem),
            v=back(cert.projection_elem),
            exposing=back(cert.exposing),
            u_components=_components_json(cert.u.elem),
            v_components=_components_json(cert.projection_elem),
            exposing_components=_components_json(cert.exposing),
            residuals=residuals,
            ordering_used=list(ordering.perm),
        )
    alg = _build_matrixnorm(req.algebra)
    elem = _matrixnorm_element(alg, req.x, ctx)
    m = require_member(alg, elem, side, ctx)
    cert = faces.certificate_from_membership(alg, elem, m)
    residuals = _face_residuals(alg, cert)
    residuals["reconstruction"] = m.residual
    as_full = lambda e: _dense_rows_json(
        matrixnorm.MatrixNormElement.from_element(alg, e).to_full_matrix()
    )
    return S.FaceResponse(
        side=side.value,
        index_set=sorted(cert.index_set),
        face_rank=cert.face_rank,
        u=as_full(cert.u.elem),
        v=as_full(cert.projection_elem),
        exposing=as_full(cert.exposing),
        u_components=_components_json(cert.u.elem),
        v_components=_components_json(cert.projection_elem),
        exposing_components=_components_json(cert.exposing),
        residuals=residuals,
    )


def _parse_pattern_input(g: Graph, x: S.MatrixInput, ctx: Context) -> chordal.PatternMatrix:
    if x.pattern is not None:
        return chordal.PatternMatrix.from_json(g, x.pattern.model_dump(), ctx)
    if x.dense is not None:
        return chordal.pi_g(g, _rows_to_matrix(x.dense, ctx), ctx)
    raise ParseError("completion inputs must be dense rows or pattern entries")


def do_complete(req: S.CompleteRequest) -> S.CompleteResponse:
    ctx = req.options.context()
    g = req.graph.to_graph()
    pm = _parse_pattern_input(g, req.x, ctx)
    det = chordal.completion_determinant(g, pm, ctx)
    if req.objective == "max-det":
        comp = chordal.max_det_completion(g, pm, ctx)
    else:
        comp = chordal.max_rank_completion(g, pm, ctx)
    return S.CompleteResponse(
        w=_dense_rows_json(comp.w),
        rank=comp.rank,
        det=scalar_to_json(det),
        inverse_pattern_residual=comp.inverse_pattern_residual,
    )


def do_reduce(req: S.ReduceRequest) -> S.ReduceResponse:
    ctx = req.options.context()
    g = req.graph.to_graph()
    point = _parse_pattern_input(g, req.point, ctx)
    matrices = [_parse_pattern_input(g, m, ctx) for m in req.matrices]
    cert = chordal.pattern_face(g, point, Side.DUAL, ctx)
    sub, reduced = chordal.congruence_reduce(g, cert, matrices, ctx)
    return S.ReduceResponse(
        graph=S.GraphModel.from_graph(sub),
        matrices=[S.PatternMatrixModel.model_validate(pm.to_json()) for pm in reduced],
        removed=sorted(cert.removed),
        face_rank=cert.face_rank,
        transform=_dense_rows_json(cert.transform),
    )


def do_check_axioms(req: S.CheckAxiomsRequest) -> S.CheckAxiomsResponse:
    if req.algebra.kind == "chordal":
        alg, _ = _build_chordal(req.algebra)
    else:
        alg = _build_matrixnorm(req.algebra)
    report = ta.check_axioms(alg, n_samples=req.n_samples, seed=req.seed)
    return S.CheckAxiomsResponse(
        checks=[S.AxiomCheckModel(**c.to_json()) for c in report.checks],
        max_violation=report.max_violation,
        passed=report.passed(req.tolerance),
    )
