"""Pydantic request/response models for the HTTP surface.

The wire formats double as the file formats the CLI reads and writes:
graphs as {"n", "edges"}, orderings as {"perm"}, pattern matrices as
{"n", "entries"}, matrix-norm elements as {"m", "n", "V", "W", "U", "alpha"},
and generic algebra elements as {"components": {"i,j": [...]}}.  Exact-mode
numbers travel as "p/q" strings.
"""

from __future__ import annotations

from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, model_validator

from ..errors import ParseError
from ..graph import Graph, Ordering
from ..scalars import Context

JsonScalar = Union[int, float, str]
Rows = List[List[JsonScalar]]


class NumericOptions(BaseModel):
    exact: bool = False
    tol_zero: float = Field(default=1e-9, gt=0)
    tol_rec: float = Field(default=1e-7, gt=0)

    def context(self) -> Context:
        return Context(exact=self.exact, tol_zero=self.tol_zero, tol_rec=self.tol_rec)


class GraphModel(BaseModel):
    n: int = Field(ge=0)
    edges: List[Tuple[int, int]] = []

    def to_graph(self) -> Graph:
        return Graph.from_json({"n": self.n, "edges": [list(e) for e in self.edges]})

    @classmethod
    def from_graph(cls, g: Graph) -> "GraphModel":
        return cls(n=g.n, edges=sorted(g.edges))


class OrderingModel(BaseModel):
    perm: List[int]

    def to_ordering(self) -> Ordering:
        return Ordering.from_json({"perm": self.perm})


class AlgebraModel(BaseModel):
    """Which concrete algebra to operate in.

    kind="chordal" needs a graph (relabeled to an elimination ordering unless
    relabel=False, which takes the labels as given); kind="matrixnorm" needs
    the block sizes m and n.
    """

    kind: Literal["chordal", "matrixnorm"]
    graph: Optional[GraphModel] = None
    relabel: bool = True
    m: Optional[int] = None
    n: Optional[int] = None

    @model_validator(mode="after")
    def _check(self):
        if self.kind == "chordal" and self.graph is None:
            raise ValueError("chordal algebra needs a graph")
        if self.kind == "matrixnorm" and (self.m is None or self.n is None):
            raise ValueError("matrixnorm algebra needs m and n")
        return self


class PatternMatrixModel(BaseModel):
    n: int
    entries: List[Tuple[int, int, JsonScalar]]


class MatrixNormBlocksModel(BaseModel):
    m: int
    n: int
    V: Rows
    W: Rows
    U: Rows
    alpha: JsonScalar


class MatrixInput(BaseModel):
    """One of: dense rows, pattern entries, matrix-norm blocks, or generic
    bigraded components."""

    dense: Optional[Rows] = None
    pattern: Optional[PatternMatrixModel] = None
    blocks: Optional[MatrixNormBlocksModel] = None
    components: Optional[Dict[str, List[JsonScalar]]] = None

    @model_validator(mode="after")
    def _exactly_one(self):
        given = [f for f in ("dense", "pattern", "blocks", "components") if getattr(self, f) is not None]
        if len(given) != 1:
            raise ValueError(f"provide exactly one of dense/pattern/blocks/components, got {given}")
        return self


class WitnessModel(BaseModel):
    kind: str
    vertices: List[int]


class RecognizeRequest(BaseModel):
    graph: GraphModel


class RecognizeResponse(BaseModel):
    homogeneous_chordal: bool
    ordering: Optional[List[int]] = None
    witness: Optional[WitnessModel] = None


class OrderRequest(BaseModel):
    graph: GraphModel


class OrderResponse(BaseModel):
    perm: List[int]


class FactorRequest(BaseModel):
    algebra: AlgebraModel
    x: MatrixInput
    side: Literal["primal", "dual"] = "primal"
    options: NumericOptions = NumericOptions()


class FactorResponse(BaseModel):
    side: str
    status: str
    zero_set: List[int]
    residual: float
    t: Dict[str, List[JsonScalar]]
    t_matrix: Optional[Rows] = None
    ordering_used: Optional[List[int]] = None


class FaceRequest(BaseModel):
    algebra: AlgebraModel
    x: MatrixInput
    side: Literal["primal", "dual"] = "primal"
    options: NumericOptions = NumericOptions()


class FaceResponse(BaseModel):
    side: str
    index_set: List[int]
    face_rank: int
    u: Optional[Rows] = None
    v: Optional[Rows] = None
    exposing: Optional[Rows] = None
    u_components: Dict[str, List[JsonScalar]]
    v_components: Dict[str, List[JsonScalar]]
    exposing_components: Dict[str, List[JsonScalar]]
    residuals: Dict[str, float]
    ordering_used: Optional[List[int]] = None


class CompleteRequest(BaseModel):
    graph: GraphModel
    x: MatrixInput
    objective: Literal["max-rank", "max-det"] = "max-rank"
    options: NumericOptions = NumericOptions()


class CompleteResponse(BaseModel):
    w: Rows
    rank: int
    det: Optional[JsonScalar] = None
    inverse_pattern_residual: Optional[float] = None


class ReduceRequest(BaseModel):
    graph: GraphModel
    point: MatrixInput
    matrices: List[MatrixInput]
    options: NumericOptions = NumericOptions()


class ReduceResponse(BaseModel):
    graph: GraphModel
    matrices: List[PatternMatrixModel]
    removed: List[int]
    face_rank: int
    transform: Rows


class CheckAxiomsRequest(BaseModel):
    algebra: AlgebraModel
    n_samples: int = Field(default=100, gt=0)
    seed: int = 42
    tolerance: float = Field(default=1e-10, gt=0)


class AxiomCheckModel(BaseModel):
    axiom: str
    description: str
    max_violation: float
    witness: Optional[dict] = None


class CheckAxiomsResponse(BaseModel):
    checks: List[AxiomCheckModel]
    max_violation: float
    passed: bool


class ErrorResponse(BaseModel):
    error: str
    message: str


def parse_or_raise(model, payload):
    """Validate a raw payload into a request model, mapping failures to ParseError."""
    try:
        return model.model_validate(payload)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
