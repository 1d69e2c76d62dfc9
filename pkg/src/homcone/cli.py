"""Command line front end.

A thin client over the service layer: every subcommand assembles the same
request payload the HTTP endpoint accepts, runs it in-process by default, or
POSTs it to a running server when --server is given, and prints the response
as deterministic JSON (12 significant digits; exact mode prints fractions).

Exit codes: 0 success, 1 domain failure (outside cone, not completable, ...),
2 malformed input.
"""

from __future__ import annotations

import sys

import click

from .errors import HomconeError, ParseError
from .jsonutil import canonical_dumps, load_json_file
from .service import handlers
from .service import schemas as S
from .service.schemas import parse_or_raise

ROUTES = {
    "/recognize": (S.RecognizeRequest, handlers.do_recognize),
    "/order": (S.OrderRequest, handlers.do_order),
    "/factor": (S.FactorRequest, handlers.do_factor),
    "/face": (S.FaceRequest, handlers.do_face),
    "/complete": (S.CompleteRequest, handlers.do_complete),
    "/reduce": (S.ReduceRequest, handlers.do_reduce),
    "/check-axioms": (S.CheckAxiomsRequest, handlers.do_check_axioms),
}


class CliState:
    def __init__(self, exact, tol_zero, tol_rec, seed, compact, server):
        self.exact = exact
        self.tol_zero = tol_zero
        self.tol_rec = tol_rec
        self.seed = seed
        self.compact = compact
        self.server = server

    def options_payload(self) -> dict:
        return {"exact": self.exact, "tol_zero": self.tol_zero, "tol_rec": self.tol_rec}

    def run(self, path: str, payload: dict) -> dict:
        if self.server:
            import httpx

            resp = httpx.post(self.server.rstrip("/") + path, json=payload, timeout=120.0)
            body = resp.json()
            if resp.status_code >= 400:
                raise HomconeError(body.get("message", str(body)))
            return body
        model_cls, handler = ROUTES[path]
        return handler(parse_or_raise(model_cls, payload)).model_dump()

    def emit(self, data: dict) -> None:
        click.echo(canonical_dumps(data, compact=self.compact))


def _fail(exc: Exception, code: int) -> None:
    msg = {"error": type(exc).__name__, "message": str(exc)}
    if hasattr(exc, "kind"):
        msg["witness"] = {"kind": exc.kind, "vertices": sorted(exc.vertices)}
    click.echo(canonical_dumps(msg), err=True)
    sys.exit(code)


def _guarded(state: CliState, path: str, payload: dict, failure_status=None) -> None:
    try:
        out = state.run(path, payload)
    except ParseError as exc:
        _fail(exc, 2)
    except HomconeError as exc:
        _fail(exc, 1)
    else:
        state.emit(out)
        if failure_status and out.get("status") == failure_status:
            sys.exit(1)


def _load_graph(path: str) -> dict:
    data = load_json_file(path)
    if not isinstance(data, dict) or "n" not in data:
        raise ParseError(f"{path} does not contain a graph ({{'n', 'edges'}})")
    return {"n": data["n"], "edges": data.get("edges", [])}


def _algebra_payload(spec: str, relabel: bool) -> dict:
    """Either a graph file path or the literal 'matrixnorm m n'."""
    parts = spec.split()
    if parts and parts[0] == "matrixnorm":
        if len(parts) != 3:
            raise ParseError("matrixnorm algebra spec must be 'matrixnorm m n'")
        try:
            m, n = int(parts[1]), int(parts[2])
        except ValueError as exc:
            raise ParseError("matrixnorm block sizes must be integers") from exc
        return {"kind": "matrixnorm", "m": m, "n": n}
    return {"kind": "chordal", "graph": _load_graph(spec), "relabel": relabel}


def _matrix_payload(path: str) -> dict:
    data = load_json_file(path)
    if isinstance(data, list):
        return {"dense": data}
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a matrix object or dense rows")
    if "entries" in data:
        return {"pattern": {"n": data.get("n"), "entries": data["entries"]}}
    if "components" in data:
        return {"components": data["components"]}
    if "V" in data:
        return {"blocks": data}
    if "dense" in data:
        return {"dense": data["dense"]}
    raise ParseError(f"{path}: unrecognized matrix format")


@click.group()
@click.option("--exact", is_flag=True, help="exact rational arithmetic")
@click.option("--tol-zero", type=float, default=1e-9, show_default=True, help="zero-diagonal cutoff (relative)")
@click.option("--tol-rec", type=float, default=1e-7, show_default=True, help="reconstruction tolerance (relative)")
@click.option("--seed", type=int, default=42, show_default=True, help="sampling seed")
@click.option("--json", "compact", is_flag=True, help="compact single-line JSON output")
@click.option("--server", default=None, help="URL of a running service to talk to")
@click.pass_context
def main(ctx, exact, tol_zero, tol_rec, seed, compact, server):
    """Factor, analyze faces of, and complete matrices over homogeneous cones."""
    try:
        ctx.obj = CliState(exact, tol_zero, tol_rec, seed, compact, server)
    except ValueError as exc:
        _fail(exc, 2)


@main.command()
@click.argument("graph_file")
@click.pass_obj
def recognize(state: CliState, graph_file):
    """Test a graph for homogeneous chordality; print ordering or witness."""
    try:
        payload = {"graph": _load_graph(graph_file)}
    except ParseError as exc:
        _fail(exc, 2)
    _guarded(state, "/recognize", payload)


@main.command()
@click.argument("graph_file")
@click.pass_obj
def order(state: CliState, graph_file):
    """Print a trivially perfect elimination ordering of the graph."""
    try:
        payload = {"graph": _load_graph(graph_file)}
    except ParseError as exc:
        _fail(exc, 2)
    _guarded(state, "/order", payload)


@main.command()
@click.argument("algebra")
@click.argument("matrix_file")
@click.option("--side", type=click.Choice(["primal", "dual"]), default="primal", show_default=True)
@click.option("--as-given-ordering", is_flag=True, help="chordal: use labels as given, skip relabeling")
@click.pass_obj
def factor(state: CliState, algebra, matrix_file, side, as_given_ordering):
    """Proper triangular factor and membership report.

    ALGEBRA is a graph file or the literal 'matrixnorm m n'.
    """
    try:
        payload = {
            "algebra": _algebra_payload(algebra, not as_given_ordering),
            "x": _matrix_payload(matrix_file),
            "side": side,
            "options": state.options_payload(),
        }
    except ParseError as exc:
        _fail(exc, 2)
    _guarded(state, "/factor", payload, failure_status="outside")


@main.command()
@click.argument("algebra")
@click.argument("matrix_file")
@click.option("--side", type=click.Choice(["primal", "dual"]), default="primal", show_default=True)
@click.pass_obj
def face(state: CliState, algebra, matrix_file, side):
    """Minimal-face certificate: index set, automorphism, projection, exposing vector."""
    try:
        payload = {
            "algebra": _algebra_payload(algebra, True),
            "x": _matrix_payload(matrix_file),
            "side": side,
            "options": state.options_payload(),
        }
    except ParseError as exc:
        _fail(exc, 2)
    _guarded(state, "/face", payload)


@main.command()
@click.argument("graph_file")
@click.argument("matrix_file")
@click.option("--max-rank", "objective", flag_value="max-rank", default=True)
@click.option("--max-det", "objective", flag_value="max-det")
@click.pass_obj
def complete(state: CliState, graph_file, matrix_file, objective):
    """PSD completion of a pattern matrix (maximum rank or maximum determinant)."""
    try:
        payload = {
            "graph": _load_graph(graph_file),
            "x": _matrix_payload(matrix_file),
            "objective": objective,
            "options": state.options_payload(),
        }
    except ParseError as exc:
        _fail(exc, 2)
    _guarded(state, "/complete", payload)


@main.command()
@click.argument("graph_file")
@click.argument("problem_file")
@click.pass_obj
def reduce(state: CliState, graph_file, problem_file):
    """Facial reduction step: conjugate and shrink a problem onto the minimal face.

    PROBLEM_FILE holds {"point": <matrix>, "matrices": [<matrix>, ...]}, where
    the point lies in the relative interior of the face the problem lives on.
    """
    try:
        data = load_json_file(problem_file)
        if not isinstance(data, dict) or "point" not in data or "matrices" not in data:
            raise ParseError(f"{problem_file} must contain 'point' and 'matrices'")

        def as_matrix(obj):
            if isinstance(obj, list):
                return {"dense": obj}
            if "entries" in obj:
                return {"pattern": {"n": obj.get("n"), "entries": obj["entries"]}}
            if "dense" in obj:
                return {"dense": obj["dense"]}
            raise ParseError("matrices must be dense rows or pattern objects")

        payload = {
            "graph": _load_graph(graph_file),
            "point": as_matrix(data["point"]),
            "matrices": [as_matrix(mtx) for mtx in data["matrices"]],
            "options": state.options_payload(),
        }
    except ParseError as exc:
        _fail(exc, 2)
    _guarded(state, "/reduce", payload)


@main.command("check-axioms")
@click.argument("algebra")
@click.option("--samples", type=int, default=100, show_default=True)
@click.option("--as-given-ordering", is_flag=True, help="chordal: use labels as given, skip relabeling")
@click.option("--tolerance", type=float, default=1e-10, show_default=True)
@click.pass_obj
def check_axioms(state: CliState, algebra, samples, as_given_ordering, tolerance):
    """Run the structure-axiom suite on seeded random elements."""
    try:
        payload = {
            "algebra": _algebra_payload(algebra, not as_given_ordering),
            "n_samples": samples,
            "seed": state.seed,
            "tolerance": tolerance,
        }
    except ParseError as exc:
        _fail(exc, 2)
    try:
        out = state.run("/check-axioms", payload)
    except ParseError as exc:
        _fail(exc, 2)
    except HomconeError as exc:
        _fail(exc, 1)
    else:
        state.emit(out)
        if not out.get("passed", False):
            sys.exit(1)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
