"""FastAPI application exposing the package over HTTP.

Responses that carry computed data are pre-rendered text (the render
module), not framework-serialized models, so identical requests give
byte-identical bodies.  Errors use a uniform envelope::

    {"error": {"kind": "usage" | "expression" | "domain", "message": ..., ...}}

with status 400 for request/expression problems (kind usage/expression,
plus field and position when known) and 422 for mathematical failures
(kind domain, plus the operator name and its parameters).
"""

from __future__ import annotations

import math
from typing import Callable, TypeVar

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response

from .. import render
from ..errors import (
    DomainError,
    EvalDomainError,
    ExpressionError,
    NonDifferentiableError,
)
from ..expr import Expr, parse
from ..fence import build_fence, snapshot_series
from ..kinematics import distance_fractional, distance_observer_continuous
from ..operators import OperatorSpec, apply_operator
from ..timescale import (
    FellerScale,
    LeftRLScale,
    RieszScale,
    RightRLScale,
    VolterraScale,
)
from .models import (
    DifferentiateRequest,
    DistanceRequest,
    FenceRequest,
    IntegrateRequest,
    SnapshotsRequest,
)

__all__ = ["app", "create_app", "ServiceError"]

T = TypeVar("T")

_COMPUTE_ERRORS = (DomainError, EvalDomainError, NonDifferentiableError)


class ServiceError(Exception):
    """Carries a ready-to-send error envelope."""

    def __init__(self, status_code: int, envelope: dict) -> None:
        super().__init__(envelope["error"]["message"])
        self.status_code = status_code
        self.envelope = envelope


def _usage(message: str, field: str | None = None) -> ServiceError:
    return ServiceError(
        400,
        {"error": {"kind": "usage", "message": message, "field": field, "position": None}},
    )


def _expression(exc: ExpressionError, field: str) -> ServiceError:
    return ServiceError(
        400,
        {
            "error": {
                "kind": "expression",
                "message": str(exc),
                "field": field,
                "position": exc.position,
            }
        },
    )


def _domain(op: str, params: dict, exc: Exception) -> ServiceError:
    cleaned = {key: _jsonable(value) for key, value in params.items() if value is not None}
    return ServiceError(
        422,
        {"error": {"kind": "domain", "message": str(exc), "op": op, "params": cleaned}},
    )


def _jsonable(value):
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def _parse_field(source: str, field: str) -> Expr:
    try:
        return parse(source)
    except ExpressionError as exc:
        raise _expression(exc, field) from exc


def _run(op: str, params: dict, fn: Callable[[], T]) -> T:
    try:
        return fn()
    except _COMPUTE_ERRORS as exc:
        raise _domain(op, params, exc) from exc


def _check_presence(op: str, alpha, b, kernel) -> None:
    if op == "volterra":
        if kernel is None:
            raise _usage("op 'volterra' needs a kernel expression", field="kernel")
    elif alpha is None:
        raise _usage(f"op {op!r} needs alpha", field="alpha")
    if op in ("rl-right", "riesz", "feller") and b is None:
        raise _usage(f"op {op!r} needs the upper limit b", field="b")


def create_app() -> FastAPI:
    app = FastAPI(title="fracshadow", docs_url=None, redoc_url=None)

    @app.exception_handler(ServiceError)
    async def service_error(request: Request, exc: ServiceError) -> JSONResponse:
        return JSONResponse(exc.envelope, status_code=exc.status_code)

    @app.exception_handler(RequestValidationError)
    async def validation_error(
        request: Request, exc: RequestValidationError
    ) -> JSONResponse:
        errors = exc.errors()
        first = errors[0] if errors else {}
        loc = [str(part) for part in first.get("loc", ()) if part != "body"]
        envelope = {
            "error": {
                "kind": "usage",
                "message": str(first.get("msg", "invalid request")),
                "field": ".".join(loc) or None,
                "position": None,
            }
        }
        return JSONResponse(envelope, status_code=400)

    @app.get("/health")
    def health() -> Response:
        return Response('{"status": "ok"}\n', media_type="application/json")

    @app.post("/integrate")
    def integrate(req: IntegrateRequest) -> Response:
        f_expr = _parse_field(req.f, "f")
        _check_presence(req.op, req.alpha, req.b, req.kernel)
        kernel_expr = (
            _parse_field(req.kernel, "kernel") if req.kernel is not None else None
        )
        params = _params(
            alpha=req.alpha, t=req.t, a=req.a, b=req.b, c=req.c, d=req.d,
            kernel=req.kernel, nodes=req.nodes, grading=req.grading,
        )

        def compute():
            spec = OperatorSpec(
                kind=req.op, t=req.t, alpha=req.alpha, a=req.a, b=req.b,
                c=req.c, d=req.d, kernel=kernel_expr, nodes=req.nodes,
                grading=req.grading,
            )
            return apply_operator(spec, f_expr)

        result = _run(req.op, params, compute)
        alpha = None if req.op == "volterra" else req.alpha
        body = render.scalar_json(req.op, alpha, req.t, result)
        return Response(body, media_type="application/json")

    @app.post("/differentiate")
    def differentiate(req: DifferentiateRequest) -> Response:
        f_expr = _parse_field(req.f, "f")
        params = _params(alpha=req.alpha, t=req.t, nodes=req.nodes, grading=req.grading)

        def compute():
            spec = OperatorSpec(
                kind=req.op, t=req.t, alpha=req.alpha, nodes=req.nodes,
                grading=req.grading,
            )
            return apply_operator(spec, f_expr)

        result = _run(req.op, params, compute)
        body = render.scalar_json(req.op, req.alpha, req.t, result)
        return Response(body, media_type="application/json")

    @app.post("/fence")
    def fence(req: FenceRequest) -> Response:
        f_expr = _parse_field(req.f, "f")
        _check_presence(req.op, req.alpha, req.b, req.kernel)
        kernel_expr = (
            _parse_field(req.kernel, "kernel") if req.kernel is not None else None
        )
        params = _params(
            alpha=req.alpha, t=req.t, a=req.a, b=req.b, c=req.c, d=req.d,
            kernel=req.kernel, nodes=req.nodes,
        )

        def compute():
            scale = _build_scale(req, kernel_expr)
            return build_fence(f_expr, scale, req.nodes)

        built = _run(req.op, params, compute)
        return Response(render.fence_csv(built), media_type="text/csv")

    @app.post("/snapshots")
    def snapshots(req: SnapshotsRequest) -> Response:
        f_expr = _parse_field(req.f, "f")
        params = _params(alpha=req.alpha, t_max=req.t_max, dt=req.dt, nodes=req.nodes)
        series = _run(
            "snapshots",
            params,
            lambda: snapshot_series(f_expr, req.alpha, req.t_max, req.dt, req.nodes),
        )
        return Response(render.snapshots_csv(series), media_type="text/csv")

    @app.post("/distance")
    def distance(req: DistanceRequest) -> Response:
        f_expr = _parse_field(req.f, "f")
        if (req.alpha is None) == (req.kernel is None):
            raise _usage(
                "provide exactly one of alpha (fractional distance) or "
                "kernel (continuous deformation)",
                field="alpha",
            )
        if req.alpha is not None:
            params = _params(alpha=req.alpha, t=req.t, nodes=req.nodes)
            result = _run(
                "distance-fractional",
                params,
                lambda: distance_fractional(f_expr, req.alpha, req.t, n=req.nodes),
            )
            body = render.scalar_json("distance-fractional", req.alpha, req.t, result)
        else:
            g_expr = _parse_field(req.kernel, "kernel")
            params = _params(kernel=req.kernel, t=req.t, nodes=req.nodes)
            result = _run(
                "distance-observer",
                params,
                lambda: distance_observer_continuous(f_expr, g_expr, req.t, n=req.nodes),
            )
            body = render.scalar_json("distance-observer", None, req.t, result)
        return Response(body, media_type="application/json")

    @app.get("/demo/table1")
    def demo_table1() -> Response:
        return Response(render.table1_text(), media_type="text/plain")

    return app


def _params(**kwargs) -> dict:
    return {key: value for key, value in kwargs.items() if value is not None}


def _build_scale(req: FenceRequest, kernel_expr: Expr | None):
    if req.op == "rl-left":
        return LeftRLScale(req.alpha, req.t)
    if req.op == "rl-right":
        return RightRLScale(req.alpha, req.t, req.b)
    if req.op == "riesz":
        return RieszScale(req.alpha, req.t, req.b)
    if req.op == "feller":
        return FellerScale(req.alpha, req.c, req.d, req.a, req.b, req.t)
    return VolterraScale(kernel_expr, req.t)


app = create_app()
