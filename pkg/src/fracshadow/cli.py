"""Command-line client.

Verbs map one-to-one onto service endpoints; by default the requests
run against the application in-process (no socket, no server to start),
and ``--server URL`` points the same client at a running instance.
Scalar verbs (integrate, differentiate, distance) emit one-line JSON;
geometry verbs (fence, snapshots) emit CSV; ``demo table1`` prints the
slowing-clock table.

Exit codes: 0 success, 1 usage or expression error, 2 numerical or
domain failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import NoReturn

import httpx

__all__ = ["main", "build_parser"]


class _UsageError(Exception):
    """Maps to exit code 1."""


class _NumericError(Exception):
    """Maps to exit code 2."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="fracshadow", allow_abbrev=False)
    verbs = parser.add_subparsers(dest="verb", parser_class=_ArgumentParser)

    integrate = verbs.add_parser("integrate", allow_abbrev=False)
    integrate.add_argument(
        "--op",
        choices=["rl-left", "rl-right", "riesz", "feller", "volterra"],
        default="rl-left",
    )
    integrate.add_argument("--alpha", type=float)
    integrate.add_argument("--f", required=True)
    integrate.add_argument("--kernel")
    integrate.add_argument("--t", type=float, required=True)
    integrate.add_argument("--b", type=float)
    integrate.add_argument("--a", type=float, default=0.0)
    integrate.add_argument("--c", type=float, default=1.0)
    integrate.add_argument("--d", type=float, default=1.0)
    _common_flags(integrate, fmt="json")

    differentiate = verbs.add_parser("differentiate", allow_abbrev=False)
    differentiate.add_argument(
        "--op", choices=["rl", "caputo", "gl", "observer"], default="rl"
    )
    differentiate.add_argument("--alpha", type=float, required=True)
    differentiate.add_argument("--f", required=True)
    differentiate.add_argument("--t", type=float, required=True)
    _common_flags(differentiate, fmt="json")

    fence = verbs.add_parser("fence", allow_abbrev=False)
    fence.add_argument(
        "--op",
        choices=["rl-left", "rl-right", "riesz", "feller", "volterra"],
        default="rl-left",
    )
    fence.add_argument("--alpha", type=float)
    fence.add_argument("--f", required=True)
    fence.add_argument("--kernel")
    fence.add_argument("--t", type=float, required=True)
    fence.add_argument("--b", type=float)
    fence.add_argument("--a", type=float, default=0.0)
    fence.add_argument("--c", type=float, default=1.0)
    fence.add_argument("--d", type=float, default=1.0)
    _common_flags(fence, fmt="csv", grading=False)

    snapshots = verbs.add_parser("snapshots", allow_abbrev=False)
    snapshots.add_argument("--alpha", type=float, required=True)
    snapshots.add_argument("--f", required=True)
    snapshots.add_argument("--t-max", type=float, required=True, dest="t_max")
    snapshots.add_argument("--dt", type=float, required=True)
    _common_flags(snapshots, fmt="csv", grading=False)

    distance = verbs.add_parser("distance", allow_abbrev=False)
    distance.add_argument("--f", required=True)
    distance.add_argument("--t", type=float, required=True)
    distance.add_argument("--alpha", type=float)
    distance.add_argument("--kernel")
    _common_flags(distance, fmt="json", grading=False)

    demo = verbs.add_parser("demo", allow_abbrev=False)
    demo.add_argument("topic", choices=["table1"])
    demo.add_argument("--server")

    serve = verbs.add_parser("serve", allow_abbrev=False)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    return parser


def _common_flags(verb: argparse.ArgumentParser, fmt: str, grading: bool = True) -> None:
    verb.add_argument("--nodes", type=int, default=1024)
    if grading:
        verb.add_argument("--grading", type=float)
    verb.add_argument("--format", choices=["csv", "json"], default=fmt)
    verb.add_argument("--out")
    verb.add_argument("--server")
    verb.set_defaults(expected_format=fmt)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.verb is None:
            raise _UsageError("a verb is required (integrate, differentiate, "
                              "fence, snapshots, distance, demo, serve)")
        body = _dispatch(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except _NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except httpx.HTTPError as exc:
        print(f"error: service request failed: {exc}", file=sys.stderr)
        return 2
    if body is None:
        return 0
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(body)
    else:
        sys.stdout.write(body)
    return 0


def _dispatch(args: argparse.Namespace) -> str | None:
    if args.verb == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return None
    if args.verb == "demo":
        return _call(args, "GET", "/demo/table1")
    _check_format(args)
    if args.verb == "integrate":
        payload = {
            "op": args.op, "f": args.f, "t": args.t, "a": args.a,
            "c": args.c, "d": args.d, "nodes": args.nodes,
        }
        _put_optional(payload, alpha=args.alpha, b=args.b,
                      kernel=args.kernel, grading=args.grading)
        return _call(args, "POST", "/integrate", payload)
    if args.verb == "differentiate":
        payload = {
            "op": args.op, "f": args.f, "alpha": args.alpha,
            "t": args.t, "nodes": args.nodes,
        }
        _put_optional(payload, grading=args.grading)
        return _call(args, "POST", "/differentiate", payload)
    if args.verb == "fence":
        payload = {
            "op": args.op, "f": args.f, "t": args.t, "a": args.a,
            "c": args.c, "d": args.d, "nodes": args.nodes,
        }
        _put_optional(payload, alpha=args.alpha, b=args.b, kernel=args.kernel)
        return _call(args, "POST", "/fence", payload)
    if args.verb == "snapshots":
        payload = {
            "f": args.f, "alpha": args.alpha, "t_max": args.t_max,
            "dt": args.dt, "nodes": args.nodes,
        }
        return _call(args, "POST", "/snapshots", payload)
    payload = {"f": args.f, "t": args.t, "nodes": args.nodes}
    _put_optional(payload, alpha=args.alpha, kernel=args.kernel)
    return _call(args, "POST", "/distance", payload)


def _put_optional(payload: dict, **kwargs) -> None:
    for key, value in kwargs.items():
        if value is not None:
            payload[key] = value


def _check_format(args: argparse.Namespace) -> None:
    if args.verb in ("integrate", "differentiate", "distance", "snapshots", "fence"):
        if args.format != args.expected_format:
            raise _UsageError(
                f"{args.verb} emits {args.expected_format} only, "
                f"--format {args.format} is not available"
            )


def _call(args: argparse.Namespace, method: str, path: str, payload: dict | None = None) -> str:
    server = getattr(args, "server", None)
    if server:
        with httpx.Client(base_url=server, timeout=120.0) as client:
            response = client.request(method, path, json=payload)
    else:
        response = _call_in_process(method, path, payload)
    if response.status_code == 200:
        return response.text
    _raise_for_status(response)


def _call_in_process(method: str, path: str, payload: dict | None) -> httpx.Response:
    import asyncio

    from .service.app import app

    async def go() -> httpx.Response:
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://service.local", timeout=120.0
        ) as client:
            return await client.request(method, path, json=payload)

    return asyncio.run(go())


def _raise_for_status(response: httpx.Response) -> NoReturn:
    try:
        envelope = response.json()["error"]
    except Exception:
        raise _NumericError(
            f"service returned status {response.status_code}: {response.text!r}"
        )
    message = str(envelope.get("message", "request failed"))
    if response.status_code == 400:
        field = envelope.get("field")
        if field:
            message = f"--{str(field).replace('_', '-')}: {message}"
        raise _UsageError(message)
    op = envelope.get("op")
    params = envelope.get("params") or {}
    detail = ", ".join(f"{key}={params[key]}" for key in sorted(params))
    prefix = f"{op}: " if op else ""
    suffix = f" [{detail}]" if detail else ""
    raise _NumericError(f"{prefix}{message}{suffix}")
