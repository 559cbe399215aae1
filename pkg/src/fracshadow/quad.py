"""Quadrature engines with error estimates.

Three engines cover the package's needs:

* :func:`stieltjes` sums f(midpoint) * increment-of-g over a grid and
  refines once by grid halving (Richardson), which also yields the
  error estimate.
* :func:`product_integrate` evaluates weakly singular integrals
  (1/Gamma(alpha)) * integral of f(tau) (t-tau)^(alpha-1) by integrating
  the kernel exactly against a piecewise-linear interpolant of f; the
  singular factor is never sampled pointwise.
* :func:`classical_integrate` is composite Simpson, again with one
  halving step for the estimate.

All engines are pure and sum cell contributions in ascending index
order, so identical inputs give bit-identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .core import (
    Grid,
    Interval,
    check_integral_order,
    default_grading,
    gamma,
    graded_nodes,
)
from .errors import DomainError, EvalDomainError, FracshadowError
from .expr import Expr, evaluate_array
from .timescale import TimeScale

__all__ = [
    "QuadResult",
    "stieltjes",
    "product_integrate",
    "classical_integrate",
]

Integrand = Union[Expr, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class QuadResult:
    """A quadrature value with its error estimate and the finest node count."""

    value: float
    error_estimate: float
    nodes_used: int

    def __post_init__(self) -> None:
        if not math.isfinite(self.error_estimate) or self.error_estimate < 0.0:
            raise DomainError(
                f"error estimate must be finite and >= 0, got {self.error_estimate!r}"
            )
        if self.nodes_used < 2:
            raise DomainError(f"nodes_used must be >= 2, got {self.nodes_used!r}")


def _as_array_function(f: Integrand, check: bool) -> Callable[[np.ndarray], np.ndarray]:
    """Wrap an expression or callable as a vectorized evaluator.

    Callables are tried vectorized first; ones that insist on scalars
    get an elementwise fallback where domain failures become NaN (the
    engines then apply their own endpoint policy or re-raise).
    """
    if _is_expr(f):
        return lambda xs: evaluate_array(f, xs, check=check)
    if not callable(f):
        raise TypeError(f"integrand must be an expression or callable, got {f!r}")

    def call(xs: np.ndarray) -> np.ndarray:
        try:
            with np.errstate(all="ignore"):
                out = np.asarray(f(xs), dtype=float)
        except TypeError:
            out = _elementwise(f, xs)
        if out.shape != xs.shape:
            out = np.broadcast_to(out, xs.shape).astype(float)
        if check:
            bad = ~np.isfinite(out)
            if bad.any():
                where = float(xs[np.flatnonzero(bad)[0]])
                raise EvalDomainError("integrand is not finite", coordinate=where)
        return out

    return call


def _elementwise(f: Callable, xs: np.ndarray) -> np.ndarray:
    out = np.empty(xs.shape, dtype=float)
    for i, x in enumerate(xs.ravel()):
        try:
            out.flat[i] = float(f(float(x)))
        except (FracshadowError, ValueError, ZeroDivisionError, OverflowError):
            out.flat[i] = math.nan
    return out


def _is_expr(f: object) -> bool:
    from . import expr as expr_mod

    return isinstance(
        f, (expr_mod.Const, expr_mod.Var, expr_mod.Neg, expr_mod.BinOp, expr_mod.Call)
    )


# --------------------------------------------------------------------------
# Riemann-Stieltjes


def _as_scale_function(scale) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(scale, TimeScale):
        return scale
    if _is_expr(scale):
        return lambda xs: evaluate_array(scale, xs, check=True)
    if callable(scale):
        return lambda xs: np.asarray(scale(xs), dtype=float)
    raise TypeError(f"scale must be a TimeScale, expression, or callable, got {scale!r}")


def _halve(nodes: np.ndarray) -> np.ndarray:
    mids = 0.5 * (nodes[:-1] + nodes[1:])
    out = np.empty(nodes.size + mids.size)
    out[0::2] = nodes
    out[1::2] = mids
    return out


def stieltjes(
    f: Integrand,
    scale,
    interval: Interval | None = None,
    grid: Grid | np.ndarray | None = None,
    n: int = 1024,
) -> QuadResult:
    """Riemann-Stieltjes integral of f against the increments of a scale.

    ``scale`` is a :class:`~fracshadow.timescale.TimeScale`, an
    expression in ``t``, or a callable.  The grid defaults to the
    scale's natural graded grid (TimeScale) or a uniform one; the sum
    samples f at cell midpoints, is repeated on the halved grid, and the
    two sums are Richardson-combined.
    """
    if interval is None:
        if isinstance(scale, TimeScale):
            interval = scale.interval()
        elif grid is None:
            raise DomainError("stieltjes needs an interval when the scale has none")
    if grid is None:
        if isinstance(scale, TimeScale):
            nodes = scale.grid(n)
        else:
            nodes = np.linspace(interval.lower, interval.upper, n + 1)
    else:
        nodes = grid.nodes if isinstance(grid, Grid) else np.asarray(grid, dtype=float)
    if interval is not None:
        slack = 1e-9 * (1.0 + abs(interval.span))
        if abs(nodes[0] - interval.lower) > slack or abs(nodes[-1] - interval.upper) > slack:
            raise DomainError(
                f"grid [{nodes[0]}, {nodes[-1]}] does not span "
                f"[{interval.lower}, {interval.upper}]"
            )

    ffun = _as_array_function(f, check=True)
    gfun = _as_scale_function(scale)

    coarse = _stieltjes_sum(ffun, gfun, nodes)
    fine_nodes = _halve(nodes)
    fine = _stieltjes_sum(ffun, gfun, fine_nodes)
    value = (4.0 * fine - coarse) / 3.0
    return QuadResult(value, abs(fine - coarse) / 3.0, int(fine_nodes.size))


def _stieltjes_sum(ffun, gfun, nodes: np.ndarray) -> float:
    mids = 0.5 * (nodes[:-1] + nodes[1:])
    fv = ffun(mids)
    gv = np.asarray(gfun(nodes), dtype=float)
    return float(np.sum(fv * np.diff(gv)))


# --------------------------------------------------------------------------
# product integration of the weakly singular kernel


def product_integrate(
    f: Integrand,
    alpha: float,
    t: float,
    n: int = 1024,
    grading: float | None = None,
    lower: float = 0.0,
) -> QuadResult:
    """(1/Gamma(alpha)) * integral over [lower, t] of f(tau)(t-tau)^(alpha-1).

    After the substitution u = t - tau the kernel moments
    integral of u^(alpha-1) * {1, u} are integrated in closed form per
    cell against a piecewise-linear interpolant of f, on a mesh graded
    toward both endpoints.  One mesh doubling gives the Richardson value
    and the error estimate.  ``n`` is rounded up to even so the coarse
    mesh nests in the fine one.
    """
    alpha = check_integral_order(alpha)
    if not math.isfinite(t) or t <= lower:
        raise DomainError(f"need t > {lower!r}, got t={t!r}")
    if n < 2:
        raise DomainError(f"product integration needs n >= 2, got {n}")
    n = n + (n % 2)
    r = default_grading(alpha) if grading is None else float(grading)
    if r < 1.0:
        raise DomainError(f"grading exponent must be >= 1, got {r!r}")

    ffun = _as_array_function(f, check=False)
    span = t - lower
    coarse = _product_sum(ffun, alpha, t, span, n, r)
    fine = _product_sum(ffun, alpha, t, span, 2 * n, r)
    value = (4.0 * fine - coarse) / 3.0
    return QuadResult(value, abs(fine - coarse) / 3.0, 2 * n + 1)


def _product_sum(ffun, alpha: float, t: float, span: float, n: int, r: float) -> float:
    u = graded_nodes(0.0, span, n, r, cluster="both")
    fv = ffun(t - u)
    fv = _patch_endpoints(fv, t - u)
    u0, u1 = u[:-1], u[1:]
    m0, m1c = _kernel_moments(u0, u1, alpha)
    du = u1 - u0
    # heavy grading can collapse adjacent nodes to equal floats; such
    # cells carry zero moment mass, so any finite slope stand-in works
    with np.errstate(invalid="ignore", divide="ignore"):
        slope = np.where(du > 0.0, np.diff(fv) / du, 0.0)
    cells = fv[:-1] * m0 + slope * m1c
    return float(np.sum(cells)) / gamma(alpha)


def _kernel_moments(u0: np.ndarray, u1: np.ndarray, alpha: float):
    """Per-cell moments of u^(alpha-1) against {1, u-u0}.

    The closed forms difference nearly equal powers when a cell is narrow
    relative to its offset, and the centered moment then drowns in
    cancellation (it shrinks like du^2 while the roundoff stays at
    eps*u0^(alpha+1)).  Those cells switch to expm1/log1p for the zeroth
    moment and a binomial series in du/u0 for the centered one.
    """
    du = u1 - u0
    m0 = (u1**alpha - u0**alpha) / alpha
    m1c = (u1 ** (alpha + 1.0) - u0 ** (alpha + 1.0)) / (alpha + 1.0) - u0 * m0
    with np.errstate(divide="ignore"):
        x = np.where(u0 > 0.0, du / u0, np.inf)
    narrow = x < 0.1
    if np.any(narrow):
        xn = x[narrow]
        base = np.power(u0[narrow], alpha)
        m0 = m0.copy()
        m1c = m1c.copy()
        m0[narrow] = base * np.expm1(alpha * np.log1p(xn)) / alpha
        total = np.zeros_like(xn)
        power = xn * xn
        coeff = 1.0
        for m in range(17):
            total += coeff * power / (m + 2.0)
            coeff *= (alpha - 1.0 - m) / (m + 1.0)
            power = power * xn
        m1c[narrow] = base * u0[narrow] * total
    return m0, m1c


def _patch_endpoints(fv: np.ndarray, taus: np.ndarray) -> np.ndarray:
    """Allow f to blow up at an interval endpoint only.

    An endpoint NaN/inf is replaced by the nearest finite value, which
    turns the terminal cell into the constant rule; the integral stays
    finite because the kernel moment there is.  Saturated meshes can
    duplicate an endpoint node, so every sample sharing the endpoint's
    coordinate counts as the endpoint.  Failures elsewhere re-raise
    with the coordinate.
    """
    bad = np.flatnonzero(~np.isfinite(fv))
    if bad.size == 0:
        return fv
    at_ends = (taus == taus[0]) | (taus == taus[-1])
    interior = bad[~at_ends[bad]]
    if interior.size:
        raise EvalDomainError(
            "integrand is not finite", coordinate=float(taus[interior[0]])
        )
    finite = np.flatnonzero(np.isfinite(fv))
    if finite.size == 0:
        raise EvalDomainError(
            "integrand is not finite", coordinate=float(taus[0])
        )
    fv = fv.copy()
    fv[: finite[0]] = fv[finite[0]]
    fv[finite[-1] + 1 :] = fv[finite[-1]]
    return fv


# --------------------------------------------------------------------------
# classical quadrature


def classical_integrate(f: Integrand, interval: Interval, n: int = 1024) -> QuadResult:
    """Composite Simpson integral of f over the interval.

    The rule is evaluated at n and 2n cells (n rounded up to even); the
    finer value is returned with |fine - coarse| / 15 as the estimate.
    """
    if n < 2:
        raise DomainError(f"classical integration needs n >= 2, got {n}")
    n = n + (n % 2)
    ffun = _as_array_function(f, check=True)
    coarse = _simpson(ffun, interval, n)
    fine = _simpson(ffun, interval, 2 * n)
    return QuadResult(fine, abs(fine - coarse) / 15.0, 2 * n + 1)


def _simpson(ffun, interval: Interval, n: int) -> float:
    nodes = np.linspace(interval.lower, interval.upper, n + 1)
    fv = ffun(nodes)
    h = interval.span / n
    weights = np.ones(n + 1)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    return float(np.sum(weights * fv)) * h / 3.0
