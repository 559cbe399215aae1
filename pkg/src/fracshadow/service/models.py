"""Request models for the HTTP surface.

Field names mirror the CLI flags one-to-one (t_max for --t-max).
Unknown fields are rejected, matching the CLI's strictness about
unknown flags.  Cross-field requirements (which ops need b, alpha, or a
kernel) are checked in the endpoint handlers so the error can say which
field is missing for which op.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict

IntegralOp = Literal["rl-left", "rl-right", "riesz", "feller", "volterra"]
DerivativeOp = Literal["rl", "caputo", "gl", "observer"]


class _StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class IntegrateRequest(_StrictModel):
    op: IntegralOp = "rl-left"
    f: str
    t: float
    alpha: Optional[float] = None
    a: float = 0.0
    b: Optional[float] = None
    c: float = 1.0
    d: float = 1.0
    kernel: Optional[str] = None
    nodes: int = 1024
    grading: Optional[float] = None


class DifferentiateRequest(_StrictModel):
    op: DerivativeOp = "rl"
    f: str
    alpha: float
    t: float
    nodes: int = 1024
    grading: Optional[float] = None


class FenceRequest(_StrictModel):
    op: IntegralOp = "rl-left"
    f: str
    t: float
    alpha: Optional[float] = None
    a: float = 0.0
    b: Optional[float] = None
    c: float = 1.0
    d: float = 1.0
    kernel: Optional[str] = None
    nodes: int = 1024


class SnapshotsRequest(_StrictModel):
    f: str
    alpha: float
    t_max: float
    dt: float
    nodes: int = 1024


class DistanceRequest(_StrictModel):
    f: str
    t: float
    alpha: Optional[float] = None
    kernel: Optional[str] = None
    nodes: int = 1024
