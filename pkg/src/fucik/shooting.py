"""Zero-function of the weighted linear problem and its alternating compositions.

For ``Lu = a w u`` with ``u(s) = 0``, ``p(s) u'(s) = 1`` the zero-function
returns the next zero of ``u`` to the right of ``s``.  Crossing times are
plain floats; ``math.inf`` stands for "no zero before the horizon" (and
``-math.inf`` for the backward shot).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import _kernel
from .problem import Problem

BEYOND_HORIZON = math.inf
MAX_STEPS = 5_000_000
TOL_CEILING = 1e-2

_NO_TRACE = np.empty((0, 4))


class IntegrationError(RuntimeError):
    """Step-size underflow or step budget exhausted; carries the state reached."""

    def __init__(self, message: str, *, t: float, a: float, s: float, steps: int):
        super().__init__(f"{message} (a={a:.17g}, start={s:.17g}, reached t={t:.17g}, steps={steps})")
        self.t = t
        self.a = a
        self.s = s
        self.steps = steps


@dataclass(frozen=True)
class Tolerances:
    """Integrator tolerances: relative/absolute on (u, p u') and absolute on crossing times."""

    rtol: float = 1e-9
    atol: float = 1e-12
    event: float = 1e-10

    def __post_init__(self):
        for name in ("rtol", "atol", "event"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and 0 < v <= TOL_CEILING):
                raise ValueError(f"tolerance {name}={v!r} must lie in ]0, {TOL_CEILING}]")

    def halved(self) -> Tolerances:
        return replace(self, rtol=self.rtol / 2, atol=self.atol / 2, event=self.event / 2)

    def scaled(self, factor: float) -> Tolerances:
        return Tolerances(self.rtol * factor, self.atol * factor, self.event * factor)


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class Shot:
    """Outcome of one shot: crossing time (or +-inf), |u| at the crossing relative to max |u|."""

    t: float
    u_ratio: float
    steps: int
    trace: np.ndarray | None = None

    @property
    def crossed(self) -> bool:
        return math.isfinite(self.t)


def normalize_branch(branch: str) -> str:
    """Map '>', 'gt' to 'gt' and '<', 'lt' to 'lt'."""
    b = str(branch).strip().lower()
    if b in (">", "gt"):
        return "gt"
    if b in ("<", "lt"):
        return "lt"
    raise ValueError(f"branch must be one of >, <, gt, lt; got {branch!r}")


def _first_step(prob: Problem, table, a: float) -> float:
    return min(0.01 * prob.length, 0.2 / math.sqrt(1.0 + abs(a) * table.omega2))


def shoot(
    prob: Problem,
    which: str,
    a: float,
    s: float,
    tol: Tolerances = DEFAULT_TOL,
    *,
    direction: int = 1,
    horizon: float | None = None,
    trace_capacity: int = 0,
) -> Shot:
    """Integrate from a zero at ``s`` with unit ``p u'`` until ``u`` changes sign.

    ``direction=-1`` integrates backwards in time.  ``horizon`` is where the
    shot gives up; it defaults to the interval end in the shooting direction
    and may lie slightly beyond it (the last polynomial piece is then
    extrapolated), which is only meant for residual checks.
    """
    t1, t2 = prob.interval
    if not (t1 <= s <= t2):
        raise ValueError(f"start time {s} outside [{t1}, {t2}]")
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    edge = t2 if direction > 0 else t1
    clamp = horizon is None
    if clamp:
        # a crossing sitting on the end point may be located a hair beyond it
        horizon = edge + direction * 4 * tol.event
    if (horizon - s) * direction < 0:
        raise ValueError(f"horizon {horizon} lies behind the start {s}")
    miss = math.inf * direction
    table = prob.table(which)
    trace = np.zeros((trace_capacity, 4)) if trace_capacity > 0 else _NO_TRACE
    status, t, ratio, steps, ntr = _kernel.shoot(
        table.t, table.P, table.Q, table.W,
        float(a), float(s), float(horizon), int(direction),
        tol.rtol, tol.atol, tol.event, _first_step(prob, table, a), MAX_STEPS, trace,
    )
    tr = trace[:ntr].copy() if trace_capacity > 0 else None
    if status == _kernel.UNDERFLOW:
        raise IntegrationError("step size underflow", t=t, a=a, s=s, steps=steps)
    if status == _kernel.MAX_STEPS:
        raise IntegrationError("step budget exhausted", t=t, a=a, s=s, steps=steps)
    if status == _kernel.BEYOND:
        return Shot(miss, 0.0, steps, tr)
    t = float(t)
    if clamp and (t - edge) * direction > 0:
        t = edge
    return Shot(t, float(ratio), steps, tr)


def zero_function(
    prob: Problem, which: str, a: float, s: float, tol: Tolerances = DEFAULT_TOL, horizon: float | None = None
) -> float:
    """Next zero after ``s`` of the solution of ``Lu = a w u`` starting at a zero in ``s``.

    Returns ``inf`` when ``u`` keeps its sign up to the horizon.
    """
    return shoot(prob, which, a, s, tol, horizon=horizon).t


def zero_function_inverse(
    prob: Problem, which: str, a: float, y: float, tol: Tolerances = DEFAULT_TOL
) -> float:
    """Largest zero left of ``y`` of the solution shot backwards from a zero at ``y``.

    If ``x`` is returned then ``zero_function(a, x) == y``.  Returns ``-inf``
    when there is no zero in ``[T1, y[``.
    """
    return shoot(prob, which, a, y, tol, direction=-1).t


def compose_phi(
    prob: Problem,
    k: int,
    branch: str,
    a: float,
    b: float,
    s: float | None = None,
    tol: Tolerances = DEFAULT_TOL,
    horizon: float | None = None,
) -> float:
    """Alternating ``k``-fold composition of the zero-functions for ``(a, m)`` and ``(b, n)``.

    Branch 'gt' starts with ``(a, m)``, branch 'lt' with ``(b, n)``.  ``s``
    defaults to the left end.  Intermediate stages past the right end stop the
    composition with ``inf``; only the final stage may reach a horizon beyond it.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    br = normalize_branch(branch)
    t1, t2 = prob.interval
    t = t1 if s is None else s
    stages = (("m", a), ("n", b)) if br == "gt" else (("n", b), ("m", a))
    for i in range(k):
        which, c = stages[i % 2]
        last = i == k - 1
        t = zero_function(prob, which, c, t, tol, horizon if last else None)
        if not math.isfinite(t):
            return BEYOND_HORIZON
        if not last and t >= t2:
            return BEYOND_HORIZON
    return t


def zeros_sequence(
    prob: Problem, k: int, branch: str, a: float, b: float, tol: Tolerances = DEFAULT_TOL
) -> list[float]:
    """All intermediate zeros of the composition from the left end (stops at the first ``inf``)."""
    br = normalize_branch(branch)
    t = prob.interval[0]
    stages = (("m", a), ("n", b)) if br == "gt" else (("n", b), ("m", a))
    out = []
    for i in range(k):
        which, c = stages[i % 2]
        t = zero_function(prob, which, c, t, tol)
        out.append(t)
        if not math.isfinite(t):
            break
    return out


def shot_trace(
    prob: Problem, which: str, a: float, s: float, tol: Tolerances = DEFAULT_TOL, capacity: int = 200_000
) -> Shot:
    """A shot with its accepted states recorded (columns t, u, v, log_scale)."""
    return shoot(prob, which, a, s, tol, trace_capacity=capacity)


def write_trace_csv(shot: Shot, path: str | Path | None, stream=None):
    """Write a shot trace as CSV; ``u`` and ``v`` are rescaled back to absolute values."""
    if shot.trace is None:
        raise ValueError("shot has no trace")
    close = False
    if stream is None:
        stream = open(path, "w", newline="")
        close = True
    try:
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(["t", "u", "v"])
        for t, u, v, ls in shot.trace:
            f = math.exp(ls)
            w.writerow([f"{t:.17g}", f"{u * f:.17g}", f"{v * f:.17g}"])
    finally:
        if close:
            stream.close()
