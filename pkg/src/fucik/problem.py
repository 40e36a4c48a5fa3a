"""The operator ``Lu = -(p u')' + q u`` on ``[T1, T2]`` together with a weight pair."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from math import comb
from pathlib import Path

import numpy as np

from .weights import MAX_DEGREE, Weight, WeightError

INTERVAL_ATOL = 1e-12


class ProblemError(ValueError):
    """Invalid problem data (coefficients, interval mismatch, config)."""


@dataclass(frozen=True)
class SegmentTable:
    """Coefficients of (p, q, w) re-expanded on the union of their breakpoints.

    Row ``j`` of ``P``, ``Q``, ``W`` is a polynomial in ``t - t[j]``; the
    integrator restarts at every ``t[j]``.
    """

    t: np.ndarray
    P: np.ndarray
    Q: np.ndarray
    W: np.ndarray
    omega2: float  # (max|w| + max q) / min p, for the first trial step


def _taylor_shift(c: np.ndarray, delta: float) -> np.ndarray:
    """Coefficients of ``x -> c(x + delta)``."""
    out = np.zeros_like(c)
    for j in range(c.size):
        if c[j] == 0.0:
            continue
        for k in range(j + 1):
            out[k] += c[j] * comb(j, k) * delta ** (j - k)
    return out


def _restrict(w: Weight, grid: np.ndarray) -> np.ndarray:
    mids = 0.5 * (grid[:-1] + grid[1:])
    idx = np.clip(np.searchsorted(w.breakpoints, mids, side="right") - 1, 0, w.pieces - 1)
    rows = np.empty((grid.size - 1, MAX_DEGREE + 1))
    for j, i in enumerate(idx):
        delta = grid[j] - w.breakpoints[i]
        rows[j] = w.coeffs[i] if delta == 0.0 else _taylor_shift(w.coeffs[i], delta)
    return rows


def _merge_breakpoints(*weights: Weight) -> np.ndarray:
    allbp = np.unique(np.concatenate([w.breakpoints for w in weights]))
    span = allbp[-1] - allbp[0]
    keep = np.concatenate([[True], np.diff(allbp) > 1e-13 * span])
    grid = allbp[keep]
    grid[-1] = allbp[-1]
    return grid


@dataclass(frozen=True, eq=False)
class Problem:
    """Dirichlet problem data: coefficients ``p > 0``, ``q >= 0`` and weights ``m``, ``n``.

    ``n`` defaults to ``m`` (one-weight problem), ``p`` to 1 and ``q`` to 0.
    """

    m: Weight
    n: Weight
    p: Weight
    q: Weight

    def __init__(self, m: Weight, n: Weight | None = None, p: Weight | None = None, q: Weight | None = None):
        t1, t2 = m.interval
        n = m if n is None else n
        p = Weight.constant(1.0, t1, t2) if p is None else p
        q = Weight.constant(0.0, t1, t2) if q is None else q
        for name, w in (("n", n), ("p", p), ("q", q)):
            a, b = w.interval
            if abs(a - t1) > INTERVAL_ATOL or abs(b - t2) > INTERVAL_ATOL:
                raise ProblemError(f"{name} lives on [{a}, {b}], expected [{t1}, {t2}]")
        pmin, _ = p.extrema()
        if not pmin > 0:
            raise ProblemError(f"p must be positive, min p = {pmin}")
        qmin, _ = q.extrema()
        if qmin < -1e-14 * max(q.scale, 1.0):
            raise ProblemError(f"q must be nonnegative, min q = {qmin}")
        for name, w in (("m", m), ("n", n)):
            if w.is_zero():
                raise ProblemError(f"weight {name} vanishes identically")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def interval(self) -> tuple[float, float]:
        return self.m.interval

    @property
    def length(self) -> float:
        t1, t2 = self.interval
        return t2 - t1

    @property
    def one_weight(self) -> bool:
        return self.n is self.m

    def weight(self, which: str) -> Weight:
        if which == "m":
            return self.m
        if which == "n":
            return self.n
        raise ProblemError(f"weight selector must be 'm' or 'n', got {which!r}")

    def with_weights(self, m: Weight, n: Weight) -> Problem:
        return Problem(m, n, self.p, self.q)

    def signed(self, sm: int, sn: int) -> Problem:
        """The problem with weights ``(sm*m, sn*n)``; cached, and ``self`` for (1, 1)."""
        if (sm, sn) == (1, 1):
            return self
        key = ("signed", sm, sn)
        cache = self._tables
        if key not in cache:
            m = self.m if sm > 0 else -self.m
            if self.one_weight and sm == sn:
                n = m
            else:
                n = self.n if sn > 0 else -self.n
            cache[key] = self.with_weights(m, n)
        return cache[key]

    @cached_property
    def _tables(self) -> dict:
        # per-instance cache for segment tables and sign-flipped copies
        return {}

    def table(self, which: str) -> SegmentTable:
        cache = self._tables
        if which not in cache:
            w = self.weight(which)
            grid = _merge_breakpoints(self.p, self.q, w)
            P, Q, W = (_restrict(f, grid) for f in (self.p, self.q, w))
            pmin, _ = self.p.extrema()
            _, qmax = self.q.extrema()
            wlo, whi = w.extrema()
            omega2 = (max(abs(wlo), abs(whi)) + qmax) / pmin
            cache[which] = SegmentTable(grid, P, Q, W, float(omega2))
        return cache[which]

    # -- serialisation ----------------------------------------------------

    def to_dict(self) -> dict:
        d = {"interval": list(self.interval), "p": self.p.to_dict(), "q": self.q.to_dict(), "m": self.m.to_dict()}
        if not self.one_weight:
            d["n"] = self.n.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> Problem:
        from .presets import function_preset

        if "interval" not in d or "m" not in d:
            raise ProblemError("problem document needs 'interval' and 'm'")
        try:
            t1, t2 = (float(x) for x in d["interval"])
        except (TypeError, ValueError):
            raise ProblemError("'interval' must be a pair of numbers") from None
        if not t1 < t2:
            raise ProblemError("interval must satisfy T1 < T2")

        def fn(key, default=None):
            spec = d.get(key)
            if spec is None:
                return default
            if not isinstance(spec, dict):
                raise ProblemError(f"'{key}' must be an object")
            if "preset" in spec:
                return function_preset(spec["preset"], spec.get("arg"), t1, t2)
            w = Weight.from_dict(spec)
            a, b = w.interval
            if abs(a - t1) > INTERVAL_ATOL or abs(b - t2) > INTERVAL_ATOL:
                raise ProblemError(f"'{key}' breakpoints must span [{t1}, {t2}]")
            return w

        try:
            m = fn("m")
            n = fn("n", m)
            return cls(m, n, fn("p"), fn("q"))
        except WeightError as exc:
            raise ProblemError(str(exc)) from None


def load_problem(path: str | Path) -> Problem:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno} column {exc.colno})") from None
    except OSError as exc:
        raise ProblemError(f"{path}: {exc.strerror}") from None
    if not isinstance(doc, dict):
        raise ProblemError(f"{path}: top level must be an object")
    return Problem.from_dict(doc)
