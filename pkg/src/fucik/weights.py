"""Piecewise-polynomial coefficient and weight functions.

A :class:`Weight` is a continuous piecewise polynomial on ``[T1, T2]``.  Each
piece is stored by its coefficients in ascending powers of the local variable
``x = t - t_{i-1}``, so ``coeffs[i] = [c0, c1, ...]`` means
``c0 + c1*x + c2*x**2 + ...`` on ``[t_{i-1}, t_i]``.

Because every piece is a polynomial, the sign structure of a weight (where it
is positive, negative or identically zero) can be resolved exactly by root
isolation instead of by sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import brentq

MAX_DEGREE = 5
CONTINUITY_RTOL = 1e-12
ROOT_XTOL = 1e-13


class WeightError(ValueError):
    """Raised for malformed weights or evaluations outside the interval."""


@dataclass(frozen=True, eq=False)
class Weight:
    breakpoints: np.ndarray
    coeffs: np.ndarray  # shape (pieces, MAX_DEGREE + 1), ascending local powers

    def __init__(self, breakpoints, coeffs):
        bp = np.asarray(breakpoints, dtype=float)
        if bp.ndim != 1 or bp.size < 2:
            raise WeightError("need at least two breakpoints")
        if not np.all(np.diff(bp) > 0):
            raise WeightError("breakpoints must be strictly increasing")
        rows = [np.atleast_1d(np.asarray(c, dtype=float)) for c in coeffs]
        if len(rows) != bp.size - 1:
            raise WeightError(f"{bp.size - 1} pieces expected, got {len(rows)} coefficient rows")
        table = np.zeros((len(rows), MAX_DEGREE + 1))
        for i, c in enumerate(rows):
            c = np.trim_zeros(c, "b")
            if c.size > MAX_DEGREE + 1:
                raise WeightError(f"piece {i} has degree {c.size - 1} > {MAX_DEGREE}")
            if not np.all(np.isfinite(c)):
                raise WeightError(f"piece {i} has non-finite coefficients")
            table[i, : c.size] = c
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "coeffs", table)
        bp.setflags(write=False)
        table.setflags(write=False)
        self._check_continuity()

    def _check_continuity(self):
        h = np.diff(self.breakpoints)
        left = np.array([npoly.polyval(h[i], self.coeffs[i]) for i in range(len(h) - 1)])
        right = self.coeffs[1:, 0]
        if left.size == 0:
            return
        scale = max(np.max(np.abs(self.coeffs[:, 0])), np.max(np.abs(left)), 1e-300)
        jump = np.abs(left - right)
        bad = np.nonzero(jump > CONTINUITY_RTOL * scale)[0]
        if bad.size:
            i = int(bad[0])
            raise WeightError(
                f"discontinuity at t={self.breakpoints[i + 1]:.17g}: "
                f"left {left[i]:.17g} vs right {right[i]:.17g}"
            )

    # -- basic structure --------------------------------------------------

    @property
    def interval(self) -> tuple[float, float]:
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    @property
    def pieces(self) -> int:
        return self.coeffs.shape[0]

    @classmethod
    def constant(cls, value: float, t1: float, t2: float) -> Weight:
        return cls([t1, t2], [[value]])

    def __neg__(self) -> Weight:
        return Weight(self.breakpoints, -self.coeffs)

    def __mul__(self, c: float) -> Weight:
        return Weight(self.breakpoints, float(c) * self.coeffs)

    __rmul__ = __mul__

    def __call__(self, t):
        return evaluate(self, t)

    def to_dict(self) -> dict:
        rows = []
        for c in self.coeffs:
            c = np.trim_zeros(c, "b")
            rows.append([float(x) for x in c] if c.size else [0.0])
        return {"breakpoints": [float(x) for x in self.breakpoints], "coeffs": rows}

    @classmethod
    def from_dict(cls, d: dict) -> Weight:
        try:
            return cls(d["breakpoints"], d["coeffs"])
        except KeyError as exc:
            raise WeightError(f"weight object lacks key {exc}") from None

    # -- derived quantities -----------------------------------------------

    @cached_property
    def scale(self) -> float:
        """Sup-norm bound used to normalise zero tests."""
        h = np.diff(self.breakpoints)[:, None]
        return float(np.max(np.sum(np.abs(self.coeffs * h ** np.arange(MAX_DEGREE + 1)), axis=1)))

    def extrema(self) -> tuple[float, float]:
        """Exact (min, max) over the interval: endpoints plus critical points of each piece."""
        lo, hi = math.inf, -math.inf
        h = np.diff(self.breakpoints)
        for i in range(self.pieces):
            c = self.coeffs[i]
            xs = [0.0, h[i]]
            xs.extend(_real_roots_in(npoly.polyder(c), 0.0, h[i]))
            vals = npoly.polyval(np.array(xs), c)
            lo, hi = min(lo, vals.min()), max(hi, vals.max())
        return float(lo), float(hi)

    def is_zero(self) -> bool:
        return sign_profile(self).is_zero

    @cached_property
    def profile(self) -> SignProfile:
        return _compute_profile(self)


@dataclass(frozen=True)
class SignProfile:
    """Maximal open intervals of strict sign and the simple sign-change points.

    ``sign_change_count`` is always a finite integer here; piecewise polynomials
    of bounded degree cannot accumulate sign changes.
    """

    positive_intervals: tuple[tuple[float, float], ...]
    negative_intervals: tuple[tuple[float, float], ...]
    simple_change_points: tuple[float, ...]
    runs: tuple[tuple[float, float, int], ...] = field(repr=False, default=())

    @property
    def sign_change_count(self) -> int:
        return len(self.simple_change_points)

    @property
    def is_zero(self) -> bool:
        return not self.positive_intervals and not self.negative_intervals

    def intervals(self, sign: int) -> tuple[tuple[float, float], ...]:
        return self.positive_intervals if sign > 0 else self.negative_intervals


def _real_roots_in(c, lo: float, hi: float) -> list[float]:
    """Real roots of the polynomial ``c`` in the open interval ]lo, hi[."""
    c = np.trim_zeros(np.asarray(c, dtype=float), "b")
    if c.size <= 1:
        return []
    r = npoly.polyroots(c)
    span = hi - lo
    out = []
    for z in r:
        if abs(z.imag) <= 1e-7 * max(1.0, abs(z.real)) and lo < z.real < hi:
            out.append(float(z.real))
    out.sort()
    # collapse near-duplicates coming from multiple roots
    merged = []
    for x in out:
        if not merged or x - merged[-1] > 1e-12 * max(1.0, span):
            merged.append(x)
    return merged


def _compute_profile(w: Weight) -> SignProfile:
    h = np.diff(w.breakpoints)
    zero_tol = 1e-14 * max(w.scale, 1e-300)
    runs: list[list] = []  # [left, right, sign]

    def push(left, right, sign, split):
        # runs of equal sign merge unless the weight vanishes where they meet
        if runs and runs[-1][2] == sign and not (split and sign != 0):
            runs[-1][1] = right
        else:
            runs.append([left, right, sign])

    for i in range(w.pieces):
        c = w.coeffs[i]
        t0 = float(w.breakpoints[i])
        t1 = float(w.breakpoints[i + 1])
        if np.all(np.abs(c * h[i] ** np.arange(c.size)) <= zero_tol):
            push(t0, t1, 0, True)
            continue
        cuts = [0.0, *_real_roots_in(c, 0.0, float(h[i])), float(h[i])]
        for x0, x1 in zip(cuts[:-1], cuts[1:]):
            mid = npoly.polyval(0.5 * (x0 + x1), c)
            sign = 0 if abs(mid) <= zero_tol else (1 if mid > 0 else -1)
            left = t0 + x0 if x0 > 0.0 else t0
            right = t0 + x1 if x1 < h[i] else t1
            split = x0 > 0.0 or abs(c[0]) <= zero_tol
            push(left, right, sign, split)

    runs = _refine_cuts(w, runs)
    pos = tuple((a, b) for a, b, s in runs if s > 0)
    neg = tuple((a, b) for a, b, s in runs if s < 0)
    changes = []
    last_sign = 0
    for a, _, s in runs:
        if s == 0:
            continue
        if last_sign and s != last_sign:
            changes.append(a)
        last_sign = s
    return SignProfile(pos, neg, tuple(changes), tuple((a, b, s) for a, b, s in runs))


def _refine_cuts(w: Weight, runs):
    """Polish run boundaries lying inside a piece to ROOT_XTOL with brentq."""
    bp = w.breakpoints
    out = [list(r) for r in runs]
    for k in range(len(out) - 1):
        cut = out[k][1]
        s_left, s_right = out[k][2], out[k + 1][2]
        if s_left == 0 or s_right == 0 or s_left == s_right:
            continue
        i = int(np.searchsorted(bp, cut, side="right")) - 1
        if i < 0 or i >= w.pieces or bp[i] == cut:
            continue
        c = w.coeffs[i]
        lo = 0.5 * (out[k][0] + cut) - bp[i]
        hi = 0.5 * (cut + out[k + 1][1]) - bp[i]
        lo = max(lo, 0.0)
        hi = min(hi, bp[i + 1] - bp[i])
        flo, fhi = npoly.polyval(lo, c), npoly.polyval(hi, c)
        if flo * fhi < 0:
            x = brentq(lambda x: npoly.polyval(x, c), lo, hi, xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps)
            out[k][1] = out[k + 1][0] = float(bp[i] + x)
    return [tuple(r) for r in out]


def evaluate(w: Weight, t):
    """Value of ``w`` at ``t`` (scalar or array); breakpoints take the left piece."""
    t_arr = np.asarray(t, dtype=float)
    t1, t2 = w.interval
    if np.any(t_arr < t1) or np.any(t_arr > t2) or np.any(np.isnan(t_arr)):
        raise WeightError(f"t outside [{t1}, {t2}]")
    idx = np.clip(np.searchsorted(w.breakpoints, t_arr, side="left") - 1, 0, w.pieces - 1)
    x = t_arr - w.breakpoints[idx]
    c = w.coeffs[idx]
    val = np.zeros_like(x)
    for j in range(MAX_DEGREE, -1, -1):
        val = val * x + c[..., j]
    return float(val) if val.ndim == 0 else val


def sign_profile(w: Weight) -> SignProfile:
    return w.profile


def _check_time(w: Weight, s: float):
    t1, t2 = w.interval
    if not (t1 <= s <= t2):
        raise WeightError(f"s={s} outside [{t1}, {t2}]")


def first_positive_time(w: Weight, s: float) -> float | None:
    """``inf{t in ]s, T2] : w(t) > 0}``, or None when ``w <= 0`` there."""
    _check_time(w, s)
    for a, b in w.profile.positive_intervals:
        if b > s:
            return max(a, s)
    return None


def first_negative_time(w: Weight, s: float) -> float | None:
    _check_time(w, s)
    for a, b in w.profile.negative_intervals:
        if b > s:
            return max(a, s)
    return None


def support_edges(w: Weight) -> tuple[float | None, float | None, float | None, float | None]:
    """Infimum and supremum of the positivity set, then of the negativity set."""
    pos = w.profile.positive_intervals
    neg = w.profile.negative_intervals
    return (
        pos[0][0] if pos else None,
        pos[-1][1] if pos else None,
        neg[0][0] if neg else None,
        neg[-1][1] if neg else None,
    )


def signed_part_nontrivial(w: Weight, sign: int, t1: float | None = None, t2: float | None = None) -> bool:
    """Whether ``w`` takes values of the given sign somewhere in ]t1, t2[."""
    lo, hi = w.interval
    t1 = lo if t1 is None else t1
    t2 = hi if t2 is None else t2
    return any(min(b, t2) > max(a, t1) for a, b in w.profile.intervals(sign))


def positive_overlap(w: Weight, v: Weight) -> bool:
    """Whether ``w`` and ``v`` are simultaneously positive on some open interval."""
    for a, b in w.profile.positive_intervals:
        for c, d in v.profile.positive_intervals:
            if min(b, d) > max(a, c):
                return True
    return False
