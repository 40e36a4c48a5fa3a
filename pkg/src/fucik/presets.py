"""Built-in weight pairs: sine weights, bumps and alternating-bump constructions.

Transcendental shapes (``sin t``, sine arches) are stored as piecewise cubic
Hermite interpolants with 128 pieces per arch, which keeps the uniform error
below 1e-9.  Zeros of the sine are breakpoints and are reproduced exactly, so
the sign structure of a preset is exactly that of the analytic function.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np

from .problem import Problem, ProblemError
from .weights import Weight

PIECES_PER_ARCH = 128


class PresetError(ProblemError):
    """Unknown preset name or malformed preset argument."""


def _hermite_rows(nodes: np.ndarray, y: np.ndarray, dy: np.ndarray) -> list[list[float]]:
    rows = []
    for i in range(nodes.size - 1):
        h = nodes[i + 1] - nodes[i]
        y0, y1, d0, d1 = y[i], y[i + 1], dy[i], dy[i + 1]
        slope = (y1 - y0) / h
        rows.append([y0, d0, (3 * slope - 2 * d0 - d1) / h, (d0 + d1 - 2 * slope) / h**2])
    return rows


def _arch(l: float, r: float, sign: float, lo: float, hi: float, pieces: int):
    """Nodes and Hermite rows of ``sign*sin(pi (t-l)/(r-l))`` on [lo, hi] within [l, r]."""
    L = r - l
    nodes = np.linspace(lo, hi, pieces + 1)
    nodes[0], nodes[-1] = lo, hi
    x = nodes - l
    # mirror on the right half so that t == r gives an exact zero
    y = np.where(x <= 0.5 * L, np.sin(np.pi * x / L), np.sin(np.pi * (r - nodes) / L))
    dy = (np.pi / L) * np.cos(np.pi * x / L)
    return nodes, _hermite_rows(nodes, sign * y, sign * dy)


class _Builder:
    """Accumulates consecutive pieces into one Weight."""

    def __init__(self, t0: float):
        self.bp = [t0]
        self.rows: list[list[float]] = []

    def add(self, nodes, rows):
        assert abs(nodes[0] - self.bp[-1]) <= 1e-12 * max(1.0, abs(nodes[0]))
        self.bp.extend(float(t) for t in nodes[1:])
        self.rows.extend(rows)

    def zero(self, hi: float):
        self.bp.append(float(hi))
        self.rows.append([0.0])

    def arch(self, l, r, sign, lo=None, hi=None, pieces=PIECES_PER_ARCH):
        lo = l if lo is None else lo
        hi = r if hi is None else hi
        self.add(*_arch(l, r, sign, lo, hi, pieces))

    def build(self) -> Weight:
        return Weight(self.bp, self.rows)


def sine_weight(t1: float, t2: float, part: str | None = None, pieces_per_pi: int = PIECES_PER_ARCH) -> Weight:
    """``sin t`` on [t1, t2]; ``part`` selects ``(sin t)^+`` ('+') or ``(sin t)^-`` ('-')."""
    if not t1 < t2:
        raise PresetError("sine weight needs t1 < t2")
    b = _Builder(t1)
    k = math.floor(t1 / math.pi)
    while True:
        l, r = k * math.pi, (k + 1) * math.pi
        lo, hi = max(l, t1), min(r, t2)
        if hi > lo:
            sign = 1.0 if k % 2 == 0 else -1.0
            keep = part is None or (part == "+" and sign > 0) or (part == "-" and sign < 0)
            if part == "-":
                sign = -sign
            if keep:
                pieces = max(1, math.ceil(pieces_per_pi * (hi - lo) / math.pi - 1e-9))
                b.arch(l, r, sign, lo, hi, pieces)
            else:
                b.zero(hi)
        if r >= t2:
            break
        k += 1
    return b.build()


def bump_weight(l: float, r: float, t1: float, t2: float, sign: float = 1.0) -> Weight:
    """Sine arch of height ``sign`` supported on [l, r], zero elsewhere in [t1, t2]."""
    if not (t1 <= l < r <= t2):
        raise PresetError(f"bump support [{l}, {r}] must lie inside [{t1}, {t2}]")
    b = _Builder(t1)
    if l > t1:
        b.zero(l)
    b.arch(l, r, sign)
    if r < t2:
        b.zero(t2)
    return b.build()


# -- alternating bump constructions ---------------------------------------

_QUADRANT_SIGNS = {"pp": (1, 1), "mm": (-1, -1), "pm": (1, -1), "mp": (-1, 1)}
_LABELS = (("m", 1), ("n", 1), ("m", -1), ("n", -1))


def bump_sequence(K: int, L: int, M: int, N: int) -> list[tuple[str, int]]:
    """Shortest sequence of disjoint signed bumps giving ``2X+1`` sets per quadrant.

    In the quadrant with sign pattern (sa, sb), the sets C_k (k >= 2) are governed
    by the bumps of ``sa*m`` and ``sb*n`` that are positive: when these bumps are
    disjoint and form ``R`` alternating runs in time order, exactly ``2R - 3``
    sets are nonempty.  A breadth-first search over the per-quadrant run counts
    finds the shortest labelling with ``R = X + 2`` in each quadrant.
    """
    targets = {"pp": K, "mm": L, "pm": M, "mp": N}
    for x in targets.values():
        if not (isinstance(x, int) and x >= 0):
            raise PresetError("alternating_bumps needs finite nonnegative integers")
    want = tuple(targets[q] + 2 for q in _QUADRANT_SIGNS)
    start = tuple((None, 0) for _ in _QUADRANT_SIGNS)
    parent = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        if tuple(r for _, r in state) == want:
            seq = []
            while parent[state] is not None:
                state, label = parent[state]
                seq.append(label)
            return seq[::-1]
        for label in _LABELS:
            nxt = []
            ok = True
            for (last, runs), (q, (sa, sb)), cap in zip(state, _QUADRANT_SIGNS.items(), want):
                which, sign = label
                relevant = sign == (sa if which == "m" else sb)
                if relevant and last != which:
                    last, runs = which, runs + 1
                ok = ok and runs <= cap
                nxt.append((last, runs))
            nxt = tuple(nxt)
            if ok and nxt not in parent:
                parent[nxt] = (state, label)
                queue.append(nxt)
    raise PresetError("no bump sequence found")  # unreachable for valid input


def alternating_bumps(K: int, L: int, M: int, N: int) -> tuple[Weight, Weight]:
    seq = bump_sequence(K, L, M, N)
    t2 = len(seq) * math.pi
    bm, bn = _Builder(0.0), _Builder(0.0)
    for i, (which, sign) in enumerate(seq):
        l, r = i * math.pi, (i + 1) * math.pi
        (bm if which == "m" else bn).arch(l, r, float(sign))
        (bn if which == "m" else bm).zero(r)
    m, n = bm.build(), bn.build()
    assert m.interval == n.interval == (0.0, t2)
    return m, n


# -- named presets ------------------------------------------------------------

PRESETS = {
    "classical": "m = n = 1 on [0, pi]",
    "sine": "m = n = sin t on [0, T2]; argument T2 (default 2*pi)",
    "example_3_13": "bumps m+, n+, m-, n- on [0, 4*pi], one curve per quadrant",
    "alternating_bumps": "argument K,L,M,N: 2K+1, 2L+1, 2M+1, 2N+1 curves in pp, mm, pm, mp",
    "bump": "m = n = sine arch on [l, r] inside [0, pi]; argument l,r (default pi/4,3pi/4)",
    "remark_3_9": "m = n = sin t on [0, pi], 0 on [pi, 2*pi]",
    "even": "m = n = 1 - 4 t^2 on [-1, 1] (even weight, two sign changes)",
}


def _floats(arg, count: int, name: str) -> list[float]:
    if isinstance(arg, (int, float)):
        parts = [arg]
    elif isinstance(arg, (list, tuple)):
        parts = list(arg)
    else:
        parts = [x for x in str(arg).split(",") if x.strip()]
    try:
        vals = [float(x) for x in parts]
    except ValueError:
        raise PresetError(f"{name}: cannot parse argument {arg!r}") from None
    if len(vals) != count:
        raise PresetError(f"{name}: expected {count} value(s), got {len(vals)}")
    return vals


def preset_weights(name: str, arg=None) -> tuple[Weight, Weight]:
    """The (m, n) pair of a named preset; one-weight presets return the same object twice."""
    if name == "classical":
        m = Weight.constant(1.0, 0.0, math.pi)
        return m, m
    if name == "sine":
        (t2,) = _floats(arg, 1, name) if arg is not None else [2 * math.pi]
        m = sine_weight(0.0, t2)
        return m, m
    if name == "example_3_13":
        m = _Builder(0.0)
        m.arch(0.0, math.pi, 1.0)
        m.zero(2 * math.pi)
        m.arch(2 * math.pi, 3 * math.pi, -1.0)
        m.zero(4 * math.pi)
        n = _Builder(0.0)
        n.zero(math.pi)
        n.arch(math.pi, 2 * math.pi, 1.0)
        n.zero(3 * math.pi)
        n.arch(3 * math.pi, 4 * math.pi, -1.0)
        return m.build(), n.build()
    if name == "alternating_bumps":
        vals = _floats(arg, 4, name) if arg is not None else None
        if vals is None or any(v != int(v) for v in vals):
            raise PresetError("alternating_bumps needs K,L,M,N as integers")
        return alternating_bumps(*(int(v) for v in vals))
    if name == "bump":
        l, r = _floats(arg, 2, name) if arg is not None else [math.pi / 4, 3 * math.pi / 4]
        m = bump_weight(l, r, 0.0, math.pi)
        return m, m
    if name == "remark_3_9":
        b = _Builder(0.0)
        b.arch(0.0, math.pi, 1.0)
        b.zero(2 * math.pi)
        m = b.build()
        return m, m
    if name == "even":
        m = Weight([-1.0, 1.0], [[-3.0, 8.0, -4.0]])
        return m, m
    raise PresetError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}")


def parse_preset(descriptor: str) -> tuple[str, str | None]:
    name, _, arg = descriptor.partition(":")
    return name.strip(), (arg.strip() or None)


def preset_problem(descriptor: str) -> Problem:
    """Problem for ``NAME`` or ``NAME:ARG`` with p = 1, q = 0."""
    name, arg = parse_preset(descriptor)
    m, n = preset_weights(name, arg)
    return Problem(m, n)


def function_preset(name: str, arg, t1: float, t2: float) -> Weight:
    """Single-function presets usable inside problem documents."""
    if name == "constant":
        (c,) = _floats(arg if arg is not None else 1.0, 1, name)
        return Weight.constant(c, t1, t2)
    if name in ("sine", "sine_pos", "sine_neg"):
        if arg is not None:
            (end,) = _floats(arg, 1, name)
            if abs(end - t2) > 1e-6 * max(1.0, abs(t2)):
                raise PresetError(f"{name}: argument {end} disagrees with interval end {t2}")
        part = {"sine": None, "sine_pos": "+", "sine_neg": "-"}[name]
        return sine_weight(t1, t2, part)
    if name == "bump":
        l, r = _floats(arg, 2, name)
        return bump_weight(l, r, t1, t2)
    raise PresetError(f"unknown function preset {name!r}; known: constant, sine, sine_pos, sine_neg, bump")
