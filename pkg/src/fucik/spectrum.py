"""Nonemptiness tests and tracing of the Fucik curves C_k in each quadrant.

All computations happen in the positive quadrant of a sign-flipped problem:
the point (a, b) of quadrant (sa, sb) for weights (m, n) corresponds to the
point (|a|, |b|) for weights (sa*m, sb*n).
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .eigen import principal_pair
from .problem import Problem
from .shooting import DEFAULT_TOL, Tolerances, compose_phi, normalize_branch

DEFAULT_A_MAX = 1e4
GRID_PER_DECADE = 64
EDGE_BISECTIONS = 60
EDGE_OFFSET = 1e-3
B_REL_STOP = 1e-13
NONEMPTY_GAP = 1e-6  # relative to the interval length
RESIDUAL_SLACK = 1e-3  # horizon overshoot for residual checks, relative to the interval length


class Quadrant(enum.Enum):
    PP = ("pp", 1, 1)
    MM = ("mm", -1, -1)
    PM = ("pm", 1, -1)
    MP = ("mp", -1, 1)

    def __init__(self, label, sa, sb):
        self.label = label
        self.sa = sa
        self.sb = sb

    def __str__(self):
        return self.label

    @property
    def symbol(self) -> str:
        return ("+" if self.sa > 0 else "-") + ("+" if self.sb > 0 else "-")

    @classmethod
    def parse(cls, q) -> Quadrant:
        if isinstance(q, Quadrant):
            return q
        key = str(q).strip().lower()
        for member in cls:
            if key in (member.label, member.symbol):
                return member
        raise ValueError(f"unknown quadrant {q!r}; use pp, mm, pm, mp (or ++, --, +-, -+)")


QUADRANTS = tuple(Quadrant)


def quadrant_reduce(prob: Problem, quadrant) -> Problem:
    """The problem whose positive quadrant is ``quadrant`` of ``prob`` (an involution)."""
    q = Quadrant.parse(quadrant)
    return prob.signed(q.sa, q.sb)


@dataclass(frozen=True)
class Verdict:
    """Outcome of the large-parameter test: certified nonempty, or empty up to ``a_max``."""

    nonempty: bool
    a_max: float
    phi: float  # composition value at (a_max, a_max)

    def __str__(self):
        return "Nonempty" if self.nonempty else f"EmptyAtResolution({self.a_max:g})"

    def to_dict(self) -> dict:
        return {"status": "Nonempty" if self.nonempty else "EmptyAtResolution", "a_max": self.a_max}


def nonempty_test(
    prob: Problem, k: int, branch: str, quadrant, a_max: float = DEFAULT_A_MAX, tol: Tolerances = DEFAULT_TOL
) -> Verdict:
    """Nonempty iff the composition at ``(a_max, a_max)`` ends clearly before the right end."""
    if k < 2:
        raise ValueError("nonempty_test needs k >= 2")
    red = quadrant_reduce(prob, quadrant)
    t2 = prob.interval[1]
    phi = compose_phi(red, k, branch, a_max, a_max, tol=tol)
    return Verdict(bool(phi < t2 - NONEMPTY_GAP * prob.length), float(a_max), float(phi))


def _geometric_root(inside, top: float) -> float | None:
    """Switch point of a predicate that holds above it, searched in ]0, top] on a log scale."""
    if not inside(top):
        return None
    hi, lo = top, top / 16
    while inside(lo):
        hi = lo
        lo /= 16
        if lo < 1e-300:
            return None
    while hi / lo - 1 > B_REL_STOP:
        mid = math.sqrt(lo * hi)
        if inside(mid):
            hi = mid
        else:
            lo = mid
    return math.sqrt(lo * hi)


def solve_b(
    red: Problem, k: int, branch: str, a: float, b_max: float = DEFAULT_A_MAX, tol: Tolerances = DEFAULT_TOL
) -> float | None:
    """The ``b`` in ]0, b_max] with composition(a, b) landing on the right end.

    ``red`` must already be reduced to the positive quadrant and ``a > 0``.
    Uses that the landing point decreases in ``b``; returns None without a
    sign change in the bracket.
    """
    if not a > 0:
        raise ValueError("solve_b works in the positive quadrant, a must be > 0")
    t2 = red.interval[1]

    def inside(b):
        return compose_phi(red, k, branch, a, b, tol=tol) < t2

    return _geometric_root(inside, b_max)


def domain_edge(
    red: Problem, k: int, branch: str, a_max: float = DEFAULT_A_MAX, tol: Tolerances = DEFAULT_TOL
) -> float | None:
    """Smallest ``a`` for which some ``b <= a_max`` solves the curve equation (reduced problem)."""
    t2 = red.interval[1]

    def ok(a):
        return compose_phi(red, k, branch, a, a_max, tol=tol) < t2

    if not ok(a_max):
        return None
    hi, lo = a_max, a_max / 16
    while ok(lo):
        hi = lo
        lo /= 16
        if lo < 1e-300:
            return 0.0
    for _ in range(EDGE_BISECTIONS):
        mid = math.sqrt(lo * hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass
class CurveBranch:
    """Samples of one branch of C_k in one quadrant, in the original (signed) coordinates."""

    k: int
    branch: str
    quadrant: Quadrant
    status: Verdict
    samples: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))
    nu: float | None = None
    mu: float | None = None
    residuals: np.ndarray = field(default_factory=lambda: np.empty(0))

    @property
    def nonempty(self) -> bool:
        return self.status.nonempty

    def to_dict(self, with_samples: bool = True) -> dict:
        d = {
            "k": self.k,
            "branch": self.branch,
            "quadrant": self.quadrant.label,
            **self.status.to_dict(),
            "nu": self.nu,
            "mu": self.mu,
            "max_residual": float(self.residuals.max()) if self.residuals.size else None,
        }
        if with_samples:
            d["samples"] = [[float(a), float(b)] for a, b in self.samples]
        return d


def curve_residual(red: Problem, k: int, branch: str, a: float, b: float, tol: Tolerances) -> float:
    """|composition(a, b) - T2| evaluated with a horizon past T2."""
    t2 = red.interval[1]
    t = compose_phi(red, k, branch, a, b, tol=tol, horizon=t2 + RESIDUAL_SLACK * red.length)
    return abs(t - t2)


def geometric_grid(lo: float, hi: float, per_decade: int = GRID_PER_DECADE) -> np.ndarray:
    n = max(2, int(math.ceil(per_decade * math.log10(hi / lo))) + 1)
    g = np.geomspace(lo, hi, n)
    g[0], g[-1] = lo, hi
    return g


def trace_curve(
    prob: Problem,
    k: int,
    branch: str,
    quadrant,
    a_max: float = DEFAULT_A_MAX,
    per_decade: int = GRID_PER_DECADE,
    tol: Tolerances = DEFAULT_TOL,
    workers: int = 1,
) -> CurveBranch:
    """Sample ``b = f_k(a)`` on a geometric grid from just above the domain edge to ``a_max``."""
    q = Quadrant.parse(quadrant)
    br = normalize_branch(branch)
    verdict = nonempty_test(prob, k, br, q, a_max, tol)
    if not verdict.nonempty:
        return CurveBranch(k, br, q, verdict)
    red = quadrant_reduce(prob, q)
    nu = domain_edge(red, k, br, a_max, tol)
    grid = geometric_grid(nu * (1 + EDGE_OFFSET), a_max, per_decade)
    check = tol.halved()

    def point(a):
        b = solve_b(red, k, br, a, a_max, tol)
        if b is None:
            return None
        return a, b, curve_residual(red, k, br, a, b, check)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(point, grid))
    else:
        results = [point(a) for a in grid]
    rows = [r for r in results if r is not None]
    samples = np.array([[q.sa * a, q.sb * b] for a, b, _ in rows]).reshape(-1, 2)
    residuals = np.array([r for _, _, r in rows])
    mu = rows[-1][1] if rows and rows[-1][0] == a_max else solve_b(red, k, br, a_max, a_max, tol)
    return CurveBranch(
        k, br, q, verdict, samples,
        nu=q.sa * nu,
        mu=None if mu is None else q.sb * mu,
        residuals=residuals,
    )


@dataclass(frozen=True)
class TrivialLines:
    """Principal eigenvalues of m (vertical lines) and of n (horizontal lines) that exist."""

    vertical: tuple[float, ...]
    horizontal: tuple[float, ...]

    def to_dict(self) -> dict:
        return {"vertical": list(self.vertical), "horizontal": list(self.horizontal)}


def trivial_lines(prob: Problem, tol: Tolerances = DEFAULT_TOL) -> TrivialLines:
    vm = tuple(x for x in principal_pair(prob, "m", tol=tol) if x is not None)
    vn = vm if prob.one_weight else tuple(x for x in principal_pair(prob, "n", tol=tol) if x is not None)
    return TrivialLines(vm, vn)


# -- output ---------------------------------------------------------------------

CSV_HEADER = ("k", "branch", "quadrant", "a", "b")


def write_curves_csv(branches, stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for c in branches:
        for a, b in c.samples:
            w.writerow([c.k, c.branch, c.quadrant.label, f"{a:.17g}", f"{b:.17g}"])


def curves_csv(branches) -> str:
    buf = io.StringIO()
    write_curves_csv(branches, buf)
    return buf.getvalue()


def curves_json(branches) -> str:
    return json.dumps({"curves": [c.to_dict() for c in branches]}, indent=2)


def solve_a(
    red: Problem, k: int, branch: str, b: float, a_max: float = DEFAULT_A_MAX, tol: Tolerances = DEFAULT_TOL
) -> float | None:
    """Counterpart of :func:`solve_b`: the ``a`` in ]0, a_max] on the curve for a given ``b > 0``."""
    if not b > 0:
        raise ValueError("solve_a works in the positive quadrant, b must be > 0")
    t2 = red.interval[1]

    def inside(a):
        return compose_phi(red, k, branch, a, b, tol=tol) < t2

    return _geometric_root(inside, a_max)
