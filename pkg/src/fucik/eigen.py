"""Eigenvalues of ``Lu = lambda w u`` on subintervals by bisection on the zero-function."""

from __future__ import annotations

import math

from .problem import Problem
from .shooting import DEFAULT_TOL, Tolerances, zero_function
from .weights import signed_part_nontrivial

BRACKET_LIMIT = 1e12
MAX_BISECTIONS = 80
REL_STOP = 1e-12


class EigenNotFound(RuntimeError):
    """No bracket found below the parameter limit."""


def iterate_zero(
    prob: Problem, which: str, a: float, k: int, t1: float, tol: Tolerances = DEFAULT_TOL, horizon: float | None = None
) -> float:
    """Position of the k-th zero to the right of ``t1`` of the solution vanishing at ``t1``.

    ``horizon`` applies to the last shot only.
    """
    t = t1
    for i in range(k):
        t = zero_function(prob, which, a, t, tol, horizon if i == k - 1 else None)
        if not math.isfinite(t):
            break
    return t


def _resolve_sub(prob: Problem, sub) -> tuple[float, float]:
    T1, T2 = prob.interval
    if sub is None:
        return T1, T2
    t1, t2 = float(sub[0]), float(sub[1])
    if not (T1 <= t1 < t2 <= T2):
        raise ValueError(f"subinterval ({t1}, {t2}) must satisfy {T1} <= t1 < t2 <= {T2}")
    return t1, t2


def eigenvalue(
    prob: Problem,
    which: str,
    k: int,
    sub: tuple[float, float] | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> float | None:
    """Eigenvalue with ``|k| - 1`` interior nodes on ``]t1, t2[``, of the sign of ``k``.

    Returns None when the weight has no part of the required sign on the
    subinterval.
    """
    k = int(k)
    if k == 0:
        raise ValueError("k must be a nonzero integer")
    t1, t2 = _resolve_sub(prob, sub)
    sign = 1 if k > 0 else -1
    if not signed_part_nontrivial(prob.weight(which), sign, t1, t2):
        return None
    nodes = abs(k)

    def lands_inside(mag: float) -> bool:
        # the k-th zero comes no later than t2 once |a| is large enough
        return iterate_zero(prob, which, sign * mag, nodes, t1, tol) < t2

    lo, hi = 1.0, 1.0
    if lands_inside(1.0):
        lo = 0.5
        while lands_inside(lo):
            hi = lo
            lo *= 0.5
            if lo < 1.0 / BRACKET_LIMIT:
                raise EigenNotFound(f"no lower bracket for k={k} above {lo:g}")
    else:
        hi = 2.0
        while not lands_inside(hi):
            lo = hi
            hi *= 2.0
            if hi > BRACKET_LIMIT:
                raise EigenNotFound(f"eigenvalue k={k} not bracketed below {BRACKET_LIMIT:g}")
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if lands_inside(mid):
            hi = mid
        else:
            lo = mid
        if hi - lo <= REL_STOP * hi:
            break
    return sign * 0.5 * (lo + hi)


def principal_pair(
    prob: Problem, which: str, sub: tuple[float, float] | None = None, tol: Tolerances = DEFAULT_TOL
) -> tuple[float | None, float | None]:
    """First positive and first negative eigenvalue on the subinterval."""
    return eigenvalue(prob, which, 1, sub, tol), eigenvalue(prob, which, -1, sub, tol)
