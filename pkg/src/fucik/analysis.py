"""Counts of nonempty Fucik sets per quadrant, asymptotes of the first curves, support gaps."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .eigen import eigenvalue
from .problem import Problem
from .shooting import DEFAULT_TOL, Tolerances, normalize_branch
from .spectrum import (
    DEFAULT_A_MAX,
    QUADRANTS,
    Quadrant,
    TrivialLines,
    Verdict,
    domain_edge,
    nonempty_test,
    quadrant_reduce,
    solve_a,
    solve_b,
    trivial_lines,
)
from .weights import positive_overlap, sign_profile, support_edges

DEFAULT_K_STOP = 6
GAP_REL = 1e-4
PROBE_FACTOR = 100.0
EDGE_ATOL = 1e-12


class InconsistencyError(RuntimeError):
    """Level k+1 nonempty while level k looks empty: a tolerance problem, not a mathematical one."""


class AsymptoteError(AssertionError):
    """A first curve exists but the eigenvalue giving its asymptote does not."""


class EmptyCurveError(ValueError):
    """The requested first curve is empty at the working resolution."""


# -- counting ---------------------------------------------------------------------


@dataclass(frozen=True)
class Count:
    value: int
    at_least: bool = False

    def __str__(self):
        return f"AtLeast({self.value})" if self.at_least else str(self.value)

    def to_json(self):
        return {"at_least": self.value} if self.at_least else self.value


@dataclass
class QuadrantCount:
    quadrant: Quadrant
    entries: list[tuple[int, str, Verdict]]
    total: Count
    symbolically_infinite: bool

    def nonempty_sets(self) -> list[tuple[int, str]]:
        return [(k, br) for k, br, v in self.entries if v.nonempty]

    def to_dict(self) -> dict:
        return {
            "quadrant": self.quadrant.label,
            "total_nonempty": self.total.to_json(),
            "symbolically_infinite": self.symbolically_infinite,
            "counts": [{"k": k, "branch": br, **v.to_dict()} for k, br, v in self.entries],
        }


def count_quadrant(
    prob: Problem,
    quadrant,
    k_stop: int = DEFAULT_K_STOP,
    a_max: float = DEFAULT_A_MAX,
    tol: Tolerances = DEFAULT_TOL,
) -> QuadrantCount:
    """Test C_k (both branches) for k = 2..k_stop and count the nonempty ones.

    The count is open-ended (AtLeast) when both sets at k_stop are nonempty,
    since further levels may then be occupied too.
    """
    if k_stop < 2:
        raise ValueError("k_stop must be >= 2")
    q = Quadrant.parse(quadrant)
    entries = []
    levels = {}
    for k in range(2, k_stop + 1):
        row = [nonempty_test(prob, k, br, q, a_max, tol) for br in ("gt", "lt")]
        levels[k] = row
        entries.extend((k, br, v) for br, v in zip(("gt", "lt"), row))
    for k in range(2, k_stop):
        if any(v.nonempty for v in levels[k + 1]) and not all(v.nonempty for v in levels[k]):
            raise InconsistencyError(
                f"quadrant {q}: level {k + 1} is occupied while level {k} is not "
                f"({[str(v) for v in levels[k]]}); tighten the tolerances or raise A_max"
            )
    total = sum(v.nonempty for _, _, v in entries)
    open_ended = all(v.nonempty for v in levels[k_stop])
    red = quadrant_reduce(prob, q)
    return QuadrantCount(q, entries, Count(total, open_ended), positive_overlap(red.m, red.n))


# -- asymptotes of the first curves ---------------------------------------------

# (quadrant, branch) -> (case, horizontal line, vertical line); a line is
# (sign of the eigenvalue, left end, right end) for the weight n (horizontal)
# or m (vertical).  End labels: T1, T2, or T1m> / T2n< etc. for support edges.
ASYMPTOTE_TABLE = {
    ("pp", "gt"): ("i", (1, "T1m>", "T2"), (1, "T1", "T2n>")),
    ("pp", "lt"): ("ii", (1, "T1", "T2m>"), (1, "T1n>", "T2")),
    ("mm", "gt"): ("iii", (-1, "T1m<", "T2"), (-1, "T1", "T2n<")),
    ("mm", "lt"): ("iv", (-1, "T1", "T2m<"), (-1, "T1n<", "T2")),
    ("pm", "gt"): ("v", (-1, "T1m>", "T2"), (1, "T1", "T2n<")),
    ("pm", "lt"): ("vi", (-1, "T1", "T2m>"), (1, "T1n<", "T2")),
    ("mp", "gt"): ("vii", (1, "T1m<", "T2"), (-1, "T1", "T2n>")),
    ("mp", "lt"): ("viii", (1, "T1", "T2m<"), (-1, "T1n>", "T2")),
}


def edge_values(prob: Problem) -> dict[str, float | None]:
    t1, t2 = prob.interval
    out = {"T1": t1, "T2": t2}
    for name in ("m", "n"):
        a, b, c, d = support_edges(prob.weight(name))
        out.update({f"T1{name}>": a, f"T2{name}>": b, f"T1{name}<": c, f"T2{name}<": d})
    return out


@dataclass(frozen=True)
class Asymptotes:
    quadrant: Quadrant
    branch: str
    case: str
    horizontal: float | None
    vertical: float | None
    horizontal_interval: tuple[float, float] | None
    vertical_interval: tuple[float, float] | None

    def to_dict(self) -> dict:
        return {
            "quadrant": self.quadrant.label,
            "branch": self.branch,
            "case": self.case,
            "horizontal": self.horizontal,
            "vertical": self.vertical,
            "horizontal_interval": self.horizontal_interval,
            "vertical_interval": self.vertical_interval,
        }


def _line_level(prob: Problem, which: str, line, edges, tol) -> tuple[float | None, tuple | None]:
    sign, left, right = line
    lo, hi = edges[left], edges[right]
    if lo is None or hi is None or not lo < hi:
        return None, None
    return eigenvalue(prob, which, sign, (lo, hi), tol), (lo, hi)


def asymptotes_first_curves(
    prob: Problem,
    quadrant,
    branch: str,
    tol: Tolerances = DEFAULT_TOL,
    a_max: float = DEFAULT_A_MAX,
    require_nonempty: bool = True,
) -> Asymptotes:
    """Horizontal and vertical asymptotes of C_2 for the given quadrant and branch.

    Both levels are principal eigenvalues on intervals truncated at support
    edges of the weights.  Raises EmptyCurveError if C_2 is empty at
    resolution (unless ``require_nonempty`` is False, in which case missing
    eigenvalues are reported as None).
    """
    q = Quadrant.parse(quadrant)
    br = normalize_branch(branch)
    case, hline, vline = ASYMPTOTE_TABLE[(q.label, br)]
    nonempty = nonempty_test(prob, 2, br, q, a_max, tol).nonempty
    if require_nonempty and not nonempty:
        raise EmptyCurveError(f"C_2 ({br}, {q}) is empty up to a = {a_max:g}")
    edges = edge_values(prob)
    h, hint = _line_level(prob, "n", hline, edges, tol)
    v, vint = _line_level(prob, "m", vline, edges, tol)
    if nonempty and (h is None or v is None):
        raise AsymptoteError(f"C_2 ({br}, {q}) is nonempty but case ({case}) has an undefined eigenvalue")
    return Asymptotes(q, br, case, h, v, hint, vint)


@dataclass
class AsymptoteProbe:
    """Distances of the traced curve to its asymptotes at growing parameter values."""

    asymptotes: Asymptotes
    trivial_horizontal: float | None
    trivial_vertical: float | None
    a_probes: list[float] = field(default_factory=list)
    b_values: list[float] = field(default_factory=list)
    horizontal_residuals: list[float] = field(default_factory=list)
    b_probes: list[float] = field(default_factory=list)
    a_values: list[float] = field(default_factory=list)
    vertical_residuals: list[float] = field(default_factory=list)

    @staticmethod
    def _decreasing(xs) -> bool:
        return all(y < x for x, y in zip(xs, xs[1:]))

    @property
    def horizontal_monotone(self) -> bool:
        return self._decreasing(self.horizontal_residuals)

    @property
    def vertical_monotone(self) -> bool:
        return self._decreasing(self.vertical_residuals)

    @property
    def horizontal_trivial_residuals(self) -> list[float]:
        if self.trivial_horizontal is None:
            return []
        return [abs(b - self.trivial_horizontal) for b in self.b_values]

    def to_dict(self) -> dict:
        return {
            "asymptotes": self.asymptotes.to_dict(),
            "trivial_horizontal": self.trivial_horizontal,
            "trivial_vertical": self.trivial_vertical,
            "a_probes": self.a_probes,
            "b_values": self.b_values,
            "horizontal_residuals": self.horizontal_residuals,
            "horizontal_monotone": self.horizontal_monotone,
            "b_probes": self.b_probes,
            "a_values": self.a_values,
            "vertical_residuals": self.vertical_residuals,
            "vertical_monotone": self.vertical_monotone,
        }


def asymptote_consistency(
    prob: Problem,
    quadrant,
    branch: str,
    a_probe: float | None = None,
    probes: int = 5,
    tol: Tolerances = DEFAULT_TOL,
    a_max: float = DEFAULT_A_MAX,
) -> AsymptoteProbe:
    """Evaluate C_2 at doubling parameters and measure the distance to both asymptotes.

    ``a_probe`` defaults to 100 times the domain edge.  The same schedule is
    applied to ``b`` for the vertical asymptote.
    """
    q = Quadrant.parse(quadrant)
    br = normalize_branch(branch)
    asy = asymptotes_first_curves(prob, q, br, tol, a_max)
    red = quadrant_reduce(prob, q)
    if a_probe is None:
        a_probe = PROBE_FACTOR * domain_edge(red, 2, br, a_max, tol)
    a_probe = abs(a_probe)
    lines = trivial_lines(prob, tol)
    th = _matching(lines.horizontal, q.sb)
    tv = _matching(lines.vertical, q.sa)
    out = AsymptoteProbe(asy, th, tv)
    for j in range(probes):
        x = a_probe * 2.0**j
        top = max(a_max, 4 * x)
        b = solve_b(red, 2, br, x, top, tol)
        a = solve_a(red, 2, br, x, top, tol)
        if b is not None:
            out.a_probes.append(q.sa * x)
            out.b_values.append(q.sb * b)
            out.horizontal_residuals.append(abs(q.sb * b - asy.horizontal))
        if a is not None:
            out.b_probes.append(q.sb * x)
            out.a_values.append(q.sa * a)
            out.vertical_residuals.append(abs(q.sa * a - asy.vertical))
    return out


def _matching(values, sign) -> float | None:
    for v in values:
        if v * sign > 0:
            return v
    return None


# -- compact support --------------------------------------------------------------


@dataclass
class GapReport:
    compact_support: bool
    gap: float | None
    tol_gap: float
    consistent: bool
    per_curve: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "compact_support": self.compact_support,
            "gap": self.gap,
            "tol_gap": self.tol_gap,
            "consistent": self.consistent,
            "per_curve": self.per_curve,
        }


def has_compact_support(prob: Problem) -> bool:
    """Whether both weights vanish near both ends of the interval."""
    t1, t2 = prob.interval
    for name in ("m", "n"):
        lo_pos, hi_pos, lo_neg, hi_neg = support_edges(prob.weight(name))
        for lo in (lo_pos, lo_neg):
            if lo is not None and lo <= t1 + EDGE_ATOL * prob.length:
                return False
        for hi in (hi_pos, hi_neg):
            if hi is not None and hi >= t2 - EDGE_ATOL * prob.length:
                return False
    return True


def compact_support_gap(
    prob: Problem, tol: Tolerances = DEFAULT_TOL, a_max: float = DEFAULT_A_MAX
) -> GapReport:
    """Smallest distance between a first-curve asymptote and the matching trivial line.

    The gap is positive exactly when both weights have compact support in the
    open interval; ``consistent`` records whether the numbers agree with that.
    """
    lines = trivial_lines(prob, tol)
    per_curve = {}
    for q in QUADRANTS:
        for br in ("gt", "lt"):
            if not nonempty_test(prob, 2, br, q, a_max, tol).nonempty:
                continue
            asy = asymptotes_first_curves(prob, q, br, tol, a_max, require_nonempty=False)
            th = _matching(lines.horizontal, q.sb)
            tv = _matching(lines.vertical, q.sa)
            gaps = []
            if asy.horizontal is not None and th is not None:
                gaps.append(abs(asy.horizontal - th))
            if asy.vertical is not None and tv is not None:
                gaps.append(abs(asy.vertical - tv))
            if gaps:
                per_curve[f"{br}{q.label}"] = min(gaps)
    scale = min((abs(x) for x in lines.vertical + lines.horizontal), default=1.0)
    tol_gap = GAP_REL * scale
    gap = min(per_curve.values()) if per_curve else None
    compact = has_compact_support(prob)
    consistent = gap is not None and ((gap > tol_gap) == compact)
    return GapReport(compact, gap, tol_gap, consistent, per_curve)


# -- full report --------------------------------------------------------------------


@dataclass
class SpectrumReport:
    trivial: TrivialLines
    per_quadrant: dict[str, QuadrantCount]
    asymptotes: dict[str, Asymptotes | None]
    sign_changes: dict[str, int]
    a_max: float
    k_stop: int

    def to_dict(self) -> dict:
        return {
            "a_max": self.a_max,
            "k_stop": self.k_stop,
            "sign_changes": self.sign_changes,
            "trivial": self.trivial.to_dict(),
            "per_quadrant": {k: v.to_dict() for k, v in self.per_quadrant.items()},
            "asymptotes": {k: (v.to_dict() if v else None) for k, v in self.asymptotes.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def table(self) -> str:
        lines = [
            "sign changes: " + ", ".join(f"{k}={v}" for k, v in self.sign_changes.items()),
            "trivial lines: vertical a = " + _fmt_list(self.trivial.vertical)
            + "; horizontal b = " + _fmt_list(self.trivial.horizontal),
            f"A_max = {self.a_max:g}, k = 2..{self.k_stop}",
            "",
            f"{'quadrant':<9}{'total':<14}{'infinite':<10}nonempty sets",
        ]
        for label, qc in self.per_quadrant.items():
            sets = " ".join(f"C{k}{'>' if br == 'gt' else '<'}" for k, br in qc.nonempty_sets()) or "-"
            lines.append(f"{label:<9}{str(qc.total):<14}{str(qc.symbolically_infinite).lower():<10}{sets}")
        lines += ["", f"{'curve':<9}{'case':<6}{'horizontal b':<24}vertical a"]
        for key, asy in self.asymptotes.items():
            if asy is None:
                continue
            lines.append(f"{key:<9}{asy.case:<6}{_fmt(asy.horizontal):<24}{_fmt(asy.vertical)}")
        return "\n".join(lines)


def _fmt(x) -> str:
    return "none" if x is None else f"{x:.12g}"


def _fmt_list(xs) -> str:
    return "{" + ", ".join(_fmt(x) for x in xs) + "}"


def spectrum_report(
    prob: Problem,
    quadrants=None,
    k_stop: int = DEFAULT_K_STOP,
    a_max: float = DEFAULT_A_MAX,
    tol: Tolerances = DEFAULT_TOL,
) -> SpectrumReport:
    qs = [Quadrant.parse(q) for q in (quadrants or QUADRANTS)]
    per_quadrant = {q.label: count_quadrant(prob, q, k_stop, a_max, tol) for q in qs}
    asymptotes = {}
    for q in qs:
        entries = {(k, br): v for k, br, v in per_quadrant[q.label].entries}
        for br in ("gt", "lt"):
            key = f"{br}{q.label}"
            asymptotes[key] = asymptotes_first_curves(prob, q, br, tol, a_max) if entries[(2, br)].nonempty else None
    changes = {"m": sign_profile(prob.m).sign_change_count}
    if not prob.one_weight:
        changes["n"] = sign_profile(prob.n).sign_change_count
    return SpectrumReport(trivial_lines(prob, tol), per_quadrant, asymptotes, changes, a_max, k_stop)
