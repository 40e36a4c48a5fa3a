import json
import math

import numpy as np
import pytest

from fucik.presets import (
    PRESETS,
    PresetError,
    alternating_bumps,
    bump_sequence,
    preset_problem,
    preset_weights,
)
from fucik.problem import Problem, ProblemError, load_problem
from fucik.weights import Weight, evaluate, sign_profile, support_edges

PI = math.pi


def test_classical_preset():
    m, n = preset_weights("classical")
    assert m is n
    assert m.interval == (0.0, PI)
    assert evaluate(m, 1.234) == 1.0


def test_example_313_sign_pattern():
    m, n = preset_weights("example_3_13")
    assert m.interval == n.interval == (0.0, 4 * PI)
    pm, pn = sign_profile(m), sign_profile(n)
    assert list(pm.positive_intervals[0]) == pytest.approx([0.0, PI]) and len(pm.positive_intervals) == 1
    assert list(pm.negative_intervals[0]) == pytest.approx([2 * PI, 3 * PI]) and len(pm.negative_intervals) == 1
    assert list(pn.positive_intervals[0]) == pytest.approx([PI, 2 * PI]) and len(pn.positive_intervals) == 1
    assert list(pn.negative_intervals[0]) == pytest.approx([3 * PI, 4 * PI]) and len(pn.negative_intervals) == 1
    # (sin t)^+ and (sin t)^- on the first period
    t = np.linspace(0, 2 * PI, 999)
    assert np.max(np.abs(evaluate(m, t) - np.maximum(np.sin(t), 0))) < 1e-8
    assert np.max(np.abs(evaluate(n, t) - np.maximum(-np.sin(t), 0))) < 1e-8


def test_sine_preset_has_one_sign_change():
    m, n = preset_weights("sine", "6.283185307179586")
    assert m is n
    assert sign_profile(m).sign_change_count == 1


def test_remark_39_weight():
    m, _ = preset_weights("remark_3_9")
    lo, hi, nlo, nhi = support_edges(m)
    assert (lo, hi) == pytest.approx((0.0, PI))
    assert nlo is None and nhi is None
    t = np.linspace(PI, 2 * PI, 50)
    assert np.all(evaluate(m, t) == 0.0)


def test_unknown_preset_is_config_error():
    with pytest.raises(PresetError):
        preset_problem("nope")
    with pytest.raises(PresetError):
        preset_problem("alternating_bumps:1,2")
    with pytest.raises(PresetError):
        preset_problem("bump:a,b")


def test_every_listed_preset_builds():
    for name in PRESETS:
        arg = "1,0,1,0" if name == "alternating_bumps" else None
        prob = preset_problem(name if arg is None else f"{name}:{arg}")
        assert prob.length > 0


def _runs(seq, sa, sb):
    relevant = [w for w, s in seq if s == (sa if w == "m" else sb)]
    return sum(1 for i, w in enumerate(relevant) if i == 0 or w != relevant[i - 1])


@pytest.mark.parametrize("K,L,M,N", [(0, 0, 0, 0), (1, 0, 2, 1), (2, 2, 2, 2), (0, 1, 0, 2)])
def test_bump_sequence_run_counts(K, L, M, N):
    seq = bump_sequence(K, L, M, N)
    assert _runs(seq, 1, 1) == K + 2
    assert _runs(seq, -1, -1) == L + 2
    assert _runs(seq, 1, -1) == M + 2
    assert _runs(seq, -1, 1) == N + 2


def test_alternating_bumps_disjoint_supports():
    m, n = alternating_bumps(1, 0, 1, 0)
    t = np.linspace(*m.interval, 5001)
    assert np.all(np.abs(evaluate(m, t) * evaluate(n, t)) < 1e-12)


def test_problem_validation():
    m = Weight.constant(1.0, 0.0, 1.0)
    with pytest.raises(ProblemError, match="positive"):
        Problem(m, p=Weight.constant(0.0, 0.0, 1.0))
    with pytest.raises(ProblemError, match="nonnegative"):
        Problem(m, q=Weight.constant(-1.0, 0.0, 1.0))
    with pytest.raises(ProblemError, match="vanishes"):
        Problem(Weight.constant(0.0, 0.0, 1.0))
    with pytest.raises(ProblemError, match="lives on"):
        Problem(m, Weight.constant(1.0, 0.0, 2.0))


def test_signed_copies(classical):
    assert classical.signed(1, 1) is classical
    mm = classical.signed(-1, -1)
    assert mm.one_weight
    back = mm.signed(-1, -1)
    assert np.array_equal(back.m.coeffs, classical.m.coeffs)


def test_json_problem_document(tmp_path):
    doc = {
        "interval": [0, 2 * PI],
        "m": {"preset": "sine"},
        "p": {"breakpoints": [0, 2 * PI], "coeffs": [[2.0]]},
    }
    path = tmp_path / "p.json"
    path.write_text(json.dumps(doc))
    prob = load_problem(path)
    assert prob.one_weight
    assert evaluate(prob.p, 1.0) == 2.0
    assert sign_profile(prob.m).sign_change_count == 1
    again = Problem.from_dict(json.loads(json.dumps(prob.to_dict())))
    assert np.array_equal(again.m.coeffs, prob.m.coeffs)
    assert again.one_weight


def test_json_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"interval": [0, 1],')
    with pytest.raises(ProblemError, match="line 1"):
        load_problem(bad)
    with pytest.raises(ProblemError, match="needs"):
        Problem.from_dict({"interval": [0, 1]})
    with pytest.raises(ProblemError, match="span"):
        Problem.from_dict({"interval": [0, 1], "m": {"breakpoints": [0, 2], "coeffs": [[1]]}})
    with pytest.raises(ProblemError, match="discontinuity"):
        Problem.from_dict({"interval": [0, 2], "m": {"breakpoints": [0, 1, 2], "coeffs": [[1], [2]]}})
    with pytest.raises(ProblemError):
        load_problem(tmp_path / "missing.json")
