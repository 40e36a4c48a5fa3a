import math

import numpy as np
import pytest
from numpy.polynomial import polynomial as npoly

from fucik.presets import bump_weight, sine_weight
from fucik.weights import (
    Weight,
    WeightError,
    evaluate,
    first_negative_time,
    first_positive_time,
    positive_overlap,
    sign_profile,
    signed_part_nontrivial,
    support_edges,
)

PI = math.pi


@pytest.fixture(scope="module")
def sine():
    return sine_weight(0.0, 2 * PI)


def test_sine_approximation_at_quarter_period(sine):
    assert evaluate(sine, PI / 2) == pytest.approx(1.0, abs=1e-6)


def test_sine_approximation_uniform_error(sine):
    t = np.linspace(0, 2 * PI, 20001)
    assert np.max(np.abs(evaluate(sine, t) - np.sin(t))) <= 1e-8


def test_sine_with_64_pieces_still_within_1e6():
    w = sine_weight(0.0, 2 * PI, pieces_per_pi=32)
    assert w.pieces == 64
    assert evaluate(w, PI / 2) == pytest.approx(1.0, abs=1e-6)


def test_constant_piece():
    w = Weight.constant(1.0, 0.0, 3.0)
    assert evaluate(w, 0.0) == 1.0
    assert evaluate(w, 2.2) == 1.0
    assert np.all(evaluate(w, np.linspace(0, 3, 7)) == 1.0)


def test_discontinuity_rejected():
    with pytest.raises(WeightError, match="discontinuity"):
        Weight([0.0, 1.0, 2.0], [[1.0], [-1.0]])


def test_malformed_weights_rejected():
    with pytest.raises(WeightError):
        Weight([0.0], [])
    with pytest.raises(WeightError):
        Weight([0.0, 1.0, 0.5], [[1.0], [1.0]])
    with pytest.raises(WeightError):
        Weight([0.0, 1.0], [[1.0], [1.0]])
    with pytest.raises(WeightError):
        Weight([0.0, 1.0], [[0, 0, 0, 0, 0, 0, 1.0]])
    with pytest.raises(WeightError):
        Weight([0.0, 1.0], [[float("nan")]])


def test_evaluate_outside_interval_is_domain_error(sine):
    with pytest.raises(WeightError):
        evaluate(sine, -1e-3)
    with pytest.raises(WeightError):
        evaluate(sine, 7.0)


def test_left_piece_at_breakpoint():
    # continuous within 1e-12 relative: the left value is returned
    w = Weight([0.0, 1.0, 2.0], [[0.0, 1.0], [1.0 + 1e-13, -1.0]])
    assert evaluate(w, 1.0) == 1.0


def test_evaluate_matches_per_piece_polynomials():
    rng = np.random.default_rng(7)
    bp = np.array([0.0, 0.7, 1.5, 2.0])
    rows = [rng.normal(size=4)]
    for i in range(1, 3):
        h = bp[i] - bp[i - 1]
        r = rng.normal(size=4)
        r[0] = npoly.polyval(h, rows[-1])
        rows.append(r)
    w = Weight(bp, rows)
    t = rng.uniform(0, 2, 1000)
    idx = np.searchsorted(bp, t, side="left") - 1
    idx = np.clip(idx, 0, 2)
    ref = np.array([npoly.polyval(x - bp[i], rows[i]) for x, i in zip(t, idx)])
    assert np.allclose(evaluate(w, t), ref, rtol=1e-12, atol=1e-12)


def test_first_positive_time_examples(sine):
    assert first_positive_time(sine, PI) is None
    assert first_positive_time(sine, 0.0) == 0.0
    b = bump_weight(PI / 4, 3 * PI / 4, 0.0, PI)
    assert first_positive_time(b, 0.0) == pytest.approx(PI / 4, abs=1e-12)
    assert first_negative_time(sine, 0.0) == pytest.approx(PI, abs=1e-12)


def test_support_edges_examples(sine):
    edges = support_edges(sine)
    assert edges == pytest.approx((0.0, PI, PI, 2 * PI), abs=1e-12)
    assert support_edges(Weight.constant(1.0, 0.0, PI)) == (0.0, PI, None, None)
    b = bump_weight(PI / 4, 3 * PI / 4, 0.0, PI)
    lo, hi, n1, n2 = support_edges(b)
    assert (lo, hi) == pytest.approx((PI / 4, 3 * PI / 4), abs=1e-12)
    assert n1 is None and n2 is None


def test_support_edges_negation_swaps(sine):
    a, b, c, d = support_edges(sine)
    assert support_edges(-sine) == (c, d, a, b)


def test_sign_profile_sine():
    p = sign_profile(sine_weight(0.0, 2 * PI))
    assert p.sign_change_count == 1
    assert p.simple_change_points == pytest.approx((PI,), abs=1e-12)
    p3 = sign_profile(sine_weight(0.0, 3 * PI))
    assert p3.sign_change_count == 2
    assert p3.simple_change_points == pytest.approx((PI, 2 * PI), abs=1e-12)


@pytest.mark.parametrize("K", range(1, 7))
def test_sign_change_count_of_sine(K):
    assert sign_profile(sine_weight(0.0, (K + 1) * PI)).sign_change_count == K


def test_touching_zero_is_not_a_sign_change():
    w = Weight([0.0, 2.0], [[1.0, -2.0, 1.0]])
    p = sign_profile(w)
    assert p.sign_change_count == 0
    flat = [x for iv in p.positive_intervals for x in iv]
    assert flat == pytest.approx([0.0, 1.0, 1.0, 2.0], abs=1e-7)


def test_interior_polynomial_root_refined():
    # 1 - 4 t^2 on [-1, 1] crosses at -1/2 and 1/2
    w = Weight([-1.0, 1.0], [[-3.0, 8.0, -4.0]])
    p = sign_profile(w)
    assert p.simple_change_points == pytest.approx((-0.5, 0.5), abs=1e-12)


def test_zero_plateau_change_point_at_right_edge():
    # + on [0,1], 0 on [1,2], - on [2,3]: the change is reported at 2
    w = Weight([0.0, 1.0, 2.0, 3.0], [[0.0, 1.0, -1.0], [0.0], [0.0, -1.0, 1.0]])
    p = sign_profile(w)
    assert p.simple_change_points == pytest.approx((2.0,))
    assert p.positive_intervals == ((0.0, 1.0),)
    assert p.negative_intervals == ((2.0, 3.0),)


def test_signed_part_and_overlap(sine):
    assert signed_part_nontrivial(sine, 1, 0.0, PI)
    assert not signed_part_nontrivial(sine, -1, 0.0, PI)
    assert signed_part_nontrivial(sine, -1, 0.0, 2 * PI)
    assert positive_overlap(sine, sine)
    assert not positive_overlap(sine, -sine)


def test_extrema_exact():
    w = Weight([-1.0, 1.0], [[-3.0, 8.0, -4.0]])
    lo, hi = w.extrema()
    assert hi == pytest.approx(1.0, abs=1e-14)
    assert lo == pytest.approx(-3.0, abs=1e-14)


def test_roundtrip_dict(sine):
    w = Weight.from_dict(sine.to_dict())
    assert np.array_equal(w.breakpoints, sine.breakpoints)
    assert np.array_equal(w.coeffs, sine.coeffs)
