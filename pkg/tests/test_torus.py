import math

import pytest
from hypothesis import given, strategies as st

from plateaulab.torus import (
    GridShift,
    TorusPoint,
    bohr_dist,
    far_count_array,
    hamming_d,
    round_to_grid,
    wrap01,
)

unit = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)


def test_torus_point_wraps():
    p = TorusPoint([1.25, -0.25, 3.0])
    assert p.coords == (0.25, 0.75, 0.0)
    assert all(0.0 <= c < 1.0 for c in p.coords)


def test_wrap01_clamps_near_one():
    # 1 - eps/2 rounds to 1.0 after floor subtraction of a tiny negative
    assert wrap01(-1e-17) == 0.0


def test_torus_point_immutable():
    p = TorusPoint([0.1])
    with pytest.raises(AttributeError):
        p.coords = (0.5,)


def test_grid_shift_validation():
    with pytest.raises(ValueError):
        GridShift((0, 3))
    with pytest.raises(ValueError):
        GridShift((0, -1))


def test_grid_shift_enumeration_and_index_roundtrip():
    shifts = list(GridShift.all_shifts(3))
    assert len(shifts) == 27
    assert len(set(shifts)) == 27
    for s in shifts:
        assert GridShift.from_index(3, s.index) == s
        assert all(c in (0.0, 1 / 3, 2 / 3) for c in s.to_point().coords)


def test_bohr_dist_examples():
    assert bohr_dist(0.9, 0.1) == pytest.approx(0.2)
    assert bohr_dist(0.5, 0.0) == pytest.approx(0.5)
    assert bohr_dist(1 / 3, 2 / 3) == pytest.approx(1 / 3)


@given(unit, unit, unit)
def test_bohr_symmetry_and_translation_invariance(u, v, t):
    assert bohr_dist(u, v) == pytest.approx(bohr_dist(v, u))
    assert bohr_dist(u + t, v + t) == pytest.approx(bohr_dist(u, v), abs=1e-9)
    assert 0.0 <= bohr_dist(u, v) <= 0.5


def test_round_to_grid_examples():
    s, tie = round_to_grid(TorusPoint([0.30, 0.70]))
    assert s.trits == (1, 2) and not tie
    s, tie = round_to_grid(TorusPoint([0.5]))
    assert s.trits == (1,) and tie  # equidistant; smaller trit wins
    s, tie = round_to_grid(TorusPoint([0.0, 0.0]))
    assert s.trits == (0, 0) and not tie


def test_hamming_d_examples():
    a = GridShift((0, 0))
    assert hamming_d(a, TorusPoint([0.5, 0.05])) == 1
    assert hamming_d(GridShift((0, 0, 0)), TorusPoint([0.0, 0.0, 0.0])) == 0
    assert hamming_d(a, TorusPoint([0.5, 0.5])) == 2


def test_hamming_d_dim_mismatch():
    with pytest.raises(ValueError):
        hamming_d(GridShift((0,)), TorusPoint([0.1, 0.2]))


def test_boundary_exactly_one_sixth_is_far():
    assert hamming_d(GridShift((0,)), TorusPoint([1 / 6])) == 1


@given(st.lists(st.integers(0, 2), min_size=1, max_size=6), st.data())
def test_hamming_shift_covariance(trits, data):
    n = len(trits)
    a = GridShift(tuple(trits))
    x = TorusPoint(data.draw(st.lists(unit, min_size=n, max_size=n)))
    assert hamming_d(a, x) == hamming_d(GridShift.zero(n), x - a)


@given(st.data())
def test_hamming_matches_rounding_when_tie_free(data):
    n = data.draw(st.integers(1, 5))
    a = GridShift(tuple(data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))))
    x = TorusPoint(data.draw(st.lists(unit, min_size=n, max_size=n)))
    rounded, tie = round_to_grid(x)
    if not tie:
        disagreement = sum(1 for s, t in zip(a.trits, rounded.trits) if s != t)
        assert hamming_d(a, x) == disagreement


def test_far_count_array_matches_scalar():
    import numpy as np

    a = GridShift((1, 0, 2))
    pts = np.random.default_rng(0).random((50, 3))
    for row, fc in zip(pts, far_count_array(pts, a.trits)):
        assert fc == hamming_d(a, TorusPoint(row))
