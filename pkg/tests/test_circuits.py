import math

import numpy as np
import pytest

from plateaulab.circuits import (
    HAMILTONIAN,
    PHI,
    ShiftedProductFunction,
    f_eval,
    h_eval,
    h_eval_array,
    single_qubit_sim,
    tensor_sim,
)
from plateaulab.torus import GridShift, TorusPoint, bohr_dist


def test_phi_in_range_and_hamiltonian_unit_eigenvalues():
    assert 0.0 < PHI < math.pi / 4
    evals = np.linalg.eigvalsh(HAMILTONIAN)
    assert np.allclose(sorted(evals), [-1.0, 1.0])


def test_h_eval_anchor_values():
    assert h_eval(0.0) == pytest.approx(1.0, abs=1e-12)
    assert h_eval(1 / 3) == pytest.approx(0.0, abs=1e-12)
    assert h_eval(2 / 3) == pytest.approx(0.0, abs=1e-12)
    assert h_eval(0.5) == pytest.approx(-1 / 3, abs=1e-12)
    assert h_eval(1 / 6) == pytest.approx(2 / 3, abs=1e-12)


def test_printed_coefficient_variant_contradicts_simulator():
    # The smaller-amplitude variant 1/3 + cos(2 pi t)/3 cannot be this
    # circuit's expectation value: at t=0 the simulator gives exactly 1.
    def h_small_amp(t):
        return 1 / 3 + math.cos(2 * math.pi * t) / 3

    assert h_small_amp(0.0) == pytest.approx(2 / 3)
    assert single_qubit_sim(0.0) == pytest.approx(1.0, abs=1e-12)
    assert abs(single_qubit_sim(0.0) - h_small_amp(0.0)) > 0.3


def test_single_qubit_sim_matches_h_everywhere():
    for t in np.linspace(0, 1, 997):
        assert single_qubit_sim(float(t)) == pytest.approx(h_eval(float(t)), abs=1e-12)


def test_single_qubit_sim_examples():
    assert single_qubit_sim(0.0) == pytest.approx(1.0, abs=1e-12)
    assert single_qubit_sim(1 / 3) == pytest.approx(0.0, abs=1e-12)
    assert single_qubit_sim(0.2) == pytest.approx(1 / 3 + (2 / 3) * math.cos(0.4 * math.pi))


def test_h_max_attained_only_at_zero():
    ts = np.arange(0.0, 1.0, 1e-4)
    vals = h_eval_array(ts)
    assert vals.max() == pytest.approx(1.0, abs=1e-12)
    assert np.all(vals[1:] < 1.0)
    # derivative -(4 pi / 3) sin(2 pi t) vanishes only at t = 0, 1/2 in [0,1)
    interior = ts[(ts > 1e-3) & (np.abs(ts - 0.5) > 1e-3)]
    deriv = -(4 * math.pi / 3) * np.sin(2 * math.pi * interior)
    assert np.all(np.abs(deriv) > 0)


def test_h_bounded_by_two_thirds_outside_near_region():
    ts = np.arange(0.0, 1.0, 1e-4)
    far = np.array([bohr_dist(float(t), 0.0) >= 1 / 6 for t in ts])
    assert np.all(np.abs(h_eval_array(ts[far])) <= 2 / 3 + 1e-12)


def test_f_eval_examples():
    f = ShiftedProductFunction(2, GridShift((0, 0)))
    assert f_eval(f, TorusPoint([0.0, 0.0])) == pytest.approx(1.0)
    assert f_eval(f, TorusPoint([1 / 3, 0.0])) == pytest.approx(0.0, abs=1e-12)
    fa = ShiftedProductFunction(3, GridShift((2, 0, 1)))
    assert f_eval(fa, fa.argmax()) == pytest.approx(1.0)


def test_f_range_and_shift_covariance():
    rng = np.random.default_rng(1)
    f0 = ShiftedProductFunction(4, GridShift.zero(4))
    fa = ShiftedProductFunction(4, GridShift((1, 2, 0, 1)))
    for _ in range(200):
        x = TorusPoint(rng.random(4))
        v = fa(x)
        assert -1.0 <= v <= 1.0
        assert v == f0(x - fa.shift)  # exact: same float operations


def test_f_periodicity():
    f = ShiftedProductFunction(2, GridShift((1, 0)))
    x = TorusPoint([0.21, 0.77])
    shifted = TorusPoint([0.21 + 1.0, 0.77])
    assert f(x) == f(shifted)


def test_f_eval_dim_mismatch():
    f = ShiftedProductFunction(2, GridShift((0, 0)))
    with pytest.raises(ValueError):
        f(TorusPoint([0.1]))


def test_tensor_sim_matches_f_eval():
    rng = np.random.default_rng(2)
    for _ in range(1000):
        n = int(rng.integers(1, 4))
        a = GridShift(tuple(int(t) for t in rng.integers(0, 3, n)))
        f = ShiftedProductFunction(n, a)
        x = TorusPoint(rng.random(n))
        assert abs(tensor_sim(f, x) - f(x)) <= 1e-9


def test_tensor_sim_degenerate_and_product_cases():
    f1 = ShiftedProductFunction(1, GridShift((0,)))
    for t in (0.0, 0.17, 0.62):
        assert tensor_sim(f1, TorusPoint([t])) == pytest.approx(single_qubit_sim(t), abs=1e-12)
    f3 = ShiftedProductFunction(3, GridShift((0, 0, 0)))
    assert tensor_sim(f3, TorusPoint([0.0, 0.0, 0.0])) == pytest.approx(1.0)


def test_tensor_sim_cap():
    f = ShiftedProductFunction(11, GridShift.zero(11))
    with pytest.raises(ValueError, match="cap"):
        tensor_sim(f, TorusPoint([0.0] * 11))
