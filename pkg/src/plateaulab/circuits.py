"""The concrete one-qubit PQC family and its shifted product functions.

The single-qubit block rotates |0> by exp(-i*pi*x*H) with
H = cos(phi)*X + sin(phi)*Z and measures Z.  With phi = arcsin(1/sqrt(3))
the Z expectation is the degree-1 trigonometric polynomial
h(x) = 1/3 + (2/3)cos(2*pi*x), which is 1 at x=0 and 0 at x=1/3, 2/3.
Tensoring n such blocks yields f_0(x) = prod_j h(x_j); the hidden family
member is f_a(x) = f_0(x - a) for a on the 1/3-grid.

A small statevector simulator validates the analytic formulas
independently (exact 2x2 matrix exponential, strided gate application).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .torus import GridShift, TorusPoint, wrap01

PHI = math.asin(1.0 / math.sqrt(3.0))  # rotation-axis angle, in ]0, pi/4[

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
HAMILTONIAN = math.cos(PHI) * PAULI_X + math.sin(PHI) * PAULI_Z  # eigenvalues +-1

TENSOR_SIM_CAP = 10  # statevector has 2**n amplitudes


def h_eval(t: float) -> float:
    """One-qubit expectation value: 1/3 + (2/3)cos(2*pi*t), range [-1/3, 1]."""
    return 1.0 / 3.0 + (2.0 / 3.0) * math.cos(2.0 * math.pi * t)


def h_eval_array(t: np.ndarray) -> np.ndarray:
    return 1.0 / 3.0 + (2.0 / 3.0) * np.cos(2.0 * np.pi * np.asarray(t))


@dataclass(frozen=True)
class ShiftedProductFunction:
    """f_a(x) = prod_j h(x_j - a_j); maximum value 1, attained at x = a."""

    n: int
    shift: GridShift

    def __post_init__(self):
        if self.n < 1 or self.shift.n != self.n:
            raise ValueError("shift dimension must equal n >= 1")

    def __call__(self, x: TorusPoint) -> float:
        if len(x) != self.n:
            raise ValueError(f"dimension mismatch: expected {self.n}, got {len(x)}")
        out = 1.0
        # wrap before h so that f_a(x) == f_0(x - a) holds exactly
        for c, t in zip(x.coords, self.shift.trits):
            out *= h_eval(wrap01(c - t / 3.0))
        return out

    def eval_array(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at many points; `points` has shape (..., n)."""
        a = np.asarray(self.shift.to_point().coords)
        return np.prod(h_eval_array(np.mod(points - a, 1.0)), axis=-1)

    @property
    def max_value(self) -> float:
        return 1.0

    def argmax(self) -> TorusPoint:
        return self.shift.to_point()


def f_eval(f: ShiftedProductFunction, x: TorusPoint) -> float:
    return f(x)


def single_qubit_unitary(t: float) -> np.ndarray:
    """exp(-i*pi*t*H) in closed form: cos(pi t) I - i sin(pi t) H."""
    return math.cos(math.pi * t) * np.eye(2, dtype=complex) - 1j * math.sin(
        math.pi * t
    ) * HAMILTONIAN


def single_qubit_sim(x: float) -> float:
    """Z expectation of exp(-i*pi*x*H)|0>, by explicit statevector."""
    psi = single_qubit_unitary(x)[:, 0]
    return float(abs(psi[0]) ** 2 - abs(psi[1]) ** 2)


def tensor_sim(f: ShiftedProductFunction, x: TorusPoint, cap: int = TENSOR_SIM_CAP) -> float:
    """Full 2**n statevector evaluation of f at x; cross-checks eval_array.

    Applies each shifted one-qubit unitary by strided 2x2 multiplication
    and measures Z on every qubit.
    """
    n = f.n
    if len(x) != n:
        raise ValueError(f"dimension mismatch: expected {n}, got {len(x)}")
    if n > cap:
        raise ValueError(f"n={n} exceeds statevector cap {cap} (2**n amplitudes)")
    state = np.zeros(2**n, dtype=complex)
    state[0] = 1.0
    for j in range(n):
        u = single_qubit_unitary(x.coords[j] - f.shift.trits[j] / 3.0)
        s = state.reshape(2 ** (n - 1 - j), 2, 2**j)
        state = np.einsum("ab,ibj->iaj", u, s).reshape(-1)
    idx = np.arange(2**n)
    parity = np.ones(2**n)
    for j in range(n):
        parity *= 1 - 2 * ((idx >> j) & 1)
    return float(np.sum(parity * np.abs(state) ** 2))
