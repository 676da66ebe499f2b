"""Dense state-vector simulator.

Amplitudes live in one flat complex128 array of length 2**n.  Qubit 0 is the
least-significant bit of the basis index.  Gates update the array in place
with stride arithmetic; no gate matrix larger than 2x2 is ever materialized.
Angles are taken as given (no mod-2pi reduction) so optimizer trajectories
stay continuous.  Hot loops run through numba kernels when available, with
equivalent single-threaded numpy fallbacks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels

MAX_QUBITS = 24

_LETTER_CODE = {"X": 1, "Y": 2, "Z": 3}


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray  # complex128, shape (2**n_qubits,)


@dataclass(frozen=True)
class DiagonalOperator:
    """Diagonal observable: one real value per computational basis state."""

    n_qubits: int
    values: np.ndarray  # float64, shape (2**n_qubits,)

    def __post_init__(self):
        if self.values.shape != (1 << self.n_qubits,):
            raise ValueError("values length must be 2**n_qubits")


def init_plus_state(n: int) -> StateVector:
    """|+>^n: every amplitude equal to 2**(-n/2)."""
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"n must be in [1, {MAX_QUBITS}], got {n}")
    dim = 1 << n
    amps = np.full(dim, 2.0 ** (-n / 2), dtype=np.complex128)
    return StateVector(n, amps)


def apply_diagonal_phase(
    state: StateVector, op: DiagonalOperator, gamma: float
) -> StateVector:
    """amplitude_k *= exp(-i * gamma * values_k)."""
    if op.n_qubits != state.n_qubits:
        raise ValueError("dimension mismatch")
    if _kernels.HAVE_NUMBA:
        _kernels.diag_phase(state.amplitudes, op.values, float(gamma))
    else:
        state.amplitudes *= np.exp(-1j * gamma * op.values)
    return state


def _apply_single_qubit(
    state: StateVector, qubit: int, m00, m01, m10, m11
) -> None:
    """In-place 2x2 update on one qubit (numpy fallback path)."""
    n = state.n_qubits
    view = state.amplitudes.reshape(1 << (n - 1 - qubit), 2, 1 << qubit)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = m00 * a0 + m01 * a1
    view[:, 1, :] = m10 * a0 + m11 * a1


def apply_rx_all(state: StateVector, beta: float) -> StateVector:
    """exp(-i * beta * X) on every qubit."""
    if _kernels.HAVE_NUMBA:
        _kernels.rx_all(state.amplitudes, state.n_qubits, float(beta))
        return state
    c, s = np.cos(beta), np.sin(beta)
    for q in range(state.n_qubits):
        _apply_single_qubit(state, q, c, -1j * s, -1j * s, c)
    return state


def apply_single_pauli_rotation(
    state: StateVector, letter: str, qubit: int, theta: float
) -> StateVector:
    """exp(-i * theta * P) for a single-qubit Pauli P in {X, Y, Z}."""
    if not 0 <= qubit < state.n_qubits:
        raise ValueError("qubit index out of range")
    if letter not in _LETTER_CODE:
        raise ValueError(f"invalid Pauli letter {letter!r}")
    if _kernels.HAVE_NUMBA:
        _kernels.single_rotation(
            state.amplitudes, _LETTER_CODE[letter], qubit, float(theta)
        )
        return state
    c, s = np.cos(theta), np.sin(theta)
    if letter == "X":
        _apply_single_qubit(state, qubit, c, -1j * s, -1j * s, c)
    elif letter == "Y":
        _apply_single_qubit(state, qubit, c, -s, s, c)
    else:
        _apply_single_qubit(state, qubit, c - 1j * s, 0, 0, c + 1j * s)
    return state


def _pauli_string_action(n: int, la: str, lb: str, i: int, j: int):
    """Numpy fallback: P|k> = phase(k) |k ^ mask| for the two-local string."""
    ks = np.arange(1 << n, dtype=np.int64)
    mask = 0
    phase = np.ones(1 << n, dtype=np.complex128)
    for letter, q in ((la, i), (lb, j)):
        bit = (ks >> q) & 1
        if letter == "X":
            mask |= 1 << q
        elif letter == "Y":
            mask |= 1 << q
            phase = phase * (1j * (1 - 2 * bit))
        else:
            phase = phase * (1 - 2 * bit)
    perm = (ks ^ mask).astype(np.intp)
    return perm, phase


def apply_two_local_pauli_rotation(
    state: StateVector,
    letters: tuple[str, str],
    qubits: tuple[int, int],
    theta: float,
) -> StateVector:
    """exp(-i * theta * P) for P = (letters[0] on qubits[0]) (letters[1] on qubits[1]).

    Valid because every Pauli string squares to the identity:
    exp(-i t P) = cos(t) I - i sin(t) P.
    """
    i, j = qubits
    n = state.n_qubits
    la, lb = letters
    if i == j:
        raise ValueError("qubits must be distinct")
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError("qubit index out of range")
    if la not in _LETTER_CODE or lb not in _LETTER_CODE:
        raise ValueError(f"invalid Pauli letters {letters!r}")
    if _kernels.HAVE_NUMBA:
        _kernels.two_local_rotation(
            state.amplitudes, _LETTER_CODE[la], i, _LETTER_CODE[lb], j,
            float(theta),
        )
        return state
    perm, phase = _pauli_string_action(n, la, lb, i, j)
    psi = state.amplitudes
    p_psi = np.take(phase * psi, perm)
    state.amplitudes = np.cos(theta) * psi - 1j * np.sin(theta) * p_psi
    return state


def expectation_diagonal(state: StateVector, op: DiagonalOperator) -> float:
    """<psi| op |psi> = sum_k values_k |amplitude_k|^2."""
    if op.n_qubits != state.n_qubits:
        raise ValueError("dimension mismatch")
    amps = state.amplitudes
    prob = amps.real**2 + amps.imag**2
    return float(np.dot(op.values, prob))
