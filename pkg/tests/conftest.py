"""Shared dense-matrix oracles, independent of the package's gate kernels."""

import numpy as np
import pytest

PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense_pauli(letters: str) -> np.ndarray:
    """Dense matrix of a Pauli string; letters[q] acts on qubit q = LSB."""
    m = np.array([[1.0 + 0j]])
    for q in range(len(letters)):
        m = np.kron(PAULI_MATS[letters[q]], m)
    return m


def dense_rotation(letters: str, theta: float) -> np.ndarray:
    """exp(-i theta P) computed by eigen-decomposition (oracle path)."""
    P = dense_pauli(letters)
    w, V = np.linalg.eigh(P)
    return (V * np.exp(-1j * theta * w)) @ V.conj().T


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# Pass/fail lines registered by the acceptance tests, echoed after the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
