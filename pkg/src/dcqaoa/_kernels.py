"""Numba-accelerated gate kernels (optional fast path).

All kernels are single-threaded in-place loops over the flat amplitude
array, so results are bitwise deterministic.  simulator.py falls back to
pure-numpy equivalents when numba is unavailable.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def deco(f):
            return f

        return deco if not (args and callable(args[0])) else args[0]


@njit(cache=True)
def diag_phase(psi: np.ndarray, values: np.ndarray, gamma: float) -> None:
    for k in range(psi.size):
        v = gamma * values[k]
        psi[k] *= np.cos(v) - 1j * np.sin(v)


@njit(cache=True)
def rx_all(psi: np.ndarray, n: int, beta: float) -> None:
    c = np.cos(beta)
    s = np.sin(beta)
    N = psi.size
    for q in range(n):
        step = 1 << q
        for g in range(0, N, 2 * step):
            for k in range(g, g + step):
                a0 = psi[k]
                a1 = psi[k + step]
                psi[k] = c * a0 - 1j * s * a1
                psi[k + step] = -1j * s * a0 + c * a1


@njit(cache=True)
def single_rotation(psi: np.ndarray, code: int, q: int, theta: float) -> None:
    # codes: 1 = X, 2 = Y, 3 = Z
    c = np.cos(theta)
    s = np.sin(theta)
    step = 1 << q
    N = psi.size
    if code == 3:
        em = c - 1j * s
        ep = c + 1j * s
        for g in range(0, N, 2 * step):
            for k in range(g, g + step):
                psi[k] *= em
                psi[k + step] *= ep
    elif code == 1:
        for g in range(0, N, 2 * step):
            for k in range(g, g + step):
                a0 = psi[k]
                a1 = psi[k + step]
                psi[k] = c * a0 - 1j * s * a1
                psi[k + step] = -1j * s * a0 + c * a1
    else:
        for g in range(0, N, 2 * step):
            for k in range(g, g + step):
                a0 = psi[k]
                a1 = psi[k + step]
                psi[k] = c * a0 - s * a1
                psi[k + step] = s * a0 + c * a1


@njit(cache=True)
def two_local_rotation(
    psi: np.ndarray, ci: int, qi: int, cj: int, qj: int, theta: float
) -> None:
    """exp(-i theta P) with P = (letter ci on qi)(letter cj on qj).

    Letter codes: 1 = X, 2 = Y, 3 = Z.  Dispatches on how many of the two
    letters flip their bit (Z is diagonal, X/Y flip).
    """
    c = np.cos(theta)
    s = np.sin(theta)
    N = psi.size
    bi = 1 << qi
    bj = 1 << qj
    if ci == 3 and cj == 3:
        em = c - 1j * s
        ep = c + 1j * s
        for k in range(N):
            zz = ((k >> qi) ^ (k >> qj)) & 1
            psi[k] *= ep if zz else em
    elif ci == 3 or cj == 3:
        if ci == 3:
            bz, bf, cf = bi, bj, cj
        else:
            bz, bf, cf = bj, bi, ci
        stepf = bf
        for g in range(0, N, 2 * stepf):
            for k in range(g, g + stepf):
                sgn = -1.0 if (k & bz) else 1.0
                a0 = psi[k]
                a1 = psi[k + stepf]
                if cf == 2:  # Z (x) Y: real rotation with sign
                    psi[k] = c * a0 - sgn * s * a1
                    psi[k + stepf] = sgn * s * a0 + c * a1
                else:  # Z (x) X
                    f = -1j * sgn * s
                    psi[k] = c * a0 + f * a1
                    psi[k + stepf] = f * a0 + c * a1
    else:
        # Both letters flip; pairs are (k, k ^ (bi | bj)), anchored on qi = 0.
        # P|b> = f_i(b_i) f_j(b_j) |~b>; f_X = 1, f_Y(b) = i(1 - 2b).
        fi0 = 1.0 + 0j if ci == 1 else 1j
        fi1 = 1.0 + 0j if ci == 1 else -1j
        fj0 = 1.0 + 0j if cj == 1 else 1j
        fj1 = 1.0 + 0j if cj == 1 else -1j
        for g in range(0, N, 2 * bi):
            for k in range(g, g + bi):
                k1 = (k + bi) ^ bj
                if k & bj:
                    ph0 = fi0 * fj1
                    ph1 = fi1 * fj0
                else:
                    ph0 = fi0 * fj0
                    ph1 = fi1 * fj1
                a0 = psi[k]
                a1 = psi[k1]
                psi[k] = c * a0 - 1j * s * ph1 * a1
                psi[k1] = c * a1 - 1j * s * ph0 * a0
