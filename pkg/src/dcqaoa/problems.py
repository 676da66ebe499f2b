"""Benchmark problem instances and their diagonal cost Hamiltonians.

Three families: unweighted 3-regular MaxCut, complete weighted MaxCut
(weights uniform on (0, 1]), and the SK spin glass with Rademacher +-1
couplings.  Generation is a pure function of (kind, n, seed) backed by the
counter-based Philox generator, so instances are bit-reproducible across
platforms.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .simulator import MAX_QUBITS, DiagonalOperator

MAXCUT_3REGULAR = "maxcut_3regular"
MAXCUT_COMPLETE_WEIGHTED = "maxcut_complete_weighted"
SK = "sk"
KINDS = (MAXCUT_3REGULAR, MAXCUT_COMPLETE_WEIGHTED, SK)


def derive_seed(*parts) -> int:
    """Stable 64-bit child seed from a tuple of ints/strings."""
    h = hashlib.blake2b(repr(parts).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "little")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


@dataclass(frozen=True)
class ProblemInstance:
    kind: str
    n: int
    edges: tuple[tuple[int, int, float], ...]  # canonical order: i < j, sorted
    seed: int

    @property
    def is_maxcut(self) -> bool:
        return self.kind in (MAXCUT_3REGULAR, MAXCUT_COMPLETE_WEIGHTED)


def gen_3regular(n: int, seed: int) -> ProblemInstance:
    """Uniform simple 3-regular graph via configuration-model rejection."""
    if n < 4 or n % 2:
        raise ValueError("3-regular graphs need even n >= 4")
    rng = _rng(seed)
    stubs = np.repeat(np.arange(n), 3)
    while True:
        perm = rng.permutation(stubs)
        pairs = perm.reshape(-1, 2)
        edges = set()
        ok = True
        for a, b in pairs:
            a, b = int(a), int(b)
            if a == b:
                ok = False
                break
            e = (a, b) if a < b else (b, a)
            if e in edges:
                ok = False
                break
            edges.add(e)
        if ok:
            break
    canon = tuple((i, j, 1.0) for i, j in sorted(edges))
    return ProblemInstance(MAXCUT_3REGULAR, n, canon, seed)


def gen_complete_weighted(n: int, seed: int) -> ProblemInstance:
    """K_n with i.i.d. weights uniform on (0, 1]."""
    if n < 2:
        raise ValueError("need n >= 2")
    rng = _rng(seed)
    edges = []
    for i, j in combinations(range(n), 2):
        edges.append((i, j, float(1.0 - rng.random())))
    return ProblemInstance(MAXCUT_COMPLETE_WEIGHTED, n, tuple(edges), seed)


def gen_sk(n: int, seed: int) -> ProblemInstance:
    """All-to-all couplings, i.i.d. uniform over {-1, +1}."""
    if n < 2:
        raise ValueError("need n >= 2")
    rng = _rng(seed)
    edges = []
    for i, j in combinations(range(n), 2):
        edges.append((i, j, float(2 * int(rng.integers(0, 2)) - 1)))
    return ProblemInstance(SK, n, tuple(edges), seed)


def generate(kind: str, n: int, seed: int) -> ProblemInstance:
    if kind == MAXCUT_3REGULAR:
        return gen_3regular(n, seed)
    if kind == MAXCUT_COMPLETE_WEIGHTED:
        return gen_complete_weighted(n, seed)
    if kind == SK:
        return gen_sk(n, seed)
    raise ValueError(f"unknown problem kind {kind!r}")


def cost_hamiltonian(instance: ProblemInstance) -> DiagonalOperator:
    """Diagonal cost over all bitstrings.

    MaxCut: values_k = -1/2 sum_{(i,j)} w_ij (1 - z_i z_j); SK: values_k =
    -sum_{i<j} J_ij z_i z_j, with z_i = +1 when bit i of k is 0.
    """
    if instance.n > MAX_QUBITS:
        raise ValueError("instance too large for dense enumeration")
    dim = 1 << instance.n
    ks = np.arange(dim, dtype=np.int64)
    values = np.zeros(dim, dtype=np.float64)
    for i, j, w in instance.edges:
        zz = 1.0 - 2.0 * (((ks >> i) ^ (ks >> j)) & 1)
        if instance.is_maxcut:
            values += -0.5 * w * (1.0 - zz)
        else:
            values += -w * zz
    return DiagonalOperator(instance.n, values)


def exact_ground_energy(op: DiagonalOperator) -> tuple[float, int]:
    """Exact minimum diagonal entry and its lowest-index argmin."""
    if op.n_qubits > MAX_QUBITS:
        raise ValueError("too many qubits for enumeration")
    idx = int(np.argmin(op.values))  # argmin returns the first minimizer
    return float(op.values[idx]), idx


def relative_error(F: float, E0: float) -> float:
    """(F - E0) / |E0|; rejects the degenerate E0 == 0 normalization."""
    if E0 == 0:
        raise ValueError("relative error undefined for E0 == 0")
    return (F - E0) / abs(E0)


def to_json(instance: ProblemInstance) -> str:
    """Graph JSON: canonical edge order, 17-significant-digit weights."""
    edges = ", ".join(
        f"[{i}, {j}, {w:.17g}]" for i, j, w in instance.edges
    )
    return (
        f'{{"kind": "{instance.kind}", "n": {instance.n}, '
        f'"seed": {instance.seed}, "edges": [{edges}]}}'
    )


def from_json(text: str) -> ProblemInstance:
    obj = json.loads(text)
    if obj["kind"] not in KINDS:
        raise ValueError(f"unknown problem kind {obj['kind']!r}")
    edges = tuple((int(i), int(j), float(w)) for i, j, w in obj["edges"])
    return ProblemInstance(obj["kind"], int(obj["n"]), edges, int(obj["seed"]))
