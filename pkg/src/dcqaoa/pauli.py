"""Symbolic multi-qubit Pauli-string algebra.

Pauli strings are represented as a letter string over {I, X, Y, Z} with a
complex coefficient; letter ``k`` acts on qubit ``k``.  Products are resolved
through a single-qubit lookup table, so no matrices are built anywhere in
this module.  The nested-commutator pool derivation treats the adiabatic
interpolation parameter as a formal symbol (polynomial bookkeeping), keeping
contributions from different polynomial degrees from cancelling each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

LETTERS = "IXYZ"

# Single-qubit products: _MUL_TABLE[(a, b)] = (phase, letter) with a.b = phase * letter.
_MUL_TABLE: dict[tuple[str, str], tuple[complex, str]] = {}
for _l in LETTERS:
    _MUL_TABLE[("I", _l)] = (1, _l)
    _MUL_TABLE[(_l, "I")] = (1, _l)
    _MUL_TABLE[(_l, _l)] = (1, "I")
for _a, _b, _c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
    _MUL_TABLE[(_a, _b)] = (1j, _c)
    _MUL_TABLE[(_b, _a)] = (-1j, _c)

_COEFF_TOL = 1e-12


@dataclass(frozen=True)
class PauliTerm:
    """A single Pauli string with a complex coefficient."""

    letters: str
    coefficient: complex = 1.0

    def __post_init__(self):
        if not self.letters or any(l not in LETTERS for l in self.letters):
            raise ValueError(f"invalid Pauli letters: {self.letters!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    @property
    def locality(self) -> int:
        """Number of non-identity letters."""
        return sum(l != "I" for l in self.letters)

    def pattern(self) -> str:
        """Non-identity letters in qubit order (orientation-preserving)."""
        return "".join(l for l in self.letters if l != "I")

    def __mul__(self, other: "PauliTerm") -> "PauliTerm":
        return multiply(self, other)

    def __neg__(self) -> "PauliTerm":
        return PauliTerm(self.letters, -self.coefficient)

    def scaled(self, factor: complex) -> "PauliTerm":
        return PauliTerm(self.letters, self.coefficient * factor)


def multiply(a: PauliTerm, b: PauliTerm) -> PauliTerm:
    """Operator product a.b as a single Pauli term, phase included."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(
            f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}"
        )
    phase: complex = 1
    out = []
    for la, lb in zip(a.letters, b.letters):
        ph, lc = _MUL_TABLE[(la, lb)]
        phase *= ph
        out.append(lc)
    return PauliTerm("".join(out), a.coefficient * b.coefficient * phase)


def terms_commute(a: PauliTerm, b: PauliTerm) -> bool:
    """Pauli strings either commute or anticommute; True if they commute."""
    anti = 0
    for la, lb in zip(a.letters, b.letters):
        if la != "I" and lb != "I" and la != lb:
            anti ^= 1
    return anti == 0


class PauliSum:
    """Canonicalized linear combination of Pauli terms on a fixed register.

    Canonical form: terms sorted by letter string, duplicates merged, and
    coefficients below 1e-12 in magnitude dropped.
    """

    __slots__ = ("n_qubits", "terms")

    def __init__(self, n_qubits: int, terms: Iterable[PauliTerm] = ()):
        if n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        merged: dict[str, complex] = {}
        for t in terms:
            if t.n_qubits != n_qubits:
                raise ValueError("all terms must share n_qubits")
            merged[t.letters] = merged.get(t.letters, 0) + t.coefficient
        self.n_qubits = n_qubits
        self.terms: tuple[PauliTerm, ...] = tuple(
            PauliTerm(l, c)
            for l, c in sorted(merged.items())
            if abs(c) >= _COEFF_TOL
        )

    def __iter__(self):
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        self._check(other)
        return PauliSum(self.n_qubits, (*self.terms, *other.terms))

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        self._check(other)
        return PauliSum(
            self.n_qubits, (*self.terms, *(-t for t in other.terms))
        )

    def scaled(self, factor: complex) -> "PauliSum":
        return PauliSum(self.n_qubits, (t.scaled(factor) for t in self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "PauliSum") -> None:
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit count mismatch")

    def __repr__(self) -> str:
        body = " + ".join(f"({t.coefficient})*{t.letters}" for t in self.terms)
        return f"PauliSum({self.n_qubits}, {body or '0'})"


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """[a, b] = ab - ba in canonical form (empty when everything commutes)."""
    if a.n_qubits != b.n_qubits:
        raise ValueError("qubit count mismatch")
    out: list[PauliTerm] = []
    for ta in a:
        for tb in b:
            if terms_commute(ta, tb):
                continue
            # Anticommuting strings: [ta, tb] = 2 * ta.tb
            out.append(multiply(ta, tb).scaled(2))
    return PauliSum(a.n_qubits, out)


class _LambdaPoly:
    """Operator-valued polynomial in the formal interpolation parameter."""

    __slots__ = ("n_qubits", "coeffs")

    def __init__(self, n_qubits: int, coeffs: dict[int, PauliSum]):
        self.n_qubits = n_qubits
        self.coeffs = {d: s for d, s in coeffs.items() if not s.is_zero()}

    def commutator_with(self, other: "_LambdaPoly") -> "_LambdaPoly":
        acc: dict[int, PauliSum] = {}
        for da, sa in self.coeffs.items():
            for db, sb in other.coeffs.items():
                c = commutator(sa, sb)
                if c.is_zero():
                    continue
                d = da + db
                acc[d] = acc[d] + c if d in acc else c
        return _LambdaPoly(self.n_qubits, acc)

    def patterns(self) -> set[str]:
        pats: set[str] = set()
        for s in self.coeffs.values():
            for t in s:
                pats.add(t.pattern())
        return pats


def nested_commutator_pool(
    h_mixer: PauliSum,
    h_cost: PauliSum,
    order: int,
    locality_cap: int,
) -> list[str]:
    """Distinct Pauli letter patterns appearing in the gauge-potential ansatz.

    Expands the nested commutators [H, [H, ... [H, dH]]] of odd depth
    2k-1 for k = 1..order, with H = (1-s) * h_mixer + s * h_cost and
    dH = h_cost - h_mixer, keeping s formal.  Patterns are the non-identity
    letters of each surviving term in qubit order (so 'ZY' and 'YZ' are
    distinct), filtered to locality <= locality_cap, sorted by
    (locality, pattern).
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if locality_cap < 1:
        raise ValueError("locality_cap must be >= 1")
    if h_mixer.is_zero() or h_cost.is_zero():
        raise ValueError("mixer and cost Hamiltonians must be nonempty")
    if h_mixer.n_qubits != h_cost.n_qubits:
        raise ValueError("qubit count mismatch")

    n = h_mixer.n_qubits
    d_h = h_cost - h_mixer
    h_ad = _LambdaPoly(n, {0: h_mixer, 1: d_h})
    pats: set[str] = set()
    nest = _LambdaPoly(n, {0: d_h})
    depth = 0
    for k in range(1, order + 1):
        while depth < 2 * k - 1:
            nest = h_ad.commutator_with(nest)
            depth += 1
        pats |= nest.patterns()
    return sorted(
        (p for p in pats if 0 < len(p) <= locality_cap),
        key=lambda p: (len(p), p),
    )


def transverse_field_mixer(n: int) -> PauliSum:
    """Sum of X on every qubit."""
    return PauliSum(
        n, (PauliTerm("I" * q + "X" + "I" * (n - q - 1)) for q in range(n))
    )


def generic_ising_cost(n: int) -> PauliSum:
    """A generic member of the ZZ-coupled Ising cost family.

    Includes longitudinal fields alongside the couplings, with distinct
    coefficients so no pattern is lost to accidental cancellation.  This is
    the family the two-local pool is derived for.
    """
    if n < 2:
        raise ValueError("need at least 2 qubits")
    terms = []
    coeff = 2.0
    for q in range(n):
        terms.append(PauliTerm("I" * q + "Z" + "I" * (n - q - 1), coeff))
        coeff += 1.0
    for i, j in combinations(range(n), 2):
        letters = "".join(
            "Z" if q in (i, j) else "I" for q in range(n)
        )
        terms.append(PauliTerm(letters, coeff))
        coeff += 1.0
    return PauliSum(n, terms)


def default_cd_pool() -> list[str]:
    """Second-order two-local pool for transverse-field/Ising drivers."""
    return nested_commutator_pool(
        transverse_field_mixer(3), generic_ising_cost(3), order=2, locality_cap=2
    )
