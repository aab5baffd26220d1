"""Binary-symplectic Pauli strings and single-qubit detection statistics.

A Pauli string on ``n`` qubits is stored as two integer bitmasks: bit ``i`` of
``x`` (``z``) is set when qubit ``i`` carries an X (Z) component.  Y sets both.
Global phase is dropped everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

_LETTERS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS = {v: k for k, v in _LETTERS.items()}


@dataclass(frozen=True)
class PauliString:
    """An n-qubit Pauli operator modulo phase."""

    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("qubit count must be non-negative")
        full = (1 << self.n) - 1
        if self.x & ~full or self.z & ~full or self.x < 0 or self.z < 0:
            raise ValueError(f"bitmask exceeds {self.n} qubits")

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(n)

    @classmethod
    def from_label(cls, label: str) -> PauliString:
        """Parse a label such as ``"XIZY"``; character ``i`` acts on qubit ``i``."""
        x = z = 0
        for i, ch in enumerate(label.upper()):
            try:
                bx, bz = _BITS[ch]
            except KeyError:
                raise ValueError(f"invalid Pauli letter {ch!r}") from None
            x |= bx << i
            z |= bz << i
        return cls(len(label), x, z)

    @classmethod
    def from_bits(cls, x_bits: Iterable[int], z_bits: Iterable[int]) -> PauliString:
        xs, zs = list(x_bits), list(z_bits)
        if len(xs) != len(zs):
            raise ValueError("x_bits and z_bits must have equal length")
        x = sum(1 << i for i, b in enumerate(xs) if b)
        z = sum(1 << i for i, b in enumerate(zs) if b)
        return cls(len(xs), x, z)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> PauliString:
        if not 0 <= qubit < n:
            raise ValueError(f"qubit {qubit} out of range for n={n}")
        bx, bz = _BITS[letter.upper()]
        return cls(n, bx << qubit, bz << qubit)

    @property
    def x_bits(self) -> tuple[int, ...]:
        return tuple((self.x >> i) & 1 for i in range(self.n))

    @property
    def z_bits(self) -> tuple[int, ...]:
        return tuple((self.z >> i) & 1 for i in range(self.n))

    @property
    def support(self) -> tuple[int, ...]:
        mask = self.x | self.z
        return tuple(i for i in range(self.n) if (mask >> i) & 1)

    @property
    def label(self) -> str:
        return "".join(
            _LETTERS[(self.x >> i) & 1, (self.z >> i) & 1] for i in range(self.n)
        )

    def __str__(self) -> str:
        return self.label


def weight(p: PauliString) -> int:
    """Number of qubits on which ``p`` acts non-trivially."""
    return (p.x | p.z).bit_count()


def _check_same_size(p: PauliString, q: PauliString) -> None:
    if p.n != q.n:
        raise ValueError(f"Pauli strings act on {p.n} and {q.n} qubits")


def symplectic_product(p: PauliString, q: PauliString) -> int:
    """Symplectic inner product of ``p`` and ``q`` over GF(2)."""
    _check_same_size(p, q)
    return ((p.x & q.z) ^ (p.z & q.x)).bit_count() & 1


def commutes(p: PauliString, q: PauliString) -> bool:
    return symplectic_product(p, q) == 0


def compose(p: PauliString, q: PauliString) -> PauliString:
    """Product of ``p`` and ``q`` with the phase discarded."""
    _check_same_size(p, q)
    return PauliString(p.n, p.x ^ q.x, p.z ^ q.z)


class BasisState(IntEnum):
    """The four BB84 states a sampling qubit can be prepared in."""

    Z0 = 0  # |0>
    Z1 = 1  # |1>
    X_PLUS = 2  # |+>
    X_MINUS = 3  # |->

    @property
    def basis(self) -> str:
        return "Z" if self in (BasisState.Z0, BasisState.Z1) else "X"


class EveAction(IntEnum):
    """What the adversary does to a single transmitted qubit."""

    IDENTITY = 0
    PAULI_X = 1
    PAULI_Y = 2
    PAULI_Z = 3
    MEAS_Z = 4
    MEAS_X = 5

    @property
    def is_measurement(self) -> bool:
        return self in (EveAction.MEAS_Z, EveAction.MEAS_X)

    @property
    def pauli_letter(self) -> str:
        """Single-qubit Pauli applied by a unitary action (``"I"`` for measurements)."""
        return {1: "X", 2: "Y", 3: "Z"}.get(int(self), "I")


# Pauli that stabilizes each basis; a state flips to its orthogonal partner
# exactly when the applied Pauli anticommutes with it.
_BASIS_PAULI = {"Z": (0, 1), "X": (1, 0)}
_HALF = Fraction(1, 2)


def flip_probability(action: EveAction, state: BasisState) -> Fraction:
    """Probability that Bob, measuring in the preparation basis, sees the orthogonal state.

    Unitary Pauli actions flip deterministically or not at all.  A projective
    measurement is modelled with collapse: it never disturbs an eigenstate of
    its own basis and leaves a conjugate-basis state in a uniformly random
    outcome.

    Returns:
        An exact value in ``{0, 1/2, 1}``.
    """
    action = EveAction(action)
    state = BasisState(state)
    if action is EveAction.IDENTITY:
        return Fraction(0)
    if action.is_measurement:
        measured = "Z" if action is EveAction.MEAS_Z else "X"
        return Fraction(0) if measured == state.basis else _HALF
    ax, az = _BITS[action.pauli_letter]
    bx, bz = _BASIS_PAULI[state.basis]
    return Fraction((ax * bz + az * bx) % 2)


def mean_flip_probability(action: EveAction) -> Fraction:
    """Relative Hamming weight an action induces on a uniformly prepared sampling qubit."""
    return sum((flip_probability(action, s) for s in BasisState), Fraction(0)) / 4


def action_pauli(action: EveAction, n: int = 1, qubit: int = 0) -> PauliString:
    """Pauli string of a unitary action placed on ``qubit`` (identity for measurements)."""
    return PauliString.single(n, qubit, EveAction(action).pauli_letter)


def paulis_of_weight(n: int, w: int, letters: Sequence[str] = "XYZ") -> Iterable[PauliString]:
    """All Pauli strings on ``n`` qubits of weight exactly ``w`` using ``letters``."""
    per_site = [_BITS[ch] for ch in letters]
    for sites in combinations(range(n), w):
        for choice in product(per_site, repeat=w):
            x = z = 0
            for q, (bx, bz) in zip(sites, choice):
                x |= bx << q
                z |= bz << q
            yield PauliString(n, x, z)
