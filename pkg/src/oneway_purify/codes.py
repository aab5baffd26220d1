"""Distance-d correctability rule and small stabilizer codes with lookup decoders.

Concrete codes are tiny (n <= 10), so the decoder table is built by
enumerating Pauli errors in increasing weight and keeping the first
(minimum-weight) error seen for each syndrome.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional

import numpy as np

from ._accel import batch_syndromes
from .pauli import PauliString, commutes, compose, paulis_of_weight, weight

MAX_TABLE_QUBITS = 10


class LogicalEffect(Enum):
    IDENTITY = "Identity"
    LOGICAL_X = "LogicalX"
    LOGICAL_Y = "LogicalY"
    LOGICAL_Z = "LogicalZ"


class AbstractOutcome(Enum):
    CORRECTABLE_SUCCESS = "CorrectableSuccess"
    UNCORRECTABLE_FAILURE = "UncorrectableFailure"


def abstract_accepts(gates, d: int) -> bool:
    """True iff an estimated ``gates`` count is within the ``(d-1)/2`` a distance-d code corrects."""
    if gates < 0:
        raise ValueError("gate estimate must be non-negative")
    _check_distance(d)
    return 2 * gates <= d - 1


def _check_distance(d: int) -> None:
    if d < 3 or d % 2 == 0:
        raise ValueError(f"distance must be an odd integer >= 3, got {d!r}")


@dataclass(frozen=True)
class StabilizerCodeDef:
    """A validated [[n, 1, d]] stabilizer code with its lookup decoder.

    ``error_letters`` restricts the error model the distance refers to; the
    bit-flip repetition code only claims distance d against X errors.
    """

    name: str
    n: int
    stabilizers: tuple[PauliString, ...]
    logical_x: PauliString
    logical_z: PauliString
    distance: int
    error_letters: str = "XYZ"
    decoder_table: Mapping[tuple[int, ...], PauliString] = field(
        default_factory=dict, repr=False, compare=False
    )

    @property
    def t(self) -> int:
        return (self.distance - 1) // 2


def syndrome(code: StabilizerCodeDef, error: PauliString) -> tuple[int, ...]:
    """Bit i is 1 iff ``error`` anticommutes with stabilizer i."""
    if error.n != code.n:
        raise ValueError(f"error acts on {error.n} qubits, code has {code.n}")
    return tuple(0 if commutes(error, s) else 1 for s in code.stabilizers)


def _syndrome_words(stabilizers, errors) -> np.ndarray:
    sx = np.array([s.x for s in stabilizers], dtype=np.uint64)
    sz = np.array([s.z for s in stabilizers], dtype=np.uint64)
    ex = np.array([e.x for e in errors], dtype=np.uint64)
    ez = np.array([e.z for e in errors], dtype=np.uint64)
    return batch_syndromes(sx, sz, ex, ez)


def _word_to_bits(word: int, m: int) -> tuple[int, ...]:
    return tuple((word >> i) & 1 for i in range(m))


def _tie_key(p: PauliString):
    return (p.x_bits, p.z_bits)


def build_decoder_table(code: StabilizerCodeDef) -> dict[tuple[int, ...], PauliString]:
    """Map every attainable syndrome to a minimum-weight correction.

    Ties within a weight go to the lexicographically smallest
    ``(x_bits, z_bits)``.
    """
    if code.n > MAX_TABLE_QUBITS:
        raise ValueError(f"lookup decoder limited to n <= {MAX_TABLE_QUBITS} qubits")
    m = len(code.stabilizers)
    table: dict[tuple[int, ...], PauliString] = {(0,) * m: PauliString.identity(code.n)}
    target = 2**m
    for w in range(1, code.n + 1):
        if len(table) == target:
            break
        errors = list(paulis_of_weight(code.n, w, code.error_letters))
        best: dict[int, PauliString] = {}
        for word, err in zip(_syndrome_words(code.stabilizers, errors).tolist(), errors):
            key = _word_to_bits(word, m)
            if key in table:
                continue
            if word not in best or _tie_key(err) < _tie_key(best[word]):
                best[word] = err
        for word, err in best.items():
            table[_word_to_bits(word, m)] = err
    return table


def classify_residual(code: StabilizerCodeDef, residual: PauliString) -> LogicalEffect:
    """Logical class of a residual that commutes with every stabilizer."""
    flips_z = not commutes(residual, code.logical_z)  # has a logical-X part
    flips_x = not commutes(residual, code.logical_x)  # has a logical-Z part
    if flips_z and flips_x:
        return LogicalEffect.LOGICAL_Y
    if flips_z:
        return LogicalEffect.LOGICAL_X
    if flips_x:
        return LogicalEffect.LOGICAL_Z
    return LogicalEffect.IDENTITY


def decode_and_classify(code: StabilizerCodeDef, error: PauliString) -> LogicalEffect:
    """Apply the lookup correction and report what the residual does to the logical qubit."""
    correction = code.decoder_table[syndrome(code, error)]
    residual = compose(error, correction)
    if any(syndrome(code, residual)):
        raise RuntimeError("decoder produced a residual with non-zero syndrome")
    return classify_residual(code, residual)


def gf2_rank(rows) -> int:
    """Rank over GF(2) of a collection of integer bit-rows."""
    basis: list[int] = []
    for row in rows:
        for b in basis:
            row = min(row, row ^ b)
        if row:
            basis.append(row)
    return len(basis)


def _validate(code: StabilizerCodeDef) -> None:
    stabs = code.stabilizers
    if any(s.n != code.n for s in stabs + (code.logical_x, code.logical_z)):
        raise ValueError(f"{code.name}: operator sizes disagree with n={code.n}")
    if len(stabs) != code.n - 1:
        raise ValueError(f"{code.name}: need n-1 generators for one logical qubit")
    if gf2_rank([(s.x << code.n) | s.z for s in stabs]) != len(stabs):
        raise ValueError(f"{code.name}: stabilizer generators are dependent")
    for i, a in enumerate(stabs):
        for b in stabs[i + 1:]:
            if not commutes(a, b):
                raise ValueError(f"{code.name}: generators {a} and {b} anticommute")
    for logical in (code.logical_x, code.logical_z):
        if not all(commutes(logical, s) for s in stabs):
            raise ValueError(f"{code.name}: logical {logical} leaves the codespace")
    if commutes(code.logical_x, code.logical_z):
        raise ValueError(f"{code.name}: logical X and Z must anticommute")
    # No error lighter than the distance may act as a non-trivial logical.
    for w in range(1, code.distance):
        errors = list(paulis_of_weight(code.n, w, code.error_letters))
        words = _syndrome_words(stabs, errors)
        for word, err in zip(words.tolist(), errors):
            if word == 0 and classify_residual(code, err) is not LogicalEffect.IDENTITY:
                raise ValueError(
                    f"{code.name}: weight-{w} logical operator {err} "
                    f"contradicts distance {code.distance}"
                )


def _finish(code: StabilizerCodeDef) -> StabilizerCodeDef:
    _validate(code)
    table = build_decoder_table(code)
    if len(table) != 2 ** len(code.stabilizers):
        raise ValueError(f"{code.name}: decoder table misses attainable syndromes")
    for key, corr in table.items():
        if syndrome(code, corr) != key:
            raise ValueError(f"{code.name}: correction {corr} has the wrong syndrome")
    object.__setattr__(code, "decoder_table", table)
    return code


def repetition_z(d: int = 3) -> StabilizerCodeDef:
    """Bit-flip repetition code, stabilizers Z_i Z_{i+1}; distance d against X errors."""
    _check_distance(d)
    P = PauliString.from_label
    stabs = tuple(
        P("I" * i + "ZZ" + "I" * (d - i - 2)) for i in range(d - 1)
    )
    return _finish(StabilizerCodeDef(
        name=f"repetition_z({d})", n=d, stabilizers=stabs,
        logical_x=P("X" * d), logical_z=P("Z" + "I" * (d - 1)),
        distance=d, error_letters="X",
    ))


def five_one_three() -> StabilizerCodeDef:
    """The perfect [[5,1,3]] code (cyclic shifts of XZZXI)."""
    P = PauliString.from_label
    stabs = tuple(P(s) for s in ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"))
    return _finish(StabilizerCodeDef(
        name="five_one_three", n=5, stabilizers=stabs,
        logical_x=P("XXXXX"), logical_z=P("ZZZZZ"), distance=3,
    ))


def surface_d3() -> StabilizerCodeDef:
    """Rotated distance-3 surface code on a 3x3 grid (qubit = 3*row + col)."""
    P = PauliString.from_label

    def op(letter, qubits):
        return P("".join(letter if q in qubits else "I" for q in range(9)))

    stabs = (
        op("X", {1, 2, 4, 5}), op("X", {3, 4, 6, 7}), op("X", {0, 1}), op("X", {7, 8}),
        op("Z", {0, 1, 3, 4}), op("Z", {4, 5, 7, 8}), op("Z", {2, 5}), op("Z", {3, 6}),
    )
    return _finish(StabilizerCodeDef(
        name="surface_d3", n=9, stabilizers=stabs,
        logical_x=op("X", {0, 3, 6}), logical_z=op("Z", {0, 1, 2}), distance=3,
    ))


CODE_ALIASES = {
    "repetition3": "repetition_z(3)",
    "five13": "five_one_three",
    "surface3": "surface_d3",
}


def build_code(code_id: str) -> StabilizerCodeDef:
    """Build a named code: ``repetition_z(d)``, ``five_one_three`` or ``surface_d3``.

    The short names ``repetition3``, ``five13`` and ``surface3`` are accepted too.
    """
    key = CODE_ALIASES.get(code_id, code_id)
    if key == "five_one_three":
        return five_one_three()
    if key == "surface_d3":
        return surface_d3()
    match = re.fullmatch(r"repetition_z\((\d+)\)", key)
    if match:
        return repetition_z(int(match.group(1)))
    raise ValueError(f"unknown code {code_id!r}")


@dataclass(frozen=True)
class CodeSpec:
    """Which error-correction model a protocol run uses.

    ``model`` is ``"abstract"`` (only the distance matters) or ``"concrete"``
    (a real stabilizer code decodes the message error).
    """

    model: str
    d: int
    M: int
    code: Optional[StabilizerCodeDef] = None

    def __post_init__(self):
        _check_distance(self.d)
        if self.M < 1:
            raise ValueError("M must be positive")
        if self.model == "concrete":
            if self.code is None:
                raise ValueError("concrete model needs a built code")
            if (self.code.n, self.code.distance) != (self.M, self.d):
                raise ValueError("M and d must match the concrete code")
        elif self.model != "abstract":
            raise ValueError(f"unknown code model {self.model!r}")

    @property
    def t(self) -> int:
        return (self.d - 1) // 2

    @classmethod
    def abstract(cls, d: int, M: int) -> CodeSpec:
        return cls("abstract", d, M)

    @classmethod
    def concrete(cls, code_id: str) -> CodeSpec:
        code = build_code(code_id)
        return cls("concrete", code.distance, code.n, code)


def logical_outcome(spec: CodeSpec, error: PauliString):
    """Decode ``error`` under ``spec``: a LogicalEffect, or an AbstractOutcome."""
    if spec.model == "concrete":
        return decode_and_classify(spec.code, error)
    if weight(error) <= spec.t:
        return AbstractOutcome.CORRECTABLE_SUCCESS
    return AbstractOutcome.UNCORRECTABLE_FAILURE


def format_decoder_table(code: StabilizerCodeDef) -> str:
    """One line per syndrome: ``<bits> -> <label> support=<qubits>``."""
    lines = [
        f"# {code.name}: n={code.n} d={code.distance} errors={code.error_letters}",
        "# stabilizers: " + " ".join(s.label for s in code.stabilizers),
        f"# logical_x: {code.logical_x.label} logical_z: {code.logical_z.label}",
    ]
    for key in sorted(code.decoder_table):
        corr = code.decoder_table[key]
        support = ",".join(str(q) for q in corr.support) or "-"
        lines.append(f"{''.join(map(str, key))} -> {corr.label} support={support}")
    return "\n".join(lines) + "\n"
