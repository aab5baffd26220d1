"""Quantum transport between Alice and Bob, with Eve acting in the channel.

Eve sees only channel positions.  She never receives the permutation or the
sampling states, so attack strategies are defined purely over positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .pauli import BasisState, EveAction, PauliString, flip_probability

# FLIP_TABLE[action, state] = flip probability (exactly 0, 0.5 or 1 in binary)
FLIP_TABLE = np.array(
    [[float(flip_probability(a, s)) for s in BasisState] for a in EveAction],
    dtype=np.float64,
)


@dataclass(frozen=True)
class NoAttack:
    pass


@dataclass(frozen=True)
class IIDAttack:
    """Each position independently gets X, Y, Z or a measurement with the given odds."""

    p_x: float = 0.0
    p_y: float = 0.0
    p_z: float = 0.0
    p_meas: float = 0.0
    meas_basis: str = "Z"

    def __post_init__(self):
        probs = (self.p_x, self.p_y, self.p_z, self.p_meas)
        if any(p < 0 for p in probs) or sum(probs) > 1 + 1e-12:
            raise ValueError("IID probabilities must be non-negative and sum to <= 1")
        if self.meas_basis not in ("Z", "X"):
            raise ValueError("meas_basis must be 'Z' or 'X'")


@dataclass(frozen=True)
class FixedBudgetAttack:
    """Exactly ``budget`` positions, chosen uniformly without replacement, get ``action``."""

    budget: int
    action: EveAction = EveAction.PAULI_X

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("budget must be non-negative")
        object.__setattr__(self, "action", EveAction(self.action))


AttackStrategy = Union[NoAttack, IIDAttack, FixedBudgetAttack]


@dataclass(frozen=True, eq=False)
class AttackPlan:
    """Eve's action at every channel position (an int8 array of EveAction codes)."""

    actions: np.ndarray

    def __len__(self) -> int:
        return len(self.actions)

    def __eq__(self, other):
        return isinstance(other, AttackPlan) and np.array_equal(self.actions, other.actions)

    def count(self, action: EveAction) -> int:
        return int(np.count_nonzero(self.actions == int(action)))


@dataclass(frozen=True, eq=False)
class ChannelOutcome:
    """What Bob holds after transmission.

    ``sampling_flips[i]`` is 1 when sampling qubit ``i`` (Alice's order) was
    found orthogonal to its prepared state; ``message_error`` is the effective
    Pauli on the M code qubits.
    """

    sampling_flips: np.ndarray
    message_error: PauliString

    def __eq__(self, other):
        return (
            isinstance(other, ChannelOutcome)
            and np.array_equal(self.sampling_flips, other.sampling_flips)
            and self.message_error == other.message_error
        )


def prepare_sampling_states(N: int, rng: np.random.Generator) -> np.ndarray:
    """N sampling states drawn i.i.d. uniformly from the four BasisState values."""
    if N < 1:
        raise ValueError("need at least one sampling qubit")
    return rng.integers(0, 4, size=N, dtype=np.int8)


def make_attack_plan(strategy: AttackStrategy, total: int, rng: np.random.Generator) -> AttackPlan:
    """Expand a strategy into per-position actions over ``total`` channel slots."""
    if total < 1:
        raise ValueError("total must be positive")
    actions = np.zeros(total, dtype=np.int8)
    if isinstance(strategy, NoAttack):
        pass
    elif isinstance(strategy, IIDAttack):
        meas = EveAction.MEAS_Z if strategy.meas_basis == "Z" else EveAction.MEAS_X
        edges = np.cumsum([strategy.p_x, strategy.p_y, strategy.p_z, strategy.p_meas])
        codes = np.array([EveAction.PAULI_X, EveAction.PAULI_Y, EveAction.PAULI_Z, meas, 0],
                         dtype=np.int8)
        u = rng.random(total)
        actions = codes[np.searchsorted(edges, u, side="right")]
    elif isinstance(strategy, FixedBudgetAttack):
        if strategy.budget > total:
            raise ValueError(f"budget {strategy.budget} exceeds {total} positions")
        hit = rng.choice(total, size=strategy.budget, replace=False)
        actions[hit] = int(strategy.action)
    else:
        raise TypeError(f"unknown attack strategy {strategy!r}")
    return AttackPlan(actions)


def plan_on_positions(action: EveAction, positions: Sequence[int], total: int) -> AttackPlan:
    """Place ``action`` at explicit channel positions.

    For diagnostics only (e.g. forcing errors onto known message positions);
    a real adversary has no way to target positions like this.
    """
    actions = np.zeros(total, dtype=np.int8)
    actions[np.asarray(positions, dtype=np.int64)] = int(action)
    return AttackPlan(actions)


def _check_permutation(permutation: np.ndarray, total: int) -> None:
    if len(permutation) != total:
        raise ValueError("permutation length must equal N + M")
    seen = np.zeros(total, dtype=bool)
    seen[permutation] = True
    if not seen.all():
        raise ValueError("permutation is not a bijection")


def transmit(sampling_states: np.ndarray, M: int, permutation: np.ndarray,
             plan: AttackPlan, rng: np.random.Generator) -> ChannelOutcome:
    """Send Alice's registers through Eve's plan; Bob measures sampling qubits in their prepared basis.

    Registers are in Alice's order, message qubits ``0..M-1`` first, and
    ``permutation[r]`` is the channel position of register ``r``.
    Measurements on message qubits act as a dephasing channel: MEAS_Z leaves
    a Z error with probability 1/2 (MEAS_X an X error).
    """
    states = np.asarray(sampling_states, dtype=np.int8)
    N = len(states)
    permutation = np.asarray(permutation, dtype=np.int64)
    if M < 1 or N < 1:
        raise ValueError("need at least one message and one sampling qubit")
    if len(plan) != N + M:
        raise ValueError(f"attack plan covers {len(plan)} positions, expected {N + M}")
    _check_permutation(permutation, N + M)

    acts = plan.actions[permutation]
    msg, samp = acts[:M], acts[M:]

    flips = (rng.random(N) < FLIP_TABLE[samp, states]).astype(np.uint8)

    coins = rng.random(M) < 0.5
    x_part = (msg == EveAction.PAULI_X) | (msg == EveAction.PAULI_Y) | ((msg == EveAction.MEAS_X) & coins)
    z_part = (msg == EveAction.PAULI_Z) | (msg == EveAction.PAULI_Y) | ((msg == EveAction.MEAS_Z) & coins)
    return ChannelOutcome(flips, PauliString.from_bits(x_part, z_part))
