"""The one-way protocol: Alice prepares and sends, Bob samples and accepts or aborts.

Alice's registers are ordered message qubits first (``0..M-1``) and then the
N sampling qubits.  A permutation derived from the shared key scatters them
over channel positions.  The classical message carries the permutation, the
sampling states, d and the declared adversary model.  It is assumed
confidential and is authenticated here with an HMAC under the shared key.
"""

from __future__ import annotations

import hashlib
import hmac
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .channel import ChannelOutcome, prepare_sampling_states
from .codes import CodeSpec, abstract_accepts, logical_outcome
from .pauli import EveAction, mean_flip_probability, weight
from .sampling import (
    GATE_FACTORS,
    delta_for_acceptance,
    estimate_gate_count,
    quantum_error_bound,
    relative_hamming_weight,
)

_MEAN_FLIP_EXACT = [mean_flip_probability(a) for a in EveAction]


@dataclass(frozen=True)
class SharedKey:
    """Pre-shared secret; Eve never holds it."""

    secret: bytes

    def __post_init__(self):
        if len(self.secret) < 16:
            raise ValueError("shared key must be at least 16 bytes")

    @classmethod
    def derive(cls, seed: int, label: bytes = b"owep-shared-key") -> SharedKey:
        return cls(hashlib.sha256(label + int(seed).to_bytes(8, "little")).digest())


@dataclass(frozen=True)
class ProtocolConfig:
    M: int
    N: int
    d: int
    gate_factor: int = 2
    strict_margin: bool = False

    def __post_init__(self):
        if self.M < 1 or self.N < 1:
            raise ValueError("M and N must be positive")
        if self.d < 3 or self.d % 2 == 0:
            raise ValueError("d must be an odd integer >= 3")
        if self.gate_factor not in GATE_FACTORS:
            raise ValueError("gate_factor must be 2 or 4")

    @property
    def total(self) -> int:
        return self.M + self.N


def keyed_permutation(key: SharedKey, total: int) -> np.ndarray:
    """Uniform permutation of ``range(total)`` seeded by the key."""
    if total < 2:
        raise ValueError("need at least two positions to permute")
    seed = int.from_bytes(hashlib.sha256(b"perm" + key.secret).digest(), "little")
    return np.random.default_rng(seed).permutation(total)


@dataclass(frozen=True, eq=False)
class ClassicalMessage:
    """Alice's one message to Bob, sent over the keyed classical channel.

    ``sampling_states[i]`` is the state of register ``M + i``.
    """

    permutation: np.ndarray
    sampling_states: np.ndarray
    M: int
    d: int
    gate_factor: int
    tag: bytes = field(default=b"", repr=False)

    def payload(self) -> bytes:
        header = np.array([self.M, self.d, self.gate_factor], dtype=np.int64)
        return (
            header.tobytes()
            + np.asarray(self.permutation, dtype=np.int64).tobytes()
            + np.asarray(self.sampling_states, dtype=np.int8).tobytes()
        )

    def signed(self, key: SharedKey) -> ClassicalMessage:
        tag = hmac.new(key.secret, self.payload(), hashlib.sha256).digest()
        return ClassicalMessage(self.permutation, self.sampling_states,
                                self.M, self.d, self.gate_factor, tag)

    def verify(self, key: SharedKey) -> bool:
        expected = hmac.new(key.secret, self.payload(), hashlib.sha256).digest()
        return hmac.compare_digest(expected, self.tag)


@dataclass(frozen=True, eq=False)
class ChannelLayout:
    """Alice's private view of which channel position holds what."""

    permutation: np.ndarray
    sampling_states: np.ndarray
    M: int

    @property
    def total(self) -> int:
        return len(self.permutation)

    def is_sampling(self) -> np.ndarray:
        """Boolean mask over channel positions."""
        mask = np.zeros(self.total, dtype=bool)
        mask[self.permutation[self.M:]] = True
        return mask

    def message_positions(self) -> np.ndarray:
        return np.asarray(self.permutation[:self.M])

    def to_channel_order(self, registers: np.ndarray) -> np.ndarray:
        out = np.empty_like(registers)
        out[self.permutation] = registers
        return out

    def to_register_order(self, channel: np.ndarray) -> np.ndarray:
        return np.asarray(channel)[self.permutation]


def alice_prepare(config: ProtocolConfig, key: SharedKey,
                  rng: np.random.Generator) -> tuple[ChannelLayout, ClassicalMessage]:
    """Choose sampling states, permute registers with the key, and sign the message."""
    perm = keyed_permutation(key, config.total)
    states = prepare_sampling_states(config.N, rng)
    layout = ChannelLayout(perm, states, config.M)
    msg = ClassicalMessage(perm, states, config.M, config.d, config.gate_factor).signed(key)
    return layout, msg


@dataclass
class TrialResult:
    """Transcript of one protocol execution.

    ``true_weight``, ``true_omega`` and ``true_gates`` are ground truth from
    the simulator, for analysis only; Bob never sees them.
    ``logical_effect`` is a LogicalEffect/AbstractOutcome value, or
    ``"Aborted"``.
    """

    seed: int
    omega_hat: Fraction
    delta: float
    epsilon_qu: float
    est_gates: Fraction
    accepted: bool
    true_weight: int
    logical_effect: str
    true_omega: Fraction = Fraction(0)
    true_gates: int = 0
    abort_reason: str = ""

    FIELDS = ("seed", "omega_hat", "delta", "epsilon_qu", "est_gates", "accepted",
              "true_weight", "logical_effect", "true_omega", "true_gates", "abort_reason")

    def record(self) -> dict:
        """Flat, JSON-ready view with the stable field order."""
        return {
            "seed": self.seed,
            "omega_hat": float(self.omega_hat),
            "delta": self.delta,
            "epsilon_qu": self.epsilon_qu,
            "est_gates": float(self.est_gates),
            "accepted": self.accepted,
            "true_weight": self.true_weight,
            "logical_effect": self.logical_effect,
            "true_omega": float(self.true_omega),
            "true_gates": self.true_gates,
            "abort_reason": self.abort_reason,
        }

    def undetected_failure(self, t: int) -> bool:
        """Accepted although the code was overrun or the logical qubit was hit."""
        return self.accepted and (
            self.true_weight > t
            or self.logical_effect not in ("Identity", "CorrectableSuccess")
        )


def message_ground_truth(layout: ChannelLayout, actions: np.ndarray) -> tuple[Fraction, int]:
    """Exact relative weight Eve induced on the message registers, and her gate count there."""
    msg_actions = np.asarray(actions)[layout.message_positions()]
    total = sum((_MEAN_FLIP_EXACT[a] for a in msg_actions.tolist()), Fraction(0))
    return total / layout.M, int(np.count_nonzero(msg_actions))


def bob_process(outcome: ChannelOutcome, msg: ClassicalMessage, key: SharedKey,
                code: CodeSpec, strict_margin: bool = False, seed: int = 0,
                ground_truth: Optional[tuple[Fraction, int]] = None) -> TrialResult:
    """Estimate Eve's interference from the sampling qubits and accept or abort.

    Acceptance follows ``gate_factor·M·ω̂ <= (d-1)/2``.  With
    ``strict_margin`` a zero or negative confidence margin δ also aborts.
    """
    true_omega, true_gates = ground_truth if ground_truth is not None else (Fraction(0), 0)
    true_weight = weight(outcome.message_error)

    def aborted(reason, omega=Fraction(0), delta=0.0, eps=1.0, gates=Fraction(0)):
        return TrialResult(seed, omega, delta, eps, gates, False, true_weight,
                           "Aborted", true_omega, true_gates, reason)

    if not msg.verify(key):
        return aborted("auth")
    N = len(msg.sampling_states)
    if len(outcome.sampling_flips) != N or outcome.message_error.n != msg.M:
        raise ValueError("channel outcome does not match the classical message")
    if (msg.M, msg.d) != (code.M, code.d):
        raise ValueError("classical message disagrees with the code in use")

    omega = relative_hamming_weight(outcome.sampling_flips)
    gates = estimate_gate_count(msg.M, omega, msg.gate_factor)
    delta = delta_for_acceptance(msg.M, omega, msg.d, msg.gate_factor)
    eps = quantum_error_bound(delta, N) if delta > 0 else 1.0

    if not abstract_accepts(gates, msg.d):
        return aborted("threshold", omega, delta, eps, gates)
    if strict_margin and delta <= 0:
        return aborted("no-margin", omega, delta, eps, gates)

    effect = logical_outcome(code, outcome.message_error).value
    return TrialResult(seed, omega, delta, eps, gates, True, true_weight, effect,
                       true_omega, true_gates, "")
