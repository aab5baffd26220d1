"""Simulation and analysis of one-way entanglement purification with quantum sampling."""

__version__ = "0.1.0"

from ._accel import BACKEND
from .channel import (
    AttackPlan,
    ChannelOutcome,
    FixedBudgetAttack,
    IIDAttack,
    NoAttack,
    make_attack_plan,
    prepare_sampling_states,
    transmit,
)
from .codes import (
    AbstractOutcome,
    CodeSpec,
    LogicalEffect,
    StabilizerCodeDef,
    abstract_accepts,
    build_code,
    build_decoder_table,
    decode_and_classify,
    syndrome,
)
from .pauli import (
    BasisState,
    EveAction,
    PauliString,
    commutes,
    compose,
    flip_probability,
    weight,
)
from .protocol import (
    ClassicalMessage,
    ProtocolConfig,
    SharedKey,
    TrialResult,
    alice_prepare,
    bob_process,
    keyed_permutation,
)
from .sampling import (
    AbortRequired,
    SamplingEstimate,
    classical_error_bound,
    delta_for_acceptance,
    estimate_gate_count,
    exact_classical_failure,
    quantum_error_bound,
    relative_hamming_weight,
    success_probability,
)
