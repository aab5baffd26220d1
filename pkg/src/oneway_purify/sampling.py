"""Sampling error bounds, weight estimates and the exact enumeration oracle.

Closed-form quantities are evaluated in double precision.  The enumeration
oracle (``exact_classical_failure``) works in exact rationals so that it can
certify the closed-form bound without sharing any arithmetic with it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

from ._accel import overlap_histogram

GATE_FACTORS = (2, 4)
MAX_ENUMERATION = 10**7


class AbortRequired(ValueError):
    """The observed weight already saturates the code; Bob must abort."""


class EnumerationTooLarge(ValueError):
    """Exhaustive subset enumeration would exceed the configured guard."""


def _check_gate_factor(gate_factor: int) -> None:
    if gate_factor not in GATE_FACTORS:
        raise ValueError(f"gate_factor must be 2 or 4, got {gate_factor!r}")


def _as_fraction(value) -> Fraction:
    # Floats are read as the decimal they print as, so 0.1 means 1/10.
    if isinstance(value, Rational):
        return Fraction(value)
    return Fraction(repr(float(value)))


@dataclass(frozen=True)
class SamplingEstimate:
    """Everything Bob derives from one round of sampling."""

    omega_hat: Fraction
    k: int
    M: int
    delta: float
    epsilon_qu: float
    gate_factor: int = 2

    def __post_init__(self):
        if not 0 <= self.omega_hat <= 1:
            raise ValueError("omega_hat must lie in [0, 1]")
        if self.k < 1 or self.M < 1:
            raise ValueError("k and M must be positive")
        _check_gate_factor(self.gate_factor)

    @classmethod
    def from_observation(cls, omega_hat, k: int, M: int, d: int, gate_factor: int = 2):
        """Build the estimate for code distance ``d``; ``epsilon_qu`` is 1 when δ ≤ 0."""
        delta = delta_for_acceptance(M, omega_hat, d, gate_factor)
        eps = quantum_error_bound(delta, k) if delta > 0 else 1.0
        return cls(Fraction(omega_hat), k, M, delta, eps, gate_factor)


def relative_hamming_weight(bits: Sequence[int]) -> Fraction:
    """Fraction of ones in ``bits``."""
    n = len(bits)
    if n == 0:
        raise ValueError("relative Hamming weight of an empty sample is undefined")
    return Fraction(int(sum(int(b) for b in bits)), n)


def _check_bound_args(delta: float, k: int) -> None:
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k!r}")


def classical_error_bound(delta: float, k: int, clamp: bool = True) -> float:
    """Failure bound ``4 exp(-δ²k/3)`` for estimating weight from a random k-subset."""
    _check_bound_args(delta, k)
    value = 4.0 * math.exp(-(delta * delta * k / 3.0))
    return min(1.0, value) if clamp else value


def quantum_error_bound(delta: float, k: int, clamp: bool = True) -> float:
    """Quantum failure bound ``2 exp(-δ²k/6)``, the square root of the classical one."""
    _check_bound_args(delta, k)
    # Halving the classical exponent is exact in binary, so the square of this
    # value tracks classical_error_bound(clamp=False) to rounding error only.
    value = 2.0 * math.exp(-(delta * delta * k / 3.0) / 2.0)
    return min(1.0, value) if clamp else value


def delta_for_acceptance(M: int, omega_hat, d: int, gate_factor: int = 2) -> float:
    """Slack δ that saturates the code: ``gate_factor·M·(ω̂+δ) = (d-1)/2``.

    A non-positive result means the code is already saturated by the estimate.
    """
    _check_gate_factor(gate_factor)
    if M < 1:
        raise ValueError("M must be positive")
    if d < 3 or d % 2 == 0:
        raise ValueError(f"d must be an odd integer >= 3, got {d!r}")
    if not 0 <= omega_hat <= 1:
        raise ValueError("omega_hat must lie in [0, 1]")
    if isinstance(omega_hat, Rational):
        return float(Fraction(d - 1, 2 * gate_factor * M) - omega_hat)
    return (d - 1) / (2 * gate_factor * M) - float(omega_hat)


def estimate_gate_count(M: int, omega_hat, gate_factor: int = 2):
    """Adversarial operations implied by the estimate: ``gate_factor·M·ω̂``.

    Exact (a ``Fraction``) when ``omega_hat`` is rational.
    """
    _check_gate_factor(gate_factor)
    if not 0 <= omega_hat <= 1:
        raise ValueError("omega_hat must lie in [0, 1]")
    return gate_factor * M * omega_hat


def success_probability(M: int, omega_hat, d: int, k: int, gate_factor: int = 2) -> float:
    """Probability that the true weight stays within the correctable range.

    Raises:
        AbortRequired: the saturating δ is not positive.
    """
    delta = delta_for_acceptance(M, omega_hat, d, gate_factor)
    if delta <= 0:
        raise AbortRequired(
            f"observed weight saturates distance {d} (delta={delta:g}); abort"
        )
    return 1.0 - quantum_error_bound(delta, k)


def success_exponent(M: int, omega_hat, d: int, k: int, gate_factor: int = 2) -> float:
    """The exponent ``δ²k/6`` inside ``success_probability``."""
    delta = delta_for_acceptance(M, omega_hat, d, gate_factor)
    return delta * delta * k / 6.0


def alt_exponent_success(M: int, k: int) -> float:
    """``1 - 2 exp(-k/(12 M²))``.

    This is the success figure quoted for the d=5, Mω̂=1/2 worked example.  Its
    exponent is twice the one ``success_probability`` uses for those inputs,
    so the two disagree (0.861 vs 0.473 at M=25, k=20000).  Kept only so the
    discrepancy can be shown side by side; it is not used for decisions.
    """
    if M < 1 or k < 1:
        raise ValueError("M and k must be positive")
    return 1.0 - 2.0 * math.exp(-k / (12.0 * M * M))


def alt_exponent(M: int, k: int) -> float:
    return k / (12.0 * M * M)


def _bits_to_mask(q) -> tuple[int, int]:
    if isinstance(q, str):
        bits = [int(ch) for ch in q]
    else:
        bits = [int(b) for b in q]
    if any(b not in (0, 1) for b in bits):
        raise ValueError("q must be a bit string")
    return len(bits), sum(1 << i for i, b in enumerate(bits) if b)


def _fails(w_sample: int, w_rest: int, k: int, rest: int, delta: Fraction) -> bool:
    # |w_rest/rest - w_sample/k| >= delta, cleared of denominators
    gap = abs(w_rest * k - w_sample * rest)
    return gap * delta.denominator >= delta.numerator * k * rest


def failure_from_histogram(counts: Sequence[int], n: int, k: int, weight: int, delta) -> Fraction:
    """Exact failure probability given subset counts indexed by sampled weight."""
    delta = _as_fraction(delta)
    total = sum(counts)
    bad = sum(
        c for j, c in enumerate(counts)
        if c and _fails(j, weight - j, k, n - k, delta)
    )
    return Fraction(bad, total)


def exact_classical_failure(q, k: int, delta) -> Fraction:
    """Exact probability that a uniformly random k-subset misestimates ``q`` by ≥ δ.

    Enumerates every k-subset ``t`` of the positions of ``q`` and counts those
    with ``|ω(q_rest) - ω(q_t)| >= δ``.  Float ``delta`` values are read as
    their shortest decimal representation.

    Raises:
        EnumerationTooLarge: more than ``MAX_ENUMERATION`` subsets.
    """
    n, mask = _bits_to_mask(q)
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    if not delta > 0:
        raise ValueError("delta must be positive")
    if math.comb(n, k) > MAX_ENUMERATION:
        raise EnumerationTooLarge(
            f"C({n},{k}) = {math.comb(n, k)} subsets exceeds {MAX_ENUMERATION}; "
            "use a Monte Carlo estimate instead"
        )
    counts = overlap_histogram(n, k, mask)
    return failure_from_histogram(counts, n, k, mask.bit_count(), delta)


def hypergeometric_failure(n: int, k: int, weight: int, delta) -> Fraction:
    """Closed-form counterpart of ``exact_classical_failure`` for any ``n``.

    Uses the hypergeometric law of the sampled weight instead of enumeration.
    """
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    if not 0 <= weight <= n:
        raise ValueError("weight must lie in [0, n]")
    counts = [math.comb(weight, j) * math.comb(n - weight, k - j) for j in range(k + 1)]
    return failure_from_histogram(counts, n, k, weight, delta)
