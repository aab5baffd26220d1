import dataclasses
import math

import numpy as np
import pytest

from oneway_purify.channel import (
    AttackPlan,
    FixedBudgetAttack,
    IIDAttack,
    NoAttack,
    make_attack_plan,
    plan_on_positions,
    prepare_sampling_states,
    transmit,
)
from oneway_purify.pauli import BasisState, EveAction, PauliString, weight


def within_5_sigma(count, n, p):
    sigma = math.sqrt(n * p * (1 - p))
    return abs(count - n * p) <= 5 * sigma


class TestPrepare:
    def test_deterministic(self):
        a = prepare_sampling_states(4, np.random.default_rng(3))
        b = prepare_sampling_states(4, np.random.default_rng(3))
        assert np.array_equal(a, b)

    def test_uniform(self):
        states = prepare_sampling_states(40000, np.random.default_rng(1))
        for s in BasisState:
            assert within_5_sigma(int(np.count_nonzero(states == s)), 40000, 0.25)

    def test_single(self, rng):
        (s,) = prepare_sampling_states(1, rng)
        assert BasisState(s) in set(BasisState)

    def test_empty(self, rng):
        with pytest.raises(ValueError):
            prepare_sampling_states(0, rng)


class TestAttackPlan:
    def test_none(self, rng):
        plan = make_attack_plan(NoAttack(), 10, rng)
        assert plan.count(EveAction.IDENTITY) == 10

    def test_fixed_budget(self, rng):
        plan = make_attack_plan(FixedBudgetAttack(4, EveAction.PAULI_X), 29, rng)
        assert len(plan) == 29
        assert plan.count(EveAction.PAULI_X) == 4
        assert plan.count(EveAction.IDENTITY) == 25

    def test_degenerate_iid(self, rng):
        plan = make_attack_plan(IIDAttack(p_x=1.0), 10, rng)
        assert plan.count(EveAction.PAULI_X) == 10

    def test_iid_frequencies(self):
        plan = make_attack_plan(IIDAttack(0.1, 0.2, 0.3, 0.1, "X"), 50000, np.random.default_rng(2))
        for action, p in [(EveAction.PAULI_X, 0.1), (EveAction.PAULI_Y, 0.2),
                          (EveAction.PAULI_Z, 0.3), (EveAction.MEAS_X, 0.1),
                          (EveAction.IDENTITY, 0.3)]:
            assert within_5_sigma(plan.count(action), 50000, p)
        assert plan.count(EveAction.MEAS_Z) == 0

    def test_budget_too_large(self, rng):
        with pytest.raises(ValueError):
            make_attack_plan(FixedBudgetAttack(11), 10, rng)

    def test_bad_iid(self):
        with pytest.raises(ValueError):
            IIDAttack(0.6, 0.6)

    def test_deterministic(self):
        s = IIDAttack(0.2, 0.2, 0.2, 0.2)
        assert make_attack_plan(s, 100, np.random.default_rng(9)) == \
            make_attack_plan(s, 100, np.random.default_rng(9))

    def test_strategies_cannot_see_layout(self):
        forbidden = {"permutation", "sampling_states", "states", "layout", "positions"}
        for cls in (NoAttack, IIDAttack, FixedBudgetAttack):
            assert not forbidden & {f.name for f in dataclasses.fields(cls)}


def _send(action, N, M=5, seed=0):
    rng = np.random.default_rng(seed)
    states = prepare_sampling_states(N, rng)
    plan = AttackPlan(np.full(N + M, int(action), dtype=np.int8))
    perm = rng.permutation(N + M)
    return transmit(states, M, perm, plan, rng)


class TestTransmit:
    def test_noiseless(self):
        out = _send(EveAction.IDENTITY, 1000)
        assert not out.sampling_flips.any()
        assert out.message_error == PauliString.identity(5)

    def test_all_y_flips_everything(self):
        out = _send(EveAction.PAULI_Y, 1000)
        assert out.sampling_flips.all()
        assert out.message_error == PauliString.from_label("YYYYY")

    @pytest.mark.parametrize("action,p", [
        (EveAction.PAULI_X, 0.5), (EveAction.PAULI_Z, 0.5),
        (EveAction.MEAS_Z, 0.25), (EveAction.MEAS_X, 0.25),
    ])
    def test_flip_fraction(self, action, p):
        N = 100_000
        out = _send(action, N, seed=int(action))
        assert within_5_sigma(int(out.sampling_flips.sum()), N, p)

    def test_message_errors_follow_action(self):
        assert _send(EveAction.PAULI_X, 10).message_error == PauliString.from_label("XXXXX")
        assert _send(EveAction.PAULI_Z, 10).message_error == PauliString.from_label("ZZZZZ")

    def test_measurement_dephases_message(self):
        M, trials = 200, 50
        total = 0
        for seed in range(trials):
            err = _send(EveAction.MEAS_Z, 10, M=M, seed=seed).message_error
            assert err.x == 0
            total += weight(err)
        assert within_5_sigma(total, M * trials, 0.5)

    def test_permutation_routes_actions(self):
        # Eve hits channel position 0 only; whichever register sits there is affected.
        M, N = 3, 4
        perm = np.array([5, 0, 6, 1, 2, 3, 4])  # register 1 (a message qubit) -> position 0
        plan = plan_on_positions(EveAction.PAULI_X, [0], M + N)
        out = transmit(np.zeros(N, dtype=np.int8), M, perm, plan, np.random.default_rng(0))
        assert out.message_error == PauliString.from_label("IXI")
        assert not out.sampling_flips.any()

    def test_budget_split_between_message_and_sampling(self):
        M, N, g, T = 25, 475, 40, 2000
        rng = np.random.default_rng(11)
        hits = 0
        for _ in range(T):
            plan = make_attack_plan(FixedBudgetAttack(g), M + N, rng)
            hits += int(np.count_nonzero(plan.actions[:M]))
        mean = g * M / (M + N)
        # hypergeometric variance per trial
        var = g * (M / (M + N)) * (N / (M + N)) * ((M + N - g) / (M + N - 1))
        assert abs(hits / T - mean) <= 5 * math.sqrt(var / T)

    def test_deterministic(self):
        assert _send(EveAction.MEAS_X, 500, seed=4) == _send(EveAction.MEAS_X, 500, seed=4)

    def test_plan_length_checked(self, rng):
        with pytest.raises(ValueError):
            transmit(np.zeros(4, dtype=np.int8), 2, np.arange(6), AttackPlan(np.zeros(5, np.int8)), rng)

    def test_permutation_checked(self, rng):
        with pytest.raises(ValueError):
            transmit(np.zeros(4, dtype=np.int8), 2, np.array([0, 0, 1, 2, 3, 4]),
                     AttackPlan(np.zeros(6, np.int8)), rng)
