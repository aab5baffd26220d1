"""Exit criteria for the package, one test per criterion.

Run with ``pytest tests/test_acceptance.py``; a PASS/FAIL line per criterion
is printed in the terminal summary.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from oneway_purify.channel import AttackPlan, ChannelOutcome, prepare_sampling_states, transmit
from oneway_purify.cli import bounds_summary, main
from oneway_purify.codes import CodeSpec, LogicalEffect, decode_and_classify
from oneway_purify.experiments import (
    ExperimentConfig,
    default_grid,
    run_monte_carlo,
    sampling_violation_rate,
    verify_bounds,
)
from oneway_purify.pauli import BasisState, EveAction, PauliString, flip_probability, paulis_of_weight
from oneway_purify.protocol import ProtocolConfig, SharedKey, alice_prepare, bob_process
from oneway_purify.sampling import classical_error_bound, quantum_error_bound

from oracles import transition_probability

pytestmark = pytest.mark.acceptance

KEY = SharedKey(b"acceptance-suite-shared-key")


# 1 -------------------------------------------------------------------------

@pytest.mark.parametrize("action,p", [
    (EveAction.PAULI_X, Fraction(1, 2)),
    (EveAction.PAULI_Z, Fraction(1, 2)),
    (EveAction.PAULI_Y, Fraction(1)),
    (EveAction.MEAS_Z, Fraction(1, 4)),
    (EveAction.MEAS_X, Fraction(1, 4)),
], ids=lambda v: getattr(v, "name", str(v)))
def test_c01_detection_statistics(criterion, action, p):
    N, M = 100_000, 25
    start = time.perf_counter()
    rng = np.random.default_rng(1000 + int(action))
    states = prepare_sampling_states(N, rng)
    plan = AttackPlan(np.full(N + M, int(action), dtype=np.int8))
    out = transmit(states, M, rng.permutation(N + M), plan, rng)
    omega = Fraction(int(out.sampling_flips.sum()), N)
    elapsed = time.perf_counter() - start
    sigma = math.sqrt(float(p * (1 - p)) / N)
    if p == 1:
        ok = omega == 1
    else:
        ok = abs(float(omega - p)) <= 5 * sigma
    criterion(1, f"detection statistics {action.name}", ok and elapsed < 5,
              f"omega_hat={float(omega):.5f} expected={p} 5sigma={5 * sigma:.5f} t={elapsed:.2f}s")


# 2 -------------------------------------------------------------------------

def test_c02_flip_probability_vs_matrix_oracle(criterion):
    mismatches = [
        (a.name, s.name) for a in EveAction for s in BasisState
        if flip_probability(a, s) != transition_probability(a.name, s.name)
    ]
    criterion(2, "flip_probability == 2x2 matrix / Born-rule oracle on all 24 pairs",
              not mismatches, f"mismatches={mismatches}")


# 3 -------------------------------------------------------------------------

def test_c03_bound_dominates_exact_oracle(criterion):
    start = time.perf_counter()
    rows = verify_bounds(default_grid(16, (0.1, 0.2, 0.3, 0.5)))
    elapsed = time.perf_counter() - start
    bad = [r for r in rows if r["status"] != "pass"]
    independent = all(
        r["exact"] <= min(1.0, 4 * math.exp(-r["delta"] ** 2 * r["k"] / 3)) for r in rows
    )
    criterion(3, "exact failure <= min(1, 4 exp(-d^2 k/3)) for n<=16, all k, weights, deltas",
              not bad and independent and elapsed < 120,
              f"points={len(rows)} failing={len(bad)} t={elapsed:.2f}s")


# 4 -------------------------------------------------------------------------

def test_c04_sqrt_identity(criterion):
    deltas = np.linspace(0.005, 1.0, 40)
    # k capped so that 4 exp(-d^2 k/3) never underflows on this grid
    ks = np.unique(np.geomspace(10, 2000, 25).astype(int))
    worst = 0.0
    points = 0
    for delta in deltas:
        for k in ks:
            q = quantum_error_bound(float(delta), int(k), clamp=False)
            c = classical_error_bound(float(delta), int(k), clamp=False)
            if c == 0:
                continue
            points += 1
            worst = max(worst, abs(q * q - c) / math.ulp(c))
    criterion(4, "quantum_bound^2 == unclamped classical bound within 2 ulp",
              worst <= 2 and points == 1000, f"points={points} worst={worst:.2f} ulp")


# 5 -------------------------------------------------------------------------

def test_c05_worked_example(criterion, capsys):
    s = bounds_summary(0.02, 20000, M=25, d=5, gate_factor=2, m_omega=Fraction(1, 2))
    main(["bounds", "--delta", "0.02", "--k", "20000", "--m", "25", "--d", "5",
          "--m-omega", "1/2"])
    out = capsys.readouterr().out
    derived = 1 - 2 * math.exp(-4 / 3)
    ok = (
        abs(s["delta_saturating"] - 0.02) < 1e-12
        and abs(s["success_probability"] - derived) <= 1e-4
        and abs(s["alt_success_probability"] - 0.8610) <= 1e-4
        and abs(s["alt_success_probability"] - (1 - 2 * math.exp(-8 / 3))) <= 1e-12
        and "0.4728" in out and "0.8610" in out and "DISCREPANCY" in out
    )
    criterion(5, "worked example: delta=0.02, both success figures side by side", ok,
              f"delta={s['delta_saturating']:.6g} success={s['success_probability']:.6f} "
              f"alt={s['alt_success_probability']:.6f}")


# 6 -------------------------------------------------------------------------

def _figure_two(message_weight, flips, N=2500):
    M, d = 25, 5
    spec = CodeSpec.abstract(d, M)
    _, msg = alice_prepare(ProtocolConfig(M, N, d), KEY, np.random.default_rng(6))
    sampling = np.zeros(N, dtype=np.uint8)
    sampling[:flips] = 1
    err = PauliString.from_label("X" * message_weight + "I" * (M - message_weight))
    return bob_process(ChannelOutcome(sampling, err), msg, KEY, spec), spec


def test_c06_figure_two_scenario(criterion):
    ok2, spec = _figure_two(2, flips=100)          # M * omega_hat = 25 * 100/2500 = 1
    ok3, _ = _figure_two(3, flips=100)
    high3, _ = _figure_two(3, flips=150)           # M * omega_hat = 3/2 -> 3 gates
    good = (ok2.est_gates == 2 and ok2.accepted and ok2.logical_effect == "CorrectableSuccess")
    loud = all(
        (not r.accepted) or r.logical_effect == "UncorrectableFailure" for r in (ok3, high3)
    )
    never_silent = not any(r.accepted and r.logical_effect == "CorrectableSuccess"
                           for r in (ok3, high3))
    criterion(6, "d=5: weight 2 accepted and corrected; weight 3 aborts or is recorded as failure",
              good and loud and never_silent and ok3.undetected_failure(spec.t)
              and not high3.accepted,
              f"w2: gates={ok2.est_gates} {ok2.logical_effect}; w3: {ok3.logical_effect}; "
              f"w3 high estimate: accepted={high3.accepted}")


# 7 -------------------------------------------------------------------------

def test_c07_concrete_code_soundness(criterion, codes):
    start = time.perf_counter()
    counts, failures = {}, []
    for name, code in codes.items():
        counts[name] = 0
        for w in range(1, code.t + 1):
            for e in paulis_of_weight(code.n, w, code.error_letters):
                counts[name] += 1
                if decode_and_classify(code, e) is not LogicalEffect.IDENTITY:
                    failures.append((name, e.label))
        if decode_and_classify(code, PauliString.identity(code.n)) is not LogicalEffect.IDENTITY:
            failures.append((name, "identity"))
    elapsed = time.perf_counter() - start
    expected = {"repetition_z(3)": 3, "five_one_three": 15, "surface_d3": 27}
    criterion(7, "every error of weight <= t decodes to Identity on all three codes",
              not failures and counts == expected and elapsed < 60,
              f"cases={counts} failures={failures} t={elapsed:.2f}s")


# 8 -------------------------------------------------------------------------

def test_c08_undetected_failure_bound(criterion):
    N, T = 2000, 10_000
    start = time.perf_counter()
    rows, ok = [], True
    # Threshold is ~160 gates at N=2000, M=25, d=5: accept everywhere / ~half / almost never.
    for budget in (100, 160, 220):
        cfg = ExperimentConfig(N=N, trials=T, attack="fixed", budget=budget, seed=budget)
        report, results = run_monte_carlo(cfg)
        for delta in (0.04, 0.06, 0.08, 0.10):
            eps = quantum_error_bound(delta, N)
            rate = sampling_violation_rate(results, delta)
            limit = eps + 5 * math.sqrt(eps / T)
            ok &= rate <= limit
            rows.append(f"g={budget} d={delta}: {rate:.4f}<={limit:.4f}")
    elapsed = time.perf_counter() - start
    criterion(8, "P[accepted and true weight > omega_hat + delta] <= eps_qu + 5 sqrt(eps_qu/T)",
              ok and elapsed < 120, f"t={elapsed:.1f}s " + "; ".join(rows))


# 9 -------------------------------------------------------------------------

def test_c09_determinism(criterion, tmp_path, capsys):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("N: 1000\nattack: iid\np_x: 0.01\np_meas: 0.01\ncode: abstract\n")
    outputs = []
    for run in ("a", "b"):
        out_dir = tmp_path / run
        assert main(["mc", "--config", str(cfg), "--trials", "200", "--seed", "77",
                     "--out", str(out_dir), "--format", "csv"]) == 0
        outputs.append({p.name: p.read_bytes() for p in sorted(out_dir.iterdir())})
    capsys.readouterr()
    same = outputs[0] == outputs[1] and set(outputs[0]) == {"trials.csv", "report.json", "report.txt"}
    criterion(9, "mc twice with the same config and seed is byte-identical", same,
              f"files={sorted(outputs[0])}")


# 10 ------------------------------------------------------------------------

@pytest.mark.parametrize("kw", [
    dict(code="abstract", M=25, d=5, N=2000),
    dict(code="abstract", M=40, d=9, N=500, gate_factor=4),
    dict(code="repetition3", N=200),
    dict(code="five13", N=200),
    dict(code="surface3", N=200),
], ids=lambda kw: f"{kw['code']}-N{kw['N']}")
def test_c10_identity_path(criterion, kw):
    _, results = run_monte_carlo(ExperimentConfig(trials=1000, attack="none", seed=10, **kw))
    ok = all(
        r.omega_hat == 0 and r.accepted and r.logical_effect in ("Identity", "CorrectableSuccess")
        for r in results
    ) and len(results) == 1000
    effects = sorted({r.logical_effect for r in results})
    criterion(10, f"no attack ({kw['code']}): omega_hat=0, accepted, identity in 1000/1000", ok,
              f"effects={effects}")
