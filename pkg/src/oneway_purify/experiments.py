"""Monte Carlo harness, bound-vs-oracle sweep and report writers."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
import yaml

from .channel import (
    FixedBudgetAttack,
    IIDAttack,
    NoAttack,
    make_attack_plan,
    plan_on_positions,
    transmit,
)
from .codes import CodeSpec
from .pauli import EveAction
from .protocol import (
    ProtocolConfig,
    SharedKey,
    TrialResult,
    alice_prepare,
    bob_process,
    message_ground_truth,
)
from .sampling import (
    MAX_ENUMERATION,
    classical_error_bound,
    delta_for_acceptance,
    failure_from_histogram,
    quantum_error_bound,
)
from ._accel import overlap_histogram

log = logging.getLogger(__name__)

ACTION_NAMES = {
    "identity": EveAction.IDENTITY,
    "x": EveAction.PAULI_X,
    "y": EveAction.PAULI_Y,
    "z": EveAction.PAULI_Z,
    "meas_z": EveAction.MEAS_Z,
    "meas_x": EveAction.MEAS_X,
}
FORMATS = ("csv", "jsonl", "text")


@dataclass
class ExperimentConfig:
    """Everything needed to reproduce a batch of protocol trials.

    ``code`` is ``"abstract"`` or a concrete code id (``repetition3``,
    ``five13``, ``surface3``, ...).  Concrete codes fix M and d; for the
    abstract model they default to 25 and 5.  ``attack`` is ``none``,
    ``iid`` or ``fixed``.  ``placement="message"`` puts a fixed
    budget directly on message qubits, which only a diagnostic can do.
    ``margin_delta`` is the δ used for the sampling-bound check; by default
    it is the code's full margin at ω̂ = 0.
    """

    M: Optional[int] = None
    N: int = 20000
    d: Optional[int] = None
    gate_factor: int = 2
    code: str = "abstract"
    attack: str = "none"
    p_x: float = 0.0
    p_y: float = 0.0
    p_z: float = 0.0
    p_meas: float = 0.0
    meas_basis: str = "Z"
    budget: int = 0
    action: str = "x"
    placement: str = "uniform"
    trials: int = 1000
    seed: int = 0
    out_dir: Optional[str] = None
    format: str = "csv"
    strict_margin: bool = False
    margin_delta: Optional[float] = None

    def __post_init__(self):
        if self.code != "abstract":
            spec = CodeSpec.concrete(self.code)
            for name, value in (("M", self.M), ("d", self.d)):
                if value is not None and value != getattr(spec, name):
                    raise ValueError(f"{name}={value} conflicts with code {self.code}")
            self.M, self.d = spec.M, spec.d
            self._code_spec = spec
        else:
            self.M = 25 if self.M is None else self.M
            self.d = 5 if self.d is None else self.d
            self._code_spec = CodeSpec.abstract(self.d, self.M)
        self.protocol = ProtocolConfig(self.M, self.N, self.d, self.gate_factor, self.strict_margin)
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if self.placement not in ("uniform", "message"):
            raise ValueError("placement must be 'uniform' or 'message'")
        if self.action not in ACTION_NAMES:
            raise ValueError(f"action must be one of {sorted(ACTION_NAMES)}")
        if self.placement == "message" and self.budget > self.M:
            raise ValueError("message placement budget exceeds M")
        self.strategy = self._make_strategy()
        if self.margin_delta is None:
            self.margin_delta = delta_for_acceptance(self.M, Fraction(0), self.d, self.gate_factor)
        if not self.margin_delta > 0:
            raise ValueError("margin_delta must be positive")

    def _make_strategy(self):
        if self.attack == "none":
            return NoAttack()
        if self.attack == "iid":
            return IIDAttack(self.p_x, self.p_y, self.p_z, self.p_meas, self.meas_basis)
        if self.attack == "fixed":
            return FixedBudgetAttack(self.budget, ACTION_NAMES[self.action])
        raise ValueError(f"attack must be none, iid or fixed, got {self.attack!r}")

    @property
    def code_spec(self) -> CodeSpec:
        return self._code_spec

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    @classmethod
    def from_mapping(cls, data: dict) -> ExperimentConfig:
        unknown = set(data) - set(cls.field_names())
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**data)

    @classmethod
    def from_file(cls, path) -> ExperimentConfig:
        """Load a flat YAML mapping; unknown keys are rejected."""
        with open(path) as fh:
            data = yaml.safe_load(fh) or {}
        if not isinstance(data, dict) or any(isinstance(v, (dict, list)) for v in data.values()):
            raise ValueError(f"{path}: config must be a flat key-value mapping")
        return cls.from_mapping(data)

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.field_names()}


def trial_seed(master_seed: int, index: int) -> int:
    """Stable 64-bit seed for trial ``index``; independent of T and run order."""
    ss = np.random.SeedSequence([int(master_seed), int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def run_trial(cfg: ExperimentConfig, index: int = 0, seed: Optional[int] = None) -> TrialResult:
    """One full protocol execution with a fresh key and randomness."""
    s = trial_seed(cfg.seed, index) if seed is None else int(seed)
    rng = np.random.default_rng(s)
    key = SharedKey.derive(s)
    layout, msg = alice_prepare(cfg.protocol, key, rng)
    total = cfg.protocol.total
    if cfg.placement == "message":
        targets = rng.choice(layout.message_positions(), size=cfg.budget, replace=False)
        plan = plan_on_positions(ACTION_NAMES[cfg.action], targets, total)
    else:
        plan = make_attack_plan(cfg.strategy, total, rng)
    outcome = transmit(layout.sampling_states, cfg.M, layout.permutation, plan, rng)
    truth = message_ground_truth(layout, plan.actions)
    return bob_process(outcome, msg, key, cfg.code_spec, cfg.strict_margin, s, truth)


@dataclass
class AggregateReport:
    """Summary of T trials.

    ``sampling_violation_rate`` counts accepted trials whose true message
    relative weight exceeded ``ω̂ + margin_delta``; ``bound_epsilon`` is the
    quantum sampling bound at that δ with k = N.
    """

    T: int
    accepted: int
    accept_rate: float
    abort_rate: float
    mean_omega_hat: float
    stderr_omega_hat: float
    undetected_failure_rate: float
    margin_delta: float
    bound_epsilon: float
    sampling_violation_rate: float
    records_path: Optional[str] = None

    def as_dict(self) -> dict:
        return asdict(self)


def aggregate(cfg: ExperimentConfig, results: Sequence[TrialResult]) -> AggregateReport:
    T = len(results)
    accepted = sum(r.accepted for r in results)
    omegas = np.array([float(r.omega_hat) for r in results])
    stderr = float(omegas.std(ddof=1) / math.sqrt(T)) if T > 1 else 0.0
    t = cfg.code_spec.t
    undetected = sum(r.undetected_failure(t) for r in results)
    return AggregateReport(
        T=T,
        accepted=accepted,
        accept_rate=accepted / T,
        abort_rate=(T - accepted) / T,
        mean_omega_hat=float(omegas.mean()),
        stderr_omega_hat=stderr,
        undetected_failure_rate=undetected / T,
        margin_delta=float(cfg.margin_delta),
        bound_epsilon=quantum_error_bound(float(cfg.margin_delta), cfg.N),
        sampling_violation_rate=sampling_violation_rate(results, cfg.margin_delta),
    )


def sampling_violation_rate(results: Sequence[TrialResult], delta) -> float:
    """Fraction of trials accepted while the true message weight exceeded ``ω̂ + δ``."""
    margin = Fraction(repr(float(delta)))
    hits = sum(r.accepted and r.true_omega > r.omega_hat + margin for r in results)
    return hits / len(results)


def run_monte_carlo(cfg: ExperimentConfig, out_dir=None, fmt: Optional[str] = None):
    """Run ``cfg.trials`` trials in index order and aggregate them.

    Writes per-trial records and the report when an output directory is given
    (argument or ``cfg.out_dir``).

    Returns:
        ``(report, results)``.
    """
    results = [run_trial(cfg, i) for i in range(cfg.trials)]
    report = aggregate(cfg, results)
    out_dir = out_dir if out_dir is not None else cfg.out_dir
    if out_dir is not None:
        emit_report(report, results, fmt or cfg.format, out_dir, cfg)
    log.info("mc: T=%d accept_rate=%.4f", report.T, report.accept_rate)
    return report, results


def _records_csv(results: Iterable[TrialResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TrialResult.FIELDS)
    for r in results:
        writer.writerow(r.record().values())
    return buf.getvalue()


def _records_jsonl(results: Iterable[TrialResult]) -> str:
    return "".join(json.dumps(r.record()) + "\n" for r in results)


def _records_text(results: Iterable[TrialResult]) -> str:
    rows = [" ".join(f"{f:>14}" for f in TrialResult.FIELDS)]
    for r in results:
        rows.append(" ".join(f"{str(v):>14}" for v in r.record().values()))
    return "\n".join(rows) + "\n"


def summary_text(report: AggregateReport, cfg: Optional[ExperimentConfig] = None) -> str:
    lines = []
    if cfg is not None:
        lines.append(
            f"config: M={cfg.M} N={cfg.N} d={cfg.d} gate_factor={cfg.gate_factor} "
            f"code={cfg.code} attack={cfg.attack} seed={cfg.seed}"
        )
    lines += [
        f"trials:                   {report.T}",
        f"accept rate:              {report.accept_rate:.6f}",
        f"abort rate:               {report.abort_rate:.6f}",
        f"mean omega_hat:           {report.mean_omega_hat:.6f} +/- {report.stderr_omega_hat:.6f}",
        f"undetected failure rate:  {report.undetected_failure_rate:.6f}",
        f"sampling violation rate:  {report.sampling_violation_rate:.6f} (delta={report.margin_delta:.6g})",
        f"theoretical eps_qu:       {report.bound_epsilon:.6g} (delta={report.margin_delta:.6g}, k=N)",
    ]
    if report.records_path:
        lines.append(f"records:                  {report.records_path}")
    return "\n".join(lines) + "\n"


def emit_report(report: AggregateReport, results: Sequence[TrialResult], fmt: str,
                out_dir, cfg: Optional[ExperimentConfig] = None) -> dict:
    """Write per-trial records plus ``report.json`` and ``report.txt`` to ``out_dir``.

    ``fmt`` picks the record file: ``trials.csv`` (header then one row per
    trial), ``trials.jsonl`` or ``trials.txt`` (fixed-width table).
    """
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    writer = {"csv": _records_csv, "jsonl": _records_jsonl, "text": _records_text}[fmt]
    ext = {"csv": "csv", "jsonl": "jsonl", "text": "txt"}[fmt]
    records = out / f"trials.{ext}"
    records.write_text(writer(results))
    report.records_path = records.name
    payload = report.as_dict()
    if cfg is not None:
        payload["config"] = cfg.as_dict()
    (out / "report.json").write_text(json.dumps(payload, indent=2) + "\n")
    (out / "report.txt").write_text(summary_text(report, cfg))
    return {"records": records, "report": out / "report.json", "summary": out / "report.txt"}


# --- bound-vs-oracle sweep -------------------------------------------------

DEFAULT_DELTAS = (0.1, 0.2, 0.3, 0.5)


def default_grid(max_n: int = 16, deltas: Sequence[float] = DEFAULT_DELTAS):
    """Every (n, k, δ, q) with q = w leading ones, for all weights w.

    The failure probability only depends on the weight of q, so one
    representative per weight covers every string.
    """
    for n in range(2, max_n + 1):
        for k in range(1, n):
            for w in range(n + 1):
                q = "1" * w + "0" * (n - w)
                for delta in deltas:
                    yield n, k, delta, q


def verify_bounds(grid) -> list[dict]:
    """Compare the exact enumerated failure with ``min(1, 4 exp(-δ²k/3))`` at each point.

    Points whose enumeration would exceed the guard are marked ``skipped``.
    """
    rows = []
    cache: dict[tuple[int, int, int], list[int]] = {}
    for n, k, delta, q in grid:
        bits = [int(c) for c in q] if isinstance(q, str) else [int(b) for b in q]
        mask = sum(1 << i for i, b in enumerate(bits) if b)
        row = {"n": n, "k": k, "weight": sum(bits), "delta": delta}
        if math.comb(n, k) > MAX_ENUMERATION:
            rows.append({**row, "exact": None, "bound": classical_error_bound(delta, k),
                         "status": "skipped"})
            continue
        counts = cache.get((n, k, mask))
        if counts is None:
            counts = cache[(n, k, mask)] = overlap_histogram(n, k, mask)
        exact = failure_from_histogram(counts, n, k, sum(bits), delta)
        bound = classical_error_bound(delta, k)
        rows.append({**row, "exact": exact, "bound": bound,
                     "status": "pass" if exact <= bound else "FAIL"})
    return rows


def format_bound_rows(rows: Sequence[dict], only_failures: bool = False) -> str:
    out = [f"{'n':>3} {'k':>3} {'w':>3} {'delta':>6} {'exact':>12} {'bound':>10} status"]
    for r in rows:
        if only_failures and r["status"] != "FAIL":
            continue
        exact = "-" if r["exact"] is None else f"{float(r['exact']):.6g}"
        out.append(f"{r['n']:>3} {r['k']:>3} {r['weight']:>3} {r['delta']:>6} "
                   f"{exact:>12} {r['bound']:>10.4g} {r['status']}")
    return "\n".join(out) + "\n"
