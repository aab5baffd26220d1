"""Command-line entry point: ``owep <subcommand>``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from . import __version__
from ._accel import BACKEND
from .codes import CODE_ALIASES, build_code, format_decoder_table
from .experiments import (
    FORMATS,
    ExperimentConfig,
    default_grid,
    format_bound_rows,
    run_monte_carlo,
    run_trial,
    summary_text,
    trial_seed,
    verify_bounds,
)
from .sampling import (
    alt_exponent,
    alt_exponent_success,
    classical_error_bound,
    delta_for_acceptance,
    estimate_gate_count,
    quantum_error_bound,
    success_exponent,
    success_probability,
)

log = logging.getLogger("oneway_purify")


def bounds_summary(delta: float, k: int, M=None, d=None, gate_factor: int = 2,
                   m_omega: Fraction = Fraction(0)) -> dict:
    out = {
        "delta": delta,
        "k": k,
        "eps_cl": classical_error_bound(delta, k),
        "eps_cl_unclamped": classical_error_bound(delta, k, clamp=False),
        "eps_qu": quantum_error_bound(delta, k),
        "eps_qu_unclamped": quantum_error_bound(delta, k, clamp=False),
    }
    if M is None or d is None:
        return out
    omega = Fraction(m_omega) / M
    sat = delta_for_acceptance(M, omega, d, gate_factor)
    out.update({
        "M": M, "d": d, "gate_factor": gate_factor,
        "m_omega": str(Fraction(m_omega)), "omega_hat": float(omega),
        "est_gates": float(estimate_gate_count(M, omega, gate_factor)),
        "delta_saturating": sat,
        "success_exponent": success_exponent(M, omega, d, k, gate_factor),
        "success_probability": success_probability(M, omega, d, k, gate_factor) if sat > 0 else None,
        "alt_exponent": alt_exponent(M, k),
        "alt_success_probability": alt_exponent_success(M, k),
    })
    return out


def _print_bounds(s: dict) -> None:
    print(f"eps_cl  = min(1, 4 exp(-delta^2 k/3)) = {s['eps_cl']:.6g}"
          f"   (unclamped {s['eps_cl_unclamped']:.6g})   delta={s['delta']} k={s['k']}")
    print(f"eps_qu  = min(1, 2 exp(-delta^2 k/6)) = {s['eps_qu']:.6g}"
          f"   (unclamped {s['eps_qu_unclamped']:.6g})")
    if "M" not in s:
        return
    print(f"M={s['M']} d={s['d']} gate_factor={s['gate_factor']} "
          f"M*omega_hat={s['m_omega']} (omega_hat={s['omega_hat']:.6g})")
    print(f"estimated gates                = {s['est_gates']:.6g}")
    print(f"saturating delta               = {s['delta_saturating']:.6g}")
    if s["success_probability"] is None:
        print("success probability            = n/a: delta <= 0, Bob must abort")
    else:
        print(f"success probability            = {s['success_probability']:.4f}"
              f"   [1 - 2 exp(-delta^2 k/6), exponent {s['success_exponent']:.6f}]")
    print(f"alternative success figure     = {s['alt_success_probability']:.4f}"
          f"   [1 - 2 exp(-k/(12 M^2)), exponent {s['alt_exponent']:.6f}]")
    if s["success_exponent"] > 0:
        ratio = s["alt_exponent"] / s["success_exponent"]
        print(f"DISCREPANCY: the alternative exponent is {ratio:.4g}x the bound-consistent one; "
              "both figures are shown, neither is adjusted")


def cmd_bounds(args) -> int:
    s = bounds_summary(args.delta, args.k, args.m, args.d, args.gate_factor,
                       Fraction(args.m_omega))
    if args.json:
        print(json.dumps(s, indent=2))
    else:
        _print_bounds(s)
    return 0


def cmd_run(args) -> int:
    cfg = ExperimentConfig.from_file(args.config)
    seed = args.seed if args.seed is not None else trial_seed(cfg.seed, 0)
    result = run_trial(cfg, seed=seed)
    transcript = {
        "config": cfg.as_dict(),
        "t": cfg.code_spec.t,
        "omega_hat_exact": str(result.omega_hat),
        "est_gates_exact": str(result.est_gates),
        **result.record(),
    }
    print(json.dumps(transcript, indent=2))
    return 0


def cmd_mc(args) -> int:
    cfg = ExperimentConfig.from_file(args.config)
    cfg.trials = args.trials
    if cfg.trials < 1:
        raise ValueError("--trials must be at least 1")
    if args.seed is not None:
        cfg.seed = args.seed
    fmt = args.format or cfg.format
    report, _ = run_monte_carlo(cfg, out_dir=args.out or cfg.out_dir, fmt=fmt)
    sys.stdout.write(summary_text(report, cfg))
    return 0


def cmd_oracle_verify(args) -> int:
    rows = verify_bounds(default_grid(args.max_n))
    counts = {s: sum(r["status"] == s for r in rows) for s in ("pass", "FAIL", "skipped")}
    checked = [r for r in rows if r["exact"] is not None]
    worst = max(checked, key=lambda r: float(r["exact"]) / r["bound"])
    print(f"grid: n<=%d, all k, all weights, delta in (0.1, 0.2, 0.3, 0.5); backend={BACKEND}"
          % args.max_n)
    print(f"points={len(rows)} pass={counts['pass']} FAIL={counts['FAIL']} "
          f"skipped={counts['skipped']}")
    print(f"largest exact/bound ratio: {float(worst['exact']) / worst['bound']:.6g} at "
          f"n={worst['n']} k={worst['k']} w={worst['weight']} delta={worst['delta']}")
    if args.verbose or counts["FAIL"]:
        sys.stdout.write(format_bound_rows(rows, only_failures=not args.verbose))
    return 1 if counts["FAIL"] else 0


def cmd_decoder_table(args) -> int:
    sys.stdout.write(format_decoder_table(build_code(args.code)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="owep",
        description="One-way entanglement purification with quantum sampling: bounds, "
                    "protocol trials and Monte Carlo experiments.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--log-level", default="WARNING")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="evaluate sampling bounds and the accept rule")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--k", type=int, required=True, help="number of sampling qubits")
    p.add_argument("--m", type=int, help="message (code) qubits")
    p.add_argument("--d", type=int, help="code distance")
    p.add_argument("--gate-factor", type=int, choices=(2, 4), default=2)
    p.add_argument("--m-omega", default="0",
                   help="estimated message Hamming weight M*omega_hat, e.g. 1/2 (default 0)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("run", help="run one protocol trial and print its transcript")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("mc", help="Monte Carlo over many trials")
    p.add_argument("--config", required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=FORMATS)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("oracle-verify", help="exhaustive bound-vs-oracle sweep")
    p.add_argument("--max-n", type=int, default=16)
    p.add_argument("--verbose", action="store_true", help="print every grid point")
    p.set_defaults(func=cmd_oracle_verify)

    p = sub.add_parser("decoder-table", help="dump a lookup decoder")
    p.add_argument("--code", required=True, choices=sorted(CODE_ALIASES))
    p.set_defaults(func=cmd_decoder_table)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
