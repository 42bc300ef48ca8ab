"""Batch experiment runner.

Each subcommand runs one verification experiment, writes a CSV table or a
JSON report, and exits 0 if every bound check passed, 1 if a statistical
bound was violated beyond 3 standard errors, 2 on invalid configuration.
Runs are deterministic: the same argv (including --seed) produces
byte-identical CSV regardless of --workers.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

import numpy as np

from . import circuits, game, info, training
from .rng import RandomStack
from .torus import GridShift, TorusPoint

DEFAULT_SEED = 1234567891
SEED_ENV_VAR = "PLATEAULAB_SEED"

EXIT_OK = 0
EXIT_BOUND_VIOLATION = 1
EXIT_BAD_CONFIG = 2


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return format(v, ".17g")
    if v is None:
        return ""
    return str(v)


def _write_report(report: dict, fmt: str, out: str | None) -> None:
    if fmt == "csv":
        lines = [",".join(report["columns"])]
        for row in report["rows"]:
            lines.append(",".join(_fmt(row[c]) for c in report["columns"]))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(report, indent=2, default=str) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _digest(config: dict) -> str:
    return hashlib.sha256(
        json.dumps(config, sort_keys=True).encode()
    ).hexdigest()


def _report(config: dict, columns: list[str], rows: list[dict], checks: list[dict], t0: float) -> dict:
    return {
        "config": config,
        "config_digest": _digest(config),
        "columns": columns,
        "rows": rows,
        "checks": checks,
        "wall_time_s": time.monotonic() - t0,
    }


def _check(name: str, passed: bool, margin_sigmas=None) -> dict:
    return {"name": name, "passed": bool(passed), "margin_sigmas": margin_sigmas}


# --- subcommand implementations ---------------------------------------------

def _cmd_verify_circuit(args) -> tuple[dict, float]:
    t0 = time.monotonic()
    rows = []
    worst = 0.0
    for n in range(1, args.n_max + 1):
        stack = RandomStack(args.seed, n)
        max_dev = 0.0
        for _ in range(args.trials):
            u = stack.pop()
            hidden = GridShift.from_index(n, min(int((u + 1) / 2 * 3**n), 3**n - 1))
            f = circuits.ShiftedProductFunction(n, hidden)
            x = TorusPoint((stack.pop_batch(n) + 1.0) / 2.0)
            max_dev = max(max_dev, abs(circuits.tensor_sim(f, x) - f(x)))
        worst = max(worst, max_dev)
        rows.append({"n": n, "trials": args.trials, "max_abs_dev": max_dev})
    anchor_err = max(
        abs(circuits.single_qubit_sim(0.0) - 1.0),
        abs(circuits.single_qubit_sim(1.0 / 3.0)),
        abs(circuits.single_qubit_sim(2.0 / 3.0)),
    )
    checks = [
        _check("tensor-vs-analytic-agreement", worst <= args.tol),
        _check("single-qubit-anchor-values", anchor_err <= 1e-12),
    ]
    config = vars(args).copy()
    config.pop("func", None)
    return _report(config, ["n", "trials", "max_abs_dev"], rows, checks, t0), worst


def cmd_verify_circuit(args) -> int:
    report, _ = _cmd_verify_circuit(args)
    _write_report(report, args.format, args.out)
    return EXIT_OK if all(c["passed"] for c in report["checks"]) else EXIT_BOUND_VIOLATION


def cmd_bounds(args) -> int:
    t0 = time.monotonic()
    rows = []
    ok_hoeffding = ok_tight = True
    for n in range(1, args.n_max + 1):
        b = game.bounds(n)
        rows.append(
            {
                "n": n,
                "delta": b.delta,
                "p_exact": b.p_exact,
                "p_hoeffding": b.p_hoeffding,
            }
        )
        ok_hoeffding &= b.p_exact <= b.p_hoeffding
        ok_tight &= b.p_exact <= float(np.exp(-n / 18))
    checks = [
        _check("p-exact-below-hoeffding", ok_hoeffding),
        _check("p-exact-below-tight-exponent", ok_tight),
    ]
    config = vars(args).copy()
    config.pop("func", None)
    report = _report(config, ["n", "delta", "p_exact", "p_hoeffding"], rows, checks, t0)
    _write_report(report, args.format, args.out)
    return EXIT_OK if ok_hoeffding and ok_tight else EXIT_BOUND_VIOLATION


def cmd_game(args) -> int:
    t0 = time.monotonic()
    rows_raw = game.estimate_win_cdf(
        args.n, args.strategy, args.trials, args.m_max, args.seed, args.workers
    )
    rows = [
        {
            "m": r.m,
            "cdf": r.cdf,
            "stderr": r.stderr,
            "bound": r.bound,
            "exceeded": r.exceeded,
        }
        for r in rows_raw
    ]
    passed = not any(r.exceeded for r in rows_raw)
    checks = [_check("win-cdf-linear-bound", passed)]
    config = vars(args).copy()
    config.pop("func", None)
    report = _report(config, ["m", "cdf", "stderr", "bound", "exceeded"], rows, checks, t0)
    _write_report(report, args.format, args.out)
    return EXIT_OK if passed else EXIT_BOUND_VIOLATION


def cmd_train(args) -> int:
    t0 = time.monotonic()
    alpha = args.alpha
    if alpha is None:
        alpha = training.default_alpha(args.n)  # raises for n <= 3
    results = training.trainer_sweep(
        args.algo, args.n, alpha, args.budget, args.trials, args.seed, args.workers
    )
    rows = [
        {
            "trial": t,
            "queries_total": q,
            "succeeded": s,
            "first_exit": fe,
        }
        for t, q, s, fe in results
    ]
    config = vars(args).copy()
    config.pop("func", None)
    config["alpha"] = alpha
    report = _report(
        config, ["trial", "queries_total", "succeeded", "first_exit"], rows, [], t0
    )
    qs = [q for _, q, _, _ in results]
    report["summary"] = {
        "median_queries": float(np.median(qs)),
        "success_rate": sum(1 for _, _, s, _ in results if s) / len(results),
    }
    _write_report(report, args.format, args.out)
    return EXIT_OK


def cmd_exit_time(args) -> int:
    t0 = time.monotonic()
    rows_raw = training.exit_time_experiment(
        args.algo, args.n, args.m_max, args.trials, args.seed, args.workers
    )
    rows = [
        {
            "m": r.m,
            "cdf": r.cdf,
            "stderr": r.stderr,
            "bound": r.bound,
            "exceeded": r.exceeded,
        }
        for r in rows_raw
    ]
    passed = not any(r.exceeded for r in rows_raw)
    checks = [_check("exit-cdf-bound", passed)]
    config = vars(args).copy()
    config.pop("func", None)
    report = _report(config, ["m", "cdf", "stderr", "bound", "exceeded"], rows, checks, t0)
    _write_report(report, args.format, args.out)
    return EXIT_OK if passed else EXIT_BOUND_VIOLATION


def cmd_diverge(args) -> int:
    t0 = time.monotonic()
    phat, stderr = training.divergence_experiment(
        args.algo, args.n, args.m, args.trials, args.eta, args.seed, args.workers
    )
    bound = game.delta_bound(args.n) * args.m / 2.0
    exceeded = phat > bound + 3 * stderr
    margin = (bound - phat) / stderr if stderr > 0 else None
    rows = [
        {
            "n": args.n,
            "m": args.m,
            "trials": args.trials,
            "divergence_rate": phat,
            "stderr": stderr,
            "bound": bound,
            "exceeded": exceeded,
        }
    ]
    checks = [_check("divergence-rate-bound", not exceeded, margin)]
    config = vars(args).copy()
    config.pop("func", None)
    report = _report(
        config,
        ["n", "m", "trials", "divergence_rate", "stderr", "bound", "exceeded"],
        rows,
        checks,
        t0,
    )
    _write_report(report, args.format, args.out)
    return EXIT_OK if not exceeded else EXIT_BOUND_VIOLATION


def cmd_mi(args) -> int:
    t0 = time.monotonic()
    if args.strategy == "fixed":
        point = tuple(float(v) for v in args.point.split(","))
        spec = ("fixed", point)
    else:
        spec = "uniform"
    mi, stderr = info.transcript_mi(
        args.n, spec, args.m, args.transcripts, args.seed, args.workers
    )
    upper = args.n * info.LOG2_3
    ok = -3 * stderr <= mi <= upper + 3 * stderr
    rows = [
        {
            "n": args.n,
            "m": args.m,
            "transcripts": args.transcripts,
            "mi_bits": mi,
            "stderr": stderr,
        }
    ]
    checks = [_check("mi-information-range", ok)]
    config = vars(args).copy()
    config.pop("func", None)
    report = _report(
        config, ["n", "m", "transcripts", "mi_bits", "stderr"], rows, checks, t0
    )
    _write_report(report, args.format, args.out)
    return EXIT_OK if ok else EXIT_BOUND_VIOLATION


def cmd_identify(args) -> int:
    t0 = time.monotonic()
    unique_rate, correct_rate, ambiguous = info.identification_rates(
        args.n, args.trials, args.tol, args.seed, args.workers
    )
    ok = correct_rate == 1.0
    rows = [
        {
            "n": args.n,
            "trials": args.trials,
            "unique_rate": unique_rate,
            "correct_rate": correct_rate,
            "ambiguous": ambiguous,
        }
    ]
    checks = [_check("single-query-identification", ok)]
    config = vars(args).copy()
    config.pop("func", None)
    report = _report(
        config,
        ["n", "trials", "unique_rate", "correct_rate", "ambiguous"],
        rows,
        checks,
        t0,
    )
    _write_report(report, args.format, args.out)
    return EXIT_OK if ok else EXIT_BOUND_VIOLATION


# --- parser -----------------------------------------------------------------

def _default_seed() -> int:
    env = os.environ.get(SEED_ENV_VAR)
    return int(env) if env else DEFAULT_SEED


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=_default_seed(), help="master seed")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plateaulab",
        description="Verification experiments for plateau-landscape query bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-circuit", help="statevector vs analytic cross-check")
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-9)
    _add_common(p)
    p.set_defaults(func=cmd_verify_circuit)

    p = sub.add_parser("bounds", help="delta, exact p and Hoeffding p per n")
    p.add_argument("--n-max", type=int, default=12)
    _add_common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("game", help="plateau-game win-round CDF vs linear bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--strategy", choices=sorted(game.STRATEGIES), default="uniform")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--m-max", type=int, default=50)
    _add_common(p)
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("train", help="run trainers against the sample oracle")
    p.add_argument("--algo", choices=training.ALGORITHMS, default="random")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--budget", type=int, default=100000)
    _add_common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("exit-time", help="first-exit CDF vs combined bound")
    p.add_argument("--algo", choices=training.ALGORITHMS, default="random")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--m-max", type=int, default=50)
    _add_common(p)
    p.set_defaults(func=cmd_exit_time)

    p = sub.add_parser("diverge", help="coupled-run divergence rate vs bound")
    p.add_argument("--algo", choices=training.ALGORITHMS, default="random")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=10)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--eta", type=float, default=0.0)
    _add_common(p)
    p.set_defaults(func=cmd_diverge)

    p = sub.add_parser("mi", help="mutual information of sample transcripts")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=10)
    p.add_argument("--transcripts", type=int, default=10000)
    p.add_argument("--strategy", choices=("uniform", "fixed"), default="uniform")
    p.add_argument("--point", default=None, help="comma-separated fixed query point")
    _add_common(p)
    p.set_defaults(func=cmd_mi)

    p = sub.add_parser("identify", help="one-shot identification from an evaluation")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--tol", type=float, default=1e-9)
    _add_common(p)
    p.set_defaults(func=cmd_identify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "mi" and args.strategy == "fixed" and not args.point:
        print("error: --strategy fixed requires --point", file=sys.stderr)
        return EXIT_BAD_CONFIG
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG


run_command = main


if __name__ == "__main__":
    sys.exit(main())
