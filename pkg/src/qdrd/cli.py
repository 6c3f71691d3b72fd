"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 numerical error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import matrix_core as mc
from .counting import OpCounter
from .detector import METHODS, candidate_metrics, find_counterexample, llr_from_metrics, result_from_metrics
from .factorization import full_qr_householder, qdrd_sqrt_free, thin_qr_mgs
from .harness import (
    ExperimentConfig,
    counterexample_summary,
    format_counterexample,
    ledger_for_instance,
    rows_to_csv,
    run_montecarlo,
)
from .lstsq import solve_ls_qdrd, solve_ls_qr
from .mimo import MimoInstance, constellation_by_name, sample_instance

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2
CONSTELLATIONS = ("qam4", "qam16", "qam64")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _fmt(v: complex) -> str:
    return f"{float(v.real)!r}:{float(v.imag)!r}"


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_factor(args) -> int:
    a = mc.read_matrix(args.input)
    counter = OpCounter()
    prefix = args.out
    if args.method == "thin-qr":
        f = thin_qr_mgs(a, counter)
        mc.write_matrix(f"{prefix}.Q", f.q)
        mc.write_matrix(f"{prefix}.R", f.r)
    elif args.method == "full-qr":
        f = full_qr_householder(a, counter)
        mc.write_matrix(f"{prefix}.Qbar", f.q_bar)
        mc.write_matrix(f"{prefix}.Rbar", f.r_bar)
    else:
        f = qdrd_sqrt_free(a, counter)
        mc.write_matrix(f"{prefix}.Qp", f.q_prime)
        mc.write_matrix(f"{prefix}.Dp", f.d_prime[:, None])
        mc.write_matrix(f"{prefix}.Rp", f.r_prime)
    Path(f"{prefix}.ops").write_text(counter.report() + "\n")
    return EXIT_OK


def cmd_solve(args) -> int:
    a = mc.read_matrix(args.A)
    y = mc.as_vector(mc.read_matrix(args.y))
    counter = OpCounter()
    solver = solve_ls_qr if args.method == "qr" else solve_ls_qdrd
    sol = solver(a, y, counter)
    lines = [_fmt(v) for v in sol.x_star]
    lines.append(f"residual_sq {sol.residual_sq!r}")
    lines.append(counter.report())
    print("\n".join(lines))
    return EXIT_OK


def cmd_detect(args) -> int:
    a = mc.read_matrix(args.A)
    y = mc.as_vector(mc.read_matrix(args.y))
    c = constellation_by_name(args.constellation)
    inst = MimoInstance(a, y)
    counter = OpCounter()
    metrics = candidate_metrics(inst, c, args.method, counter)
    res = result_from_metrics(metrics, c, inst.n)
    lines = [f"best_index {res.best_index}", "best_vector"]
    lines += [_fmt(v) for v in res.best_vector]
    lines.append(f"min_metric {res.min_metric!r}")
    if args.soft:
        llr = llr_from_metrics(metrics, c, inst.n)
        lines.append("llr " + " ".join(repr(float(v)) for v in llr.llr))
    lines.append(counter.report())
    print("\n".join(lines))
    return EXIT_OK


def cmd_montecarlo(args) -> int:
    cfg = ExperimentConfig(
        m=args.m,
        n=args.n,
        constellation=args.constellation,
        snr_db_list=args.snr_db,
        trials=args.trials,
        seed=args.seed,
        methods=args.methods,
    )
    _write_or_print(rows_to_csv(run_montecarlo(cfg)), args.out)
    return EXIT_OK


def cmd_counterexample(args) -> int:
    c = constellation_by_name(args.constellation)
    ce = find_counterexample(args.m, args.n, c, args.snr_db, args.max_trials, args.seed)
    if ce is None:
        print(f"no counterexample found in {args.max_trials} trials")
        return EXIT_OK
    Path(args.out).write_text(format_counterexample(ce, c, args.snr_db, args.seed))
    print(counterexample_summary(ce))
    return EXIT_OK


def cmd_opcount(args) -> int:
    c = constellation_by_name(args.constellation)
    inst = sample_instance(args.m, args.n, args.snr_db, c, args.seed)
    report, counters = ledger_for_instance(inst, c)
    parts = [report.text()]
    for name, cnt in counters.items():
        parts.append(f"-- {name}\n{cnt.report()}")
    print("\n".join(parts))
    return EXIT_OK if report.ok else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qdrd", description="QR vs. square-root-free QDRD for least squares and MIMO detection")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("factor", help="factor a matrix file")
    f.add_argument("--input", required=True)
    f.add_argument("--method", choices=("thin-qr", "full-qr", "qdrd"), required=True)
    f.add_argument("--out", required=True, help="output prefix")
    f.set_defaults(func=cmd_factor)

    s = sub.add_parser("solve", help="unconstrained least squares")
    s.add_argument("--A", required=True)
    s.add_argument("--y", required=True)
    s.add_argument("--method", choices=("qr", "qdrd"), required=True)
    s.set_defaults(func=cmd_solve)

    d = sub.add_parser("detect", help="exhaustive finite-set detection")
    d.add_argument("--A", required=True)
    d.add_argument("--y", required=True)
    d.add_argument("--constellation", choices=CONSTELLATIONS, required=True)
    d.add_argument("--method", choices=METHODS, required=True)
    d.add_argument("--soft", action="store_true", help="also print per-bit LLRs")
    d.set_defaults(func=cmd_detect)

    mc_ = sub.add_parser("montecarlo", help="SER / mismatch / op-count sweep to CSV")
    mc_.add_argument("--m", type=int, required=True)
    mc_.add_argument("--n", type=int, required=True)
    mc_.add_argument("--constellation", choices=CONSTELLATIONS, required=True)
    mc_.add_argument("--snr-db", type=float, nargs="+", required=True)
    mc_.add_argument("--trials", type=int, required=True)
    mc_.add_argument("--seed", type=int, default=0)
    mc_.add_argument("--methods", nargs="+", choices=METHODS, default=list(METHODS))
    mc_.add_argument("--out")
    mc_.set_defaults(func=cmd_montecarlo)

    ce = sub.add_parser("counterexample", help="search for an unweighted-QDRD ordering violation")
    ce.add_argument("--m", type=int, required=True)
    ce.add_argument("--n", type=int, required=True)
    ce.add_argument("--constellation", choices=CONSTELLATIONS, required=True)
    ce.add_argument("--snr-db", type=float, required=True)
    ce.add_argument("--max-trials", type=int, required=True)
    ce.add_argument("--seed", type=int, required=True)
    ce.add_argument("--out", required=True)
    ce.set_defaults(func=cmd_counterexample)

    oc = sub.add_parser("opcount", help="integer operation ledger on one sampled instance")
    oc.add_argument("--m", type=int, required=True)
    oc.add_argument("--n", type=int, required=True)
    oc.add_argument("--constellation", choices=CONSTELLATIONS, required=True)
    oc.add_argument("--snr-db", type=float, default=10.0)
    oc.add_argument("--seed", type=int, default=0)
    oc.set_defaults(func=cmd_opcount)
    return p


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except np.linalg.LinAlgError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli_main())
