"""Command-line interface: solve, generate, bench.

Exit codes: 0 solved/generated, 2 max_iters, 3 diverged, 1 usage or
parse errors. Errors print a message, never a traceback.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import BenchJob, bench_csv, run_bench, shape_for_nnz
from .fileio import ParseError, parse_problem, trace_csv, write_problem, write_solution
from .generate import GenSpec, generate
from .solver import SolverConfig, solve

__all__ = ["run_cli", "main"]

EXIT_CODES = {"solved": 0, "max_iters": 2, "diverged": 3}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser():
    parser = _Parser(prog="conefree", description="Matrix-free conic solver")
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="solve a problem file")
    ps.add_argument("file", help="problem file (CONEPROB format)")
    ps.add_argument("--mu", type=float, default=1.0, help="penalty parameter")
    ps.add_argument("--max-iters", type=int, default=100_000)
    ps.add_argument("--check-every", type=int, default=25)
    ps.add_argument("--term", choices=["osqp", "scs", "target"], default="scs")
    ps.add_argument("--eps-abs", type=float, default=1e-4, help="osqp mode")
    ps.add_argument("--eps-rel", type=float, default=1e-3, help="osqp mode")
    ps.add_argument("--eps", type=float, default=1e-3,
                    help="scs mode: eps_prim = eps_dual = eps_gap")
    ps.add_argument("--target-prim", type=float, help="target mode")
    ps.add_argument("--target-gap", type=float, help="target mode")
    ps.add_argument("--out", help="solution file (default: <file>.sol)")
    ps.add_argument("--trace", help="write residual trace CSV here")

    pg = sub.add_parser("generate", help="generate a random instance")
    pg.add_argument("--m", type=int, required=True)
    pg.add_argument("--n", type=int, required=True)
    pg.add_argument("--density", type=float, required=True)
    pg.add_argument("--cone", choices=["lp", "socp4"], required=True)
    pg.add_argument("--seed", type=int, required=True)
    pg.add_argument("--out", required=True)
    pg.add_argument("--raw-c", action="store_true",
                    help="draw c i.i.d. normal instead of the bounded recipe")

    pb = sub.add_parser("bench", help="sweep instances, write a CSV")
    pb.add_argument("--sizes", required=True,
                    help="comma-separated target nonzero counts, e.g. 1e4,1e5")
    pb.add_argument("--densities", required=True,
                    help="comma-separated densities, e.g. 0.001,0.01")
    pb.add_argument("--cone", choices=["lp", "socp4"], required=True)
    pb.add_argument("--seed", type=int, required=True)
    pb.add_argument("--out", required=True)
    pb.add_argument("--mu", type=float, default=1.0)
    pb.add_argument("--term", choices=["osqp", "scs", "target"], default="scs")
    pb.add_argument("--eps", type=float, default=1e-3)
    pb.add_argument("--max-iters", type=int, default=100_000)
    pb.add_argument("--check-every", type=int, default=25)
    pb.add_argument("--workers", type=int, default=None,
                    help="override CONEFREE_THREADS worker cap")
    return parser


def _solver_config(args) -> SolverConfig:
    return SolverConfig(
        mu=args.mu,
        max_iters=args.max_iters,
        check_every=args.check_every,
        term_mode=args.term,
        eps_abs=args.eps_abs,
        eps_rel=args.eps_rel,
        eps_prim=args.eps,
        eps_dual=args.eps,
        eps_gap=args.eps,
        target_prim_res=args.target_prim,
        target_gap=args.target_gap,
    )


def _cmd_solve(args) -> int:
    text = Path(args.file).read_text(encoding="utf-8")
    problem = parse_problem(text)
    cfg = _solver_config(args)
    result = solve(problem, cfg)
    rep = result.report

    out_path = Path(args.out) if args.out else Path(args.file + ".sol")
    out_path.write_text(
        write_solution(rep.status, rep.pobj, rep.dobj, rep.iter, result.x, result.lam),
        encoding="utf-8",
    )
    if args.trace:
        Path(args.trace).write_text(trace_csv(result.trace), encoding="utf-8")

    print(f"STATUS {rep.status}")
    print(f"ITERS {rep.iter}")
    print(f"POBJ {rep.pobj!r}")
    print(f"DOBJ {rep.dobj!r}")
    print(f"PRIM_RES_2 {rep.prim_res_2!r}")
    print(f"DUAL_RES_2 {rep.dual_res_2!r}")
    print(f"STAT_RES_2 {rep.stat_res_2!r}")
    print(f"GAP {rep.gap!r}")
    print(f"CONE_GAP {rep.cone_gap!r}")
    print(f"WROTE {out_path}")
    return EXIT_CODES.get(rep.status, 1)


def _cmd_generate(args) -> int:
    spec = GenSpec(
        m=args.m,
        n=args.n,
        density=args.density,
        cone_kind=args.cone,
        seed=args.seed,
        bounded_mode=not args.raw_c,
    )
    problem = generate(spec)
    Path(args.out).write_text(write_problem(problem), encoding="utf-8")
    print(f"WROTE {args.out} ({problem.m}x{problem.n}, nnz={problem.A.nnz})")
    return 0


def _parse_list(text, kind, what):
    try:
        return [kind(float(tok)) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"could not parse {what} list {text!r}") from None


def _cmd_bench(args) -> int:
    sizes = _parse_list(args.sizes, int, "--sizes")
    densities = _parse_list(args.densities, float, "--densities")
    if not sizes or not densities:
        raise UsageError("--sizes and --densities must be non-empty")
    cfg = SolverConfig(
        mu=args.mu,
        max_iters=args.max_iters,
        check_every=args.check_every,
        term_mode=args.term,
        eps_prim=args.eps,
        eps_dual=args.eps,
        eps_gap=args.eps,
    )
    jobs = []
    instance_id = 0
    for density in densities:
        for nnz in sizes:
            m, n = shape_for_nnz(nnz, density, args.cone)
            jobs.append(
                BenchJob(
                    instance_id=instance_id,
                    gen=GenSpec(
                        m=m,
                        n=n,
                        density=density,
                        cone_kind=args.cone,
                        seed=args.seed + instance_id,
                    ),
                    cfg=cfg,
                )
            )
            instance_id += 1
    rows = run_bench(jobs, workers=args.workers)
    Path(args.out).write_text(bench_csv(rows), encoding="utf-8")
    for row in rows:
        print(
            f"instance {row['instance_id']}: {row['m']}x{row['n']} "
            f"nnz={row['nnz']} iters={row['iters']} status={row['status']}"
        )
    print(f"WROTE {args.out}")
    statuses = {row["status"] for row in rows}
    if "diverged" in statuses:
        return 3
    if "max_iters" in statuses:
        return 2
    return 0


def run_cli(argv=None) -> int:
    """Parse argv and dispatch; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "generate":
            return _cmd_generate(args)
        return _cmd_bench(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run_cli())
